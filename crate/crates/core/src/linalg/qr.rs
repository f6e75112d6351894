use super::{Complex64, ComplexMatrix, C_ONE, C_ZERO};
use crate::error::{Error, Result};

/// Householder QR of a square matrix, normalized so that `R` has a positive
/// real diagonal. With that normalization the factorization is unique, and
/// `Q` of a Ginibre matrix is Haar distributed.
pub fn qr_unitary(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "QR expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let threshold = 1e-14 * a.frobenius_norm();

    // Column-major working copy: cols[j*n + i] = A[i][j], so each column is contiguous.
    let mut cols = a.transpose().into_data();
    let mut reflectors: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(n);
    let mut diag_phase = vec![C_ONE; n];

    for k in 0..n {
        let col = &cols[k * n + k..(k + 1) * n];
        let alpha = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha <= threshold || alpha == 0.0 {
            return Err(Error::RankDeficient {
                pivot: alpha,
                threshold,
            });
        }
        let x0 = col[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C_ONE
        };
        let mut v: Vec<Complex64> = col.to_vec();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // H x = -phase * alpha * e1
        cols[k * n + k] = -phase * alpha;
        for z in &mut cols[k * n + k + 1..(k + 1) * n] {
            *z = C_ZERO;
        }
        for j in (k + 1)..n {
            apply_reflector(&v, tau, &mut cols[j * n + k..(j + 1) * n]);
        }
        // R_kk = -phase * alpha; its phase is absorbed into Q below.
        diag_phase[k] = -phase;
        reflectors.push((v, tau));
    }

    // Q = H_0 H_1 ... H_{n-1}; q_cols[j*n + i] = Q[i][j].
    let mut q_cols = vec![C_ZERO; n * n];
    for j in 0..n {
        let col = &mut q_cols[j * n..(j + 1) * n];
        col[j] = C_ONE;
        for k in (0..=j.min(n - 1)).rev() {
            let (v, tau) = &reflectors[k];
            apply_reflector(v, *tau, &mut col[k..]);
        }
    }

    // Q' = Q diag(phase), R' = diag(phase)^* R so that diag(R') > 0.
    let q = ComplexMatrix::from_fn(n, n, |i, j| q_cols[j * n + i] * diag_phase[j]);
    let r = ComplexMatrix::from_fn(n, n, |i, j| {
        if j < i {
            C_ZERO
        } else if j == i {
            Complex64::new((cols[j * n + i] * diag_phase[i].conj()).re, 0.0)
        } else {
            cols[j * n + i] * diag_phase[i].conj()
        }
    });
    Ok((q, r))
}

/// x <- (I - tau v v^dagger) x
#[inline]
fn apply_reflector(v: &[Complex64], tau: f64, x: &mut [Complex64]) {
    let mut dot = C_ZERO;
    for (vi, xi) in v.iter().zip(x.iter()) {
        dot += vi.conj() * xi;
    }
    if dot == C_ZERO {
        return;
    }
    let f = dot * tau;
    for (vi, xi) in v.iter().zip(x.iter_mut()) {
        *xi -= f * vi;
    }
}
