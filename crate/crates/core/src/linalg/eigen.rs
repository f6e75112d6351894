use super::{Complex64, ComplexMatrix, Spectrum, C_ZERO};
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-10;

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, in descending order.
///
/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson-style shifts; O(n^3) and no eigenvectors.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(h)?;
    let n = h.rows();
    let (mut d, mut e) = tridiagonalize(h);
    tridiagonal_ql(&mut d, &mut e)?;
    debug_assert_eq!(d.len(), n);
    Ok(Spectrum::from_eigenvalues(d))
}

/// Reduces a Hermitian matrix to a real symmetric tridiagonal matrix with the
/// same spectrum. Returns (diagonal, off-diagonal) with `e[i]` coupling i and
/// i+1 and `e[n-1] = 0`.
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a = h.data().to_vec();
    let mut e = vec![0.0; n];
    let mut v = vec![C_ZERO; n];
    let mut w = vec![C_ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let off = k + 1;
        let alpha = (0..m)
            .map(|i| a[(off + i) * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if alpha == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[off * n + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..m {
            v[i] = a[(off + i) * n + k];
        }
        v[0] += phase * alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // w = tau * A' v, A' the trailing block.
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            let mut acc = C_ZERO;
            for (aij, vj) in row.iter().zip(&v[..m]) {
                acc += aij * vj;
            }
            w[i] = acc * tau;
        }
        let beta: f64 = v[..m]
            .iter()
            .zip(&w[..m])
            .map(|(vi, wi)| (vi.conj() * wi).re)
            .sum();
        let half = 0.5 * tau * beta;
        for i in 0..m {
            w[i] -= v[i] * half;
        }
        // A' <- A' - v w^dagger - w v^dagger
        for i in 0..m {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for (j, aij) in row.iter_mut().enumerate() {
                *aij -= vi * w[j].conj() + wi * v[j].conj();
            }
        }
        e[k] = alpha;
    }

    let d: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    (d, e)
}

/// Implicit QL iteration on a symmetric tridiagonal matrix (eigenvalues only).
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 100 {
                return Err(Error::Domain(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in descending order and the matching
/// eigenvectors as the columns of a unitary matrix. Intended for small
/// matrices.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Rotate away a_pq: G = diag-phase on q, then a real rotation.
                let phase = apq / mag; // e^{i phi}
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ep = phase.conj(); // e^{-i phi}

                // A <- A G (columns p, q)
                for k in 0..n {
                    let (xp, xq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = xp * c - xq * ep * s;
                    a[(k, q)] = xp * s + xq * ep * c;
                }
                // A <- G^dagger A (rows p, q)
                for k in 0..n {
                    let (yp, yq) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = yp * c - yq * phase * s;
                    a[(q, k)] = yp * s + yq * phase * c;
                }
                a[(p, q)] = C_ZERO;
                a[(q, p)] = C_ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let (xp, xq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = xp * c - xq * ep * s;
                    v[(k, q)] = xp * s + xq * ep * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition:
/// `V f(Lambda) V^dagger`.
pub fn hermitian_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let n = h.rows();
    let fv: Vec<f64> = values.iter().map(|&x| f(x)).collect();
    let mut out = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = C_ZERO;
        for k in 0..n {
            acc += vectors[(i, k)] * fv[k] * vectors[(j, k)].conj();
        }
        acc
    });
    out.symmetrize();
    Ok(out)
}
