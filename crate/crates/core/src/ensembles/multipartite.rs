use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, C_ZERO};
use crate::sampling::{haar_unitary, SeededStream};

use super::{DensityMatrix, EnsembleSpec};

/// Largest state vector the explicit construction will build.
pub const MULTIPARTITE_LIMIT: usize = 1 << 20;

/// Reduced state of subsystem 1 after projecting a product of `s` random
/// bipartite pure states on `2s` parties of dimension `N` onto maximally
/// entangled states of the pairs `(2,3), (4,5), ..., (2s-2, 2s-1)`.
///
/// Builds the full `N^{2s}`-amplitude vector; it is a correctness oracle for
/// the Ginibre product ensemble, not a production path.
pub fn sample_projected_multipartite(
    n: usize,
    s: usize,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    check_size(n, s)?;
    let unitaries: Vec<ComplexMatrix> = (0..s).map(|_| haar_unitary(n * n, rng)).collect();
    projected_multipartite_from_unitaries(n, &unitaries)
}

fn check_size(n: usize, s: usize) -> Result<usize> {
    if n == 0 || s == 0 {
        return Err(Error::InvalidSpec("need N >= 1 and s >= 1".into()));
    }
    let amplitudes = (n as u128).checked_pow(2 * s as u32).unwrap_or(u128::MAX);
    if amplitudes > MULTIPARTITE_LIMIT as u128 {
        return Err(Error::SizeGuard {
            amplitudes: amplitudes.min(usize::MAX as u128) as usize,
            limit: MULTIPARTITE_LIMIT,
        });
    }
    Ok(amplitudes as usize)
}

/// Same construction from given `N^2 x N^2` unitaries acting on the pairs
/// `(1,2), (3,4), ...` of the product state `|0, ..., 0>`.
pub fn projected_multipartite_from_unitaries(
    n: usize,
    unitaries: &[ComplexMatrix],
) -> Result<DensityMatrix> {
    let s = unitaries.len();
    let size = check_size(n, s)?;
    let pair = n * n;
    if unitaries
        .iter()
        .any(|u| u.rows() != pair || u.cols() != pair)
    {
        return Err(Error::DimensionMismatch(format!(
            "pair unitaries must be {pair}x{pair}"
        )));
    }

    // U |0,0> is the first column; party 1 is the most significant digit
    let mut psi = vec![Complex64::new(1.0, 0.0)];
    for u in unitaries {
        let column = u.column(0);
        let mut next = Vec::with_capacity(psi.len() * pair);
        for &x in &psi {
            next.extend(column.iter().map(|&c| x * c));
        }
        psi = next;
    }
    debug_assert_eq!(psi.len(), size);

    let parties = 2 * s;
    let stride = |party: usize| n.pow((parties - 1 - party) as u32);
    for m in 0..s.saturating_sub(1) {
        // 0-based parties (2m+1, 2m+2) are the 1-based pair (2m+2, 2m+3)
        psi = project_pair(&psi, n, stride(2 * m + 1), stride(2 * m + 2));
    }

    // reduced state of party 1: psi reshaped as N x N^{2s-1}, times its adjoint
    let rest = size / n;
    let phi = ComplexMatrix::new(n, rest, psi)?;
    let spec = EnsembleSpec::ginibre_product(n, s);
    DensityMatrix::from_factor(&phi, spec)
}

/// Applies `|Psi+><Psi+|` on the two parties with the given strides.
fn project_pair(psi: &[Complex64], n: usize, stride_b: usize, stride_c: usize) -> Vec<Complex64> {
    let mut out = vec![C_ZERO; psi.len()];
    let inv_n = 1.0 / n as f64;
    for base in 0..psi.len() {
        // visit each block once, at the index whose two digits are zero
        if !(base / stride_b).is_multiple_of(n) || !(base / stride_c).is_multiple_of(n) {
            continue;
        }
        let overlap: Complex64 = (0..n)
            .map(|mu| psi[base + mu * (stride_b + stride_c)])
            .sum();
        let value = overlap * inv_n;
        for nu in 0..n {
            out[base + nu * (stride_b + stride_c)] = value;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matmul, partial_trace, Subsystem};
    use crate::sampling::{haar_from_ginibre, Field};

    fn block_from_column(u: &ComplexMatrix, n: usize) -> ComplexMatrix {
        ComplexMatrix::new(n, n, u.column(0)).unwrap()
    }

    #[test]
    fn two_pairs_equal_matrix_product_of_shared_blocks() {
        let n = 2;
        let mut rng = SeededStream::new(21, 0);
        let (u1, z1) = haar_from_ginibre(n * n, Field::Complex, &mut rng);
        let (u2, z2) = haar_from_ginibre(n * n, Field::Complex, &mut rng);
        let rho = projected_multipartite_from_unitaries(n, &[u1, u2]).unwrap();
        // the first columns of U and of its Gaussian source differ only by a positive scale
        let g = block_from_column(&z1, n);
        let e = block_from_column(&z2, n);
        let w = matmul(&g, &e).unwrap();
        let direct = DensityMatrix::from_factor(&w, EnsembleSpec::ginibre_product(n, 2)).unwrap();
        assert!(rho.matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn single_pair_is_plain_partial_trace() {
        let n = 3;
        let mut rng = SeededStream::new(22, 0);
        let u = haar_unitary(n * n, &mut rng);
        let rho = projected_multipartite_from_unitaries(n, std::slice::from_ref(&u)).unwrap();
        let psi = u.column(0);
        let pure = ComplexMatrix::outer(&psi, &psi);
        let reduced = partial_trace(&pure, n, n, Subsystem::A).unwrap();
        assert!(rho.matrix().max_abs_diff(&reduced) < 1e-12);
    }

    #[test]
    fn three_pairs_match_triple_product() {
        let n = 2;
        let mut rng = SeededStream::new(23, 0);
        let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(n * n, &mut rng)).collect();
        let rho = projected_multipartite_from_unitaries(n, &us).unwrap();
        let blocks: Vec<ComplexMatrix> = us.iter().map(|u| block_from_column(u, n)).collect();
        let w = matmul(&matmul(&blocks[0], &blocks[1]).unwrap(), &blocks[2]).unwrap();
        let direct = DensityMatrix::from_factor(&w, EnsembleSpec::ginibre_product(n, 3)).unwrap();
        assert!(rho.matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn size_guard() {
        let mut rng = SeededStream::new(1, 0);
        assert!(matches!(
            sample_projected_multipartite(33, 2, &mut rng),
            Err(Error::SizeGuard { .. })
        ));
        assert_eq!(check_size(32, 2).unwrap(), MULTIPARTITE_LIMIT);
        assert!(matches!(check_size(2, 11), Err(Error::SizeGuard { .. })));
    }
}
