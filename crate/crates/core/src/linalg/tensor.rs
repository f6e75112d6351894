use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, C_ZERO};
use crate::error::{Error, Result};

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product with the standard block layout: block (i, j) is `a[i][j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let cols = ac * bc;
    let data = out.data_mut();
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * cols + j * bc;
                for (l, bkl) in b.row(k).iter().enumerate() {
                    data[row + l] = aij * bkl;
                }
            }
        }
    }
    out
}

/// Partial trace of an operator on `H_A (x) H_B`, keeping the requested factor.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let size = dim_a * dim_b;
    if !rho.is_square() || rho.rows() != size || dim_a == 0 || dim_b == 0 {
        return Err(Error::NotFactorable {
            size: rho.rows(),
            dim_a,
            dim_b,
        });
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b)
                .map(|k| rho[(i * dim_b + k, j * dim_b + k)])
                .sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a)
                .map(|i| rho[(i * dim_b + k, i * dim_b + l)])
                .sum()
        }),
    };
    Ok(out)
}

/// Reshuffle (realignment) of an `N^2 x N^2` matrix: the entry at block index
/// `(i,j; k,l)`, i.e. row `i*N + j` and column `k*N + l`, moves to
/// `(i,k; j,l)`. The map is an involution.
///
/// Worked example for `N = 2`: the maximally entangled projector
/// `|Psi+><Psi+|` has entries `1/2` at `(0,0;0,0)`, `(0,0;1,1)`, `(1,1;0,0)`
/// and `(1,1;1,1)`; these move to `(0,0;0,0)`, `(0,1;0,1)`, `(1,0;1,0)` and
/// `(1,1;1,1)`, giving `1/2` times the 4x4 identity.
pub fn reshuffle(sigma: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let size = n * n;
    if !sigma.is_square() || sigma.rows() != size || n == 0 {
        return Err(Error::NotFactorable {
            size: sigma.rows(),
            dim_a: n,
            dim_b: n,
        });
    }
    let mut out = ComplexMatrix::zeros(size, size);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = sigma[(i * n + j, k * n + l)];
                }
            }
        }
    }
    Ok(out)
}
