//! Random quantum operations through the Choi-Jamiolkowski correspondence.
//!
//! A state `sigma` on `H_A (x) H_B`, both of dimension `N`, with
//! `Tr_A sigma = 1/N` is the normalized Choi matrix of a trace-preserving
//! channel. `B` is the input and `A` the output:
//!
//! `Phi(rho)_{ij} = N sum_{k,l} sigma_{(i,k),(j,l)} rho_{kl}`.
//!
//! With row-major vectorization, `vec(X)[i N + j] = X_{ij}`, the matrix of
//! `Phi` is `S = N reshuffle(sigma)`, i.e. `S[(i,j),(k,l)] = N sigma[(i,k),(j,l)]`.
//! For one qubit the identity channel has `sigma = |Psi+><Psi+|`, whose
//! reshuffle is `1/2` times the 4x4 identity, so `S` is the identity.

use serde::{Deserialize, Serialize};

use crate::ensembles::{sample, DensityMatrix, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, kron, matmul, partial_trace, reshuffle, Complex64,
    ComplexMatrix, Subsystem,
};
use crate::sampling::SeededStream;

/// Smallest eigenvalue of `Tr_A omega` accepted by `to_channel_state`.
pub const DEFICIENCY_THRESHOLD: f64 = 1e-12;

/// Tolerance of the CPTP checks.
pub const CPTP_TOLERANCE: f64 = 1e-10;

/// Normalized Choi matrix of a CPTP map on dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    sigma: DensityMatrix,
    n: usize,
}

/// Numbers behind the CPTP verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CptpReport {
    pub n: usize,
    pub min_eigenvalue: f64,
    /// `max |Tr_A sigma - 1/N|`.
    pub tp_defect: f64,
    pub trace_defect: f64,
    pub hermiticity_defect: f64,
    pub completely_positive: bool,
    pub trace_preserving: bool,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.completely_positive && self.trace_preserving
    }
}

impl ChoiState {
    /// Checks the trace condition and positivity.
    pub fn new(sigma: DensityMatrix) -> Result<Self> {
        let n = channel_dim(sigma.n())?;
        let choi = Self { sigma, n };
        let report = choi.report()?;
        if !report.trace_preserving {
            return Err(Error::NotDensityMatrix(format!(
                "Tr_A sigma differs from 1/N by {:e}",
                report.tp_defect
            )));
        }
        if !report.completely_positive {
            return Err(Error::NotDensityMatrix(format!(
                "Choi matrix has eigenvalue {:e}",
                report.min_eigenvalue
            )));
        }
        Ok(choi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &ComplexMatrix {
        self.sigma.matrix()
    }

    pub fn as_state(&self) -> &DensityMatrix {
        &self.sigma
    }

    /// `N reshuffle(sigma)`, acting on row-major vectorized operators.
    pub fn superoperator(&self) -> ComplexMatrix {
        reshuffle(self.sigma(), self.n)
            .expect("Choi matrix is N^2 x N^2")
            .scale_real(self.n as f64)
    }

    /// `Phi(rho)` for an `N x N` operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "channel on dimension {n} applied to a {}x{} matrix",
                rho.rows(),
                rho.cols()
            )));
        }
        let vec = ComplexMatrix::new(n * n, 1, rho.data().to_vec())?;
        let out = matmul(&self.superoperator(), &vec)?;
        ComplexMatrix::new(n, n, out.into_data())
    }

    pub fn report(&self) -> Result<CptpReport> {
        let n = self.n;
        let sigma = self.sigma();
        let min_eigenvalue = hermitian_eigenvalues(sigma)?
            .lambdas()
            .last()
            .copied()
            .unwrap_or(0.0);
        let reduced = partial_trace(sigma, n, n, Subsystem::B)?;
        let target = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        let tp_defect = reduced.max_abs_diff(&target);
        let trace_defect = (sigma.trace() - Complex64::new(1.0, 0.0)).norm();
        Ok(CptpReport {
            n,
            min_eigenvalue,
            tp_defect,
            trace_defect,
            hermiticity_defect: sigma.hermiticity_defect(),
            completely_positive: min_eigenvalue >= -CPTP_TOLERANCE,
            trace_preserving: tp_defect < CPTP_TOLERANCE,
        })
    }
}

fn channel_dim(size: usize) -> Result<usize> {
    let n = (size as f64).sqrt().round() as usize;
    if n * n != size || n == 0 {
        return Err(Error::NotFactorable {
            size,
            dim_a: n,
            dim_b: n,
        });
    }
    Ok(n)
}

/// `sigma = (1/N) (1 (x) Y^{-1/2}) omega (1 (x) Y^{-1/2})` with `Y = Tr_A omega`.
pub fn to_channel_state(omega: &DensityMatrix) -> Result<ChoiState> {
    let n = channel_dim(omega.n())?;
    let y = partial_trace(omega.matrix(), n, n, Subsystem::B)?;
    let (values, vectors) = hermitian_eigen(&y)?;
    let min = values.last().copied().unwrap_or(0.0);
    if !(min > DEFICIENCY_THRESHOLD) {
        return Err(Error::EnvironmentDeficient(min));
    }
    let inv_sqrt = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * vectors[(j, k)].conj() / values[k].sqrt())
            .sum()
    });
    let m = kron(&ComplexMatrix::identity(n), &inv_sqrt);
    let mut sigma = matmul(&matmul(&m, omega.matrix())?, &m)?.scale_real(1.0 / n as f64);
    sigma.symmetrize();
    // remove the roundoff left in the trace
    let trace = sigma.trace().re;
    let sigma = DensityMatrix::new(sigma.scale_real(1.0 / trace), omega.spec().clone())?;
    ChoiState::new(sigma)
}

/// Samples `omega` from `spec` (dimension `N^2`) and maps it to a channel.
pub fn random_operation(
    n: usize,
    spec: &EnsembleSpec,
    rng: &mut SeededStream,
) -> Result<ChoiState> {
    if spec.n != n * n {
        return Err(Error::DimensionMismatch(format!(
            "channels on dimension {n} need states of dimension {}, got {}",
            n * n,
            spec.n
        )));
    }
    let omega = sample(spec, rng)?;
    to_channel_state(&omega)
}
