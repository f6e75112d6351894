use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below `-EIGEN_TOLERANCE` are treated as genuine negative
/// eigenvalues; anything in `[-EIGEN_TOLERANCE, 0)` is roundoff and clamped.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    n: usize,
    lambdas: Vec<f64>,
    trace_normalized: bool,
}

impl Spectrum {
    /// Wraps raw eigenvalues (any sign), sorting them in descending order.
    pub fn from_eigenvalues(mut lambdas: Vec<f64>) -> Self {
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Self {
            n: lambdas.len(),
            lambdas,
            trace_normalized: false,
        }
    }

    /// Spectrum of a density matrix: clamps roundoff negatives to zero and
    /// checks positivity and unit sum.
    pub fn of_state(lambdas: Vec<f64>) -> Result<Self> {
        let mut s = Self::from_eigenvalues(lambdas);
        if let Some(&min) = s.lambdas.last() {
            if min < -EIGEN_TOLERANCE {
                return Err(Error::NotDensityMatrix(format!(
                    "eigenvalue {min:e} is negative"
                )));
            }
        }
        for l in &mut s.lambdas {
            if *l < 0.0 {
                *l = 0.0;
            }
        }
        let total: f64 = s.lambdas.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::NotDensityMatrix(format!(
                "eigenvalues sum to {total}"
            )));
        }
        s.trace_normalized = true;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn is_trace_normalized(&self) -> bool {
        self.trace_normalized
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    pub fn largest(&self) -> f64 {
        self.lambdas.first().copied().unwrap_or(0.0)
    }

    /// Rescaled eigenvalues `x = N * lambda`.
    pub fn rescaled(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.lambdas.iter().map(|&l| n * l).collect()
    }
}
