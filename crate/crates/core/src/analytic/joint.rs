//! Joint eigenvalue densities on the probability simplex.

use std::f64::consts::PI;

use super::special::log_gamma;
use crate::error::{Error, Result};

fn check_simplex(lambdas: &[f64], n: usize) -> Result<()> {
    if lambdas.len() != n {
        return Err(Error::Domain(format!(
            "expected {n} eigenvalues, got {}",
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Domain(
            "eigenvalues must be strictly positive".into(),
        ));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("eigenvalues sum to {total}, not 1")));
    }
    Ok(())
}

/// `ln C_{N,K}` for the induced measure.
pub fn log_constant_induced(n: usize, k: usize) -> Result<f64> {
    let mut c = log_gamma((k * n) as f64)?;
    for j in 0..n {
        c -= log_gamma((k - j) as f64)? + log_gamma((n - j + 1) as f64)?;
    }
    Ok(c)
}

/// `ln C_N^B` for the Bures measure.
pub fn log_constant_bures(n: usize) -> Result<f64> {
    let nf = n as f64;
    let mut c = (nf * nf - nf) * 2f64.ln() + log_gamma(nf * nf / 2.0)? - 0.5 * nf * PI.ln();
    for j in 1..=n {
        c -= log_gamma(j as f64 + 1.0)?;
    }
    Ok(c)
}

/// Log joint density of the induced measure `mu_{N,K}`, `K >= N`.
/// Coincident eigenvalues give `-inf`.
pub fn joint_logdensity_induced(lambdas: &[f64], n: usize, k: usize) -> Result<f64> {
    if k < n {
        return Err(Error::Domain(format!(
            "K = {k} < N = {n}: the density lives on a lower-rank face"
        )));
    }
    check_simplex(lambdas, n)?;
    let mut ld = log_constant_induced(n, k)?;
    ld += (k - n) as f64 * lambdas.iter().map(|l| l.ln()).sum::<f64>();
    for i in 0..n {
        for j in (i + 1)..n {
            ld += 2.0 * (lambdas[i] - lambdas[j]).abs().ln();
        }
    }
    Ok(ld)
}

/// Log joint density of the Bures measure.
pub fn joint_logdensity_bures(lambdas: &[f64], n: usize) -> Result<f64> {
    check_simplex(lambdas, n)?;
    let mut ld = log_constant_bures(n)?;
    ld -= 0.5 * lambdas.iter().map(|l| l.ln()).sum::<f64>();
    for i in 0..n {
        for j in (i + 1)..n {
            ld += 2.0 * (lambdas[i] - lambdas[j]).abs().ln() - (lambdas[i] + lambdas[j]).ln();
        }
    }
    Ok(ld)
}
