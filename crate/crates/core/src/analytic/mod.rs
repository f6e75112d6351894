//! Asymptotic spectral laws, their moments and entropies, joint eigenvalue
//! densities, and the special functions behind them.

mod joint;
mod laws;
mod moments;
pub mod quad;
mod special;

pub use joint::{
    joint_logdensity_bures, joint_logdensity_induced, log_constant_bures, log_constant_induced,
};
pub use laws::{
    arcsine_density, brown_radial_density, bures_density, fc_density, fc_density_parametric,
    fc_edge, fc_lambda, mp_density, mu_k_density, nu_k_density, pi2_density, CdfTable, SpectralLaw,
    BURES_EDGE,
};
pub use moments::{f_k_coefficients, fc_moment, mp_moment, nu_k_moment};
pub use special::{gamma, generalized_hypergeometric, log_gamma, log_gamma_signed};

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};

/// Expected von Neumann entropy `ln N + int -x ln x P(x) dx` for an ensemble
/// with a known asymptotic law.
/// `n` is real so that the offset can be checked at non-integer sizes.
pub fn predicted_entropy(spec: &EnsembleSpec, n: f64) -> Result<f64> {
    let law = spec
        .asymptotic_law()
        .ok_or_else(|| Error::InvalidSpec(format!("no asymptotic law known for {}", spec.kind)))?;
    Ok(n.ln() + law.predicted_mean_entropy())
}

/// Typical Chebyshev entropy `ln N + s ln s - (s+1) ln(s+1)` of the
/// Fuss-Catalan ensemble.
pub fn predicted_chebyshev_entropy(s: u32, n: f64) -> f64 {
    let sf = s as f64;
    let s_ln_s = if s == 0 { 0.0 } else { sf * sf.ln() };
    n.ln() + s_ln_s - (sf + 1.0) * (sf + 1.0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::{integrate, Tolerance};
    use crate::ensembles::EnsembleKind;

    #[test]
    fn entropy_predictions() {
        let hs = EnsembleSpec::new(EnsembleKind::HilbertSchmidt, 7);
        let v = predicted_entropy(&hs, std::f64::consts::E.powi(2)).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        assert!((predicted_chebyshev_entropy(1, 1.0) + 4f64.ln()).abs() < 1e-15);
        let fc2 = EnsembleSpec::ginibre_product(64, 2);
        let v = predicted_entropy(&fc2, 64.0).unwrap();
        assert!((v - 64f64.ln() + 5.0 / 6.0).abs() < 1e-12);
        let odd = EnsembleSpec::k_entangled(8, vec![0.9, 0.1]).unwrap();
        assert!(predicted_entropy(&odd, 8.0).is_err());
    }

    #[test]
    fn chebyshev_offset_is_minus_log_edge() {
        for s in 1..5 {
            let law = SpectralLaw::FussCatalan { s };
            assert!((predicted_chebyshev_entropy(s, 1.0) - law.chebyshev_offset()).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_normalization_at_two_levels() {
        // parametrize the N = 2 simplex by lambda_1 = t
        let tol = Tolerance {
            abs: 1e-13,
            rel: 1e-13,
        };
        let induced = integrate(
            |t| {
                joint_logdensity_induced(&[t, 1.0 - t], 2, 2)
                    .map(f64::exp)
                    .unwrap_or(0.0)
            },
            0.0,
            1.0,
            tol,
        );
        assert!((induced.value - 1.0).abs() < 1e-10);
        // t = (1 - cos theta)/2 removes the inverse square roots at both ends
        let bures = integrate(
            |th| {
                let t = 0.5 * (1.0 - f64::cos(th));
                let jac = 0.5 * th.sin();
                joint_logdensity_bures(&[t, 1.0 - t], 2)
                    .map(|l| l.exp() * jac)
                    .unwrap_or(0.0)
            },
            0.0,
            std::f64::consts::PI,
            tol,
        );
        assert!((bures.value - 1.0).abs() < 1e-8, "{}", bures.value);
    }
}
