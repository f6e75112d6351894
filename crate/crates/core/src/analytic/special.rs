use super::quad::{integrate, Tolerance};
use crate::error::{Error, Result};

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `ln |Gamma(x)|`.
pub fn log_gamma(x: f64) -> Result<f64> {
    log_gamma_signed(x).map(|(l, _)| l)
}

/// `(ln |Gamma(x)|, sign Gamma(x))`. Negative arguments go through the
/// reflection formula inside `lgamma_r`, so the sign is exact.
pub fn log_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(Error::GammaPole(x));
    }
    let (l, sign) = libm::lgamma_r(x);
    Ok((l, if sign < 0 { -1.0 } else { 1.0 }))
}

pub fn gamma(x: f64) -> Result<f64> {
    let (l, s) = log_gamma_signed(x)?;
    Ok(s * l.exp())
}

const TERM_LIMIT: usize = 2000;
const ALTERNATING_LIMIT: usize = 1_000_000;
const REL_TOL: f64 = 1e-14;

/// Generalized hypergeometric series `pFq(a; b; z)` for real parameters.
///
/// Terminating series are summed exactly. Otherwise the series must converge:
/// `p <= q` for any `z`, or `p = q + 1` with `|z| < 1`, or `|z| = 1` and
/// `sum(b) - sum(a) > 0`. For `p = q + 1` and `0 < z <= 1` the slowly decaying
/// tail beyond a few thousand terms is added by Euler-Maclaurin summation of
/// the analytically continued term.
pub fn generalized_hypergeometric(a: &[f64], b: &[f64], z: f64) -> Result<f64> {
    if let Some(&bad) = b.iter().find(|&&x| is_nonpositive_integer(x)) {
        return Err(Error::GammaPole(bad));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let terminating = a.iter().any(|&x| is_nonpositive_integer(x));
    let (p, q) = (a.len(), b.len());
    if !terminating {
        if p > q + 1 {
            return Err(Error::SeriesDivergence(format!(
                "{p}F{q} has zero radius of convergence"
            )));
        }
        if p == q + 1 {
            let excess: f64 = b.iter().sum::<f64>() - a.iter().sum::<f64>();
            if z.abs() > 1.0 {
                return Err(Error::SeriesDivergence(format!("|z| = {} > 1", z.abs())));
            }
            if z == 1.0 && excess <= 0.0 {
                return Err(Error::SeriesDivergence(format!(
                    "sum(b) - sum(a) = {excess} at z = 1"
                )));
            }
            if z == -1.0 && excess <= -1.0 {
                return Err(Error::SeriesDivergence(format!(
                    "sum(b) - sum(a) = {excess} at z = -1"
                )));
            }
        }
    }

    let limit = if terminating {
        usize::MAX
    } else if p == q + 1 && z < 0.0 {
        ALTERNATING_LIMIT
    } else {
        TERM_LIMIT
    };

    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut quiet = 0;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let mut ratio = z / (nf + 1.0);
        for &ai in a {
            ratio *= ai + nf;
        }
        for &bj in b {
            ratio /= bj + nf;
        }
        term *= ratio;
        n += 1;
        if term == 0.0 {
            break;
        }
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;

        let total = (sum + comp).abs();
        let bound = if p == q + 1 {
            // the term ratio approaches |z| from below once n exceeds the parameters
            let r = ratio.abs().max(z.abs());
            if r < 1.0 {
                term.abs() * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        } else {
            term.abs()
        };
        let past_parameters = a.iter().chain(b).all(|&x| x + nf > 0.0);
        if past_parameters && bound <= REL_TOL * total {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        if z < 0.0 && p == q + 1 && past_parameters && term.abs() <= REL_TOL * total {
            // alternating: the error is bounded by the first omitted term
            break;
        }
        if n >= limit {
            if p == q + 1 && z > 0.0 {
                return Ok(sum + comp + tail_sum(a, b, z, n, term, sum + comp)?);
            }
            return Err(Error::SeriesDivergence(format!(
                "no convergence after {n} terms at z = {z}"
            )));
        }
    }
    Ok(sum + comp)
}

/// `sum_{k >= m} t_k` where `t_m = term_m` (already included in the partial
/// sum, hence subtracted at the end) and `t_k` continues as a smooth function
/// of `k` built from log-Gamma differences.
fn tail_sum(a: &[f64], b: &[f64], z: f64, m: usize, term_m: f64, partial: f64) -> Result<f64> {
    let mf = m as f64;
    // p = q + 1: pair each a_i with a lower parameter, the last with the 1 of k!
    let lower: Vec<f64> = b.iter().copied().chain([1.0]).collect();
    let log_shape = |x: f64| -> f64 {
        a.iter()
            .zip(&lower)
            .map(|(&ai, &bj)| ln_gamma_ratio(x, ai, bj))
            .sum()
    };
    let base = log_shape(mf);
    let lnz = z.ln();
    let log_t = |x: f64| -> f64 {
        let drift = if lnz == 0.0 { 0.0 } else { (x - mf) * lnz };
        log_shape(x) - base + drift
    };
    let scale = term_m.abs();
    let t = |x: f64| scale * log_t(x).exp();

    // x = m / w^2 maps (0, 1] onto [m, inf); the integrand stays bounded as w -> 0
    let integrand = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let x = mf / (w * w);
        let v = t(x) * 2.0 * mf / (w * w * w);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let tail_integral = integrate(
        integrand,
        0.0,
        1.0,
        // the integrand is only accurate to a few ulps; ask for no more
        Tolerance {
            abs: 1e-14 * partial.abs(),
            rel: 1e-11,
        },
    )
    .value;
    let tm = t(mf);
    let dtm = 0.5 * (t(mf + 1.0) - t(mf - 1.0));
    let tail = tail_integral + 0.5 * tm - dtm / 12.0;
    // t_m itself is already in the partial sum
    Ok(term_m.signum() * (tail - tm))
}

/// `ln Gamma(x + alpha) - ln Gamma(x + beta)` without the cancellation of
/// two large log-Gamma values: Stirling's difference series for large `x`.
fn ln_gamma_ratio(x: f64, alpha: f64, beta: f64) -> f64 {
    if x < 1e4 {
        return libm::lgamma(x + alpha) - libm::lgamma(x + beta);
    }
    let b2 = |t: f64| t * t - t + 1.0 / 6.0;
    let b3 = |t: f64| t * t * t - 1.5 * t * t + 0.5 * t;
    let b4 = |t: f64| t.powi(4) - 2.0 * t.powi(3) + t * t - 1.0 / 30.0;
    let inv = 1.0 / x;
    (alpha - beta) * x.ln() + (b2(alpha) - b2(beta)) * inv / 2.0
        - (b3(alpha) - b3(beta)) * inv * inv / 6.0
        + (b4(alpha) - b4(beta)) * inv.powi(3) / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5).unwrap() - sqrt_pi).abs() < 1e-13);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(-0.5).unwrap() + 2.0 * sqrt_pi).abs() < 1e-13);
        let (_, s) = log_gamma_signed(-1.5).unwrap();
        assert_eq!(s, 1.0);
        let (_, s) = log_gamma_signed(-2.5).unwrap();
        assert_eq!(s, -1.0);
        assert!(matches!(log_gamma(-3.0), Err(Error::GammaPole(_))));
        assert!(matches!(log_gamma(0.0), Err(Error::GammaPole(_))));
    }

    #[test]
    fn reflection_product() {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        for &x in &[-1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0, 0.25, -1.75] {
            let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            let rhs = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
            assert!((lhs / rhs - 1.0).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn one_f_zero_is_a_power() {
        for i in 0..=99 {
            let z = i as f64 * 0.01;
            let v = generalized_hypergeometric(&[-0.5], &[], z).unwrap();
            assert!((v - (1.0 - z).sqrt()).abs() < 1e-12, "z = {z}");
        }
        let v = generalized_hypergeometric(&[1.5], &[], -0.7).unwrap();
        assert!((v - 1.7f64.powf(-1.5)).abs() < 1e-12);
    }

    #[test]
    fn gauss_summation_at_unit_argument() {
        // 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))
        let (a, b, c) = (-1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0);
        let exact = gamma(c).unwrap() * gamma(c - a - b).unwrap()
            / (gamma(c - a).unwrap() * gamma(c - b).unwrap());
        let v = generalized_hypergeometric(&[a, b], &[c], 1.0).unwrap();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
        let (a, b, c) = (1.0 / 6.0, 2.0 / 3.0, 4.0 / 3.0);
        let exact = gamma(c).unwrap() * gamma(c - a - b).unwrap()
            / (gamma(c - a).unwrap() * gamma(c - b).unwrap());
        let v = generalized_hypergeometric(&[a, b], &[c], 1.0).unwrap();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn near_unit_argument_matches_closed_form() {
        // 2F1(1/2, 1/2; 3/2; z^2) = asin(z) / z
        for &z in &[0.9, 0.99, 0.999, 0.99999] {
            let v = generalized_hypergeometric(&[0.5, 0.5], &[1.5], z * z).unwrap();
            let exact = z.asin() / z;
            assert!((v - exact).abs() < 1e-11, "z = {z}: {v} vs {exact}");
        }
        // 2F1(1, 1; 2; z) = -ln(1 - z) / z converges only for z < 1
        let v = generalized_hypergeometric(&[1.0, 1.0], &[2.0], 0.999).unwrap();
        assert!((v + (0.001f64).ln() / 0.999).abs() < 1e-10);
    }

    #[test]
    fn confluent_and_terminating_cases() {
        // 0F0(;;z) = e^z, 1F1(1;2;z) = (e^z - 1)/z
        let v = generalized_hypergeometric(&[], &[], 3.0).unwrap();
        assert!((v - 3f64.exp()).abs() < 1e-12);
        let v = generalized_hypergeometric(&[1.0], &[2.0], -5.0).unwrap();
        assert!((v - (1.0 - (-5f64).exp()) / 5.0).abs() < 1e-14);
        // 2F1(-2, b; c; z) is a quadratic polynomial
        let v = generalized_hypergeometric(&[-2.0, 1.5], &[0.5], 3.0).unwrap();
        let exact = 1.0 - 2.0 * 1.5 / 0.5 * 3.0 + (1.5 * 2.5) / (0.5 * 1.5) * 9.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn divergent_inputs_are_rejected() {
        assert!(matches!(
            generalized_hypergeometric(&[1.0, 1.0], &[2.0], 1.0),
            Err(Error::SeriesDivergence(_))
        ));
        assert!(matches!(
            generalized_hypergeometric(&[0.5], &[], 1.5),
            Err(Error::SeriesDivergence(_))
        ));
        assert!(matches!(
            generalized_hypergeometric(&[1.0, 1.0, 1.0], &[2.0], 0.1),
            Err(Error::SeriesDivergence(_))
        ));
        assert!(matches!(
            generalized_hypergeometric(&[1.0], &[-2.0], 0.1),
            Err(Error::GammaPole(_))
        ));
    }
}
