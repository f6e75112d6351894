use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// `-sum lambda ln lambda`, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(spectrum: &Spectrum) -> f64 {
    -spectrum
        .lambdas()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// `ln(sum lambda^q) / (1 - q)`; `q = 1` is the von Neumann entropy.
pub fn renyi_entropy(spectrum: &Spectrum, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!(
            "Renyi order q = {q} must be positive"
        )));
    }
    if q == 1.0 {
        return Ok(von_neumann_entropy(spectrum));
    }
    if q.is_infinite() {
        return Ok(chebyshev_entropy(spectrum));
    }
    let top = spectrum.largest();
    if top <= 0.0 {
        return Err(Error::Domain("spectrum has no positive eigenvalue".into()));
    }
    // factor out lambda_max^q so large q does not underflow
    let rest: f64 = spectrum
        .lambdas()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| (q * (l / top).ln()).exp())
        .sum();
    Ok((q * top.ln() + rest.ln()) / (1.0 - q))
}

/// `S_inf = -ln lambda_max`.
pub fn chebyshev_entropy(spectrum: &Spectrum) -> f64 {
    -spectrum.largest().ln()
}

/// Geometric measure of entanglement of the purification, `-ln lambda_max`.
pub fn geometric_measure(spectrum: &Spectrum) -> f64 {
    chebyshev_entropy(spectrum)
}

/// `Tr rho^2`.
pub fn purity(spectrum: &Spectrum) -> f64 {
    spectrum.lambdas().iter().map(|l| l * l).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed(n: usize) -> Spectrum {
        Spectrum::of_state(vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn maximally_mixed() {
        let s = mixed(5);
        let ln5 = 5f64.ln();
        assert!((von_neumann_entropy(&s) - ln5).abs() < 1e-14);
        for q in [0.5, 2.0, 3.0, 50.0] {
            assert!((renyi_entropy(&s, q).unwrap() - ln5).abs() < 1e-13);
        }
        assert!((purity(&s) - 0.2).abs() < 1e-15);
        assert!((chebyshev_entropy(&s) - ln5).abs() < 1e-14);
    }

    #[test]
    fn pure_state_and_hand_values() {
        let pure = Spectrum::of_state(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let s = Spectrum::of_state(vec![0.7, 0.3]).unwrap();
        let expected = -0.7 * 0.7f64.ln() - 0.3 * 0.3f64.ln();
        assert!((von_neumann_entropy(&s) - expected).abs() < 1e-15);
        assert!((expected - 0.6109).abs() < 1e-4);
    }

    #[test]
    fn renyi_limits() {
        let s = Spectrum::of_state(vec![0.5, 0.3, 0.2]).unwrap();
        let big = renyi_entropy(&s, 1e6).unwrap();
        assert!((big - chebyshev_entropy(&s)).abs() < 1e-5);
        assert_eq!(renyi_entropy(&s, 1.0).unwrap(), von_neumann_entropy(&s));
        let near_one = renyi_entropy(&s, 1.0 + 1e-7).unwrap();
        assert!((near_one - von_neumann_entropy(&s)).abs() < 1e-6);
        assert!(renyi_entropy(&s, 0.0).is_err());
        assert_eq!(geometric_measure(&s), -(0.5f64.ln()));
    }
}
