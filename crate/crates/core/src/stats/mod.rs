//! Entropies, empirical spectral statistics, and comparison of sampled
//! spectra against asymptotic laws.
//!
//! All reductions sort their inputs before a compensated sum, so results do
//! not depend on the order in which samples arrived or batches were merged.

mod batch;
mod entropy;
mod ks;

pub use batch::{
    compare, empirical_moment, histogram, ComparisonReport, Histogram, MomentComparison,
    SpectrumBatch, ZERO_EIGENVALUE,
};
pub use entropy::{
    chebyshev_entropy, geometric_measure, purity, renyi_entropy, von_neumann_entropy,
};
pub use ks::{
    ks_critical_value, ks_distance, ks_distance_sorted, one_sample_threshold, two_sample_ks,
    two_sample_threshold,
};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of `values` after sorting them, so the result is
/// independent of input order.
pub fn stable_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut acc = CompensatedSum::new();
    for x in sorted {
        acc.add(x);
    }
    acc.value()
}

/// Order-independent mean; `NaN` for an empty slice.
pub fn stable_mean(values: &[f64]) -> f64 {
    stable_sum(values) / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let values = [1.0, 1e100, 1.0, -1e100];
        let mut naive = 0.0;
        for v in values {
            naive += v;
        }
        assert_eq!(naive, 0.0);
        let mut acc = CompensatedSum::new();
        for v in values {
            acc.add(v);
        }
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn stable_sum_ignores_order() {
        let a: Vec<f64> = (1..200).map(|i| 1.0 / i as f64).collect();
        let mut b = a.clone();
        b.reverse();
        assert_eq!(stable_sum(&a).to_bits(), stable_sum(&b).to_bits());
        assert!(stable_mean(&[]).is_nan());
    }
}
