//! Kolmogorov-Smirnov distances.

/// Asymptotic critical value `c(alpha) = sqrt(-ln(alpha/2) / 2)`; 1.628 at 1%.
pub fn ks_critical_value(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// One-sample threshold `c(alpha) / sqrt(n)`.
pub fn one_sample_threshold(n: usize, alpha: f64) -> f64 {
    ks_critical_value(alpha) / (n as f64).sqrt()
}

/// Two-sample threshold `c(alpha) sqrt((n + m) / (n m))`.
pub fn two_sample_threshold(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_critical_value(alpha) * ((n + m) / (n * m)).sqrt()
}

/// `sup |F_n - F|` for samples sorted ascending, with `cdf` evaluated once per point.
pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        d = d.max(f - below).max(above - f);
    }
    d.clamp(0.0, 1.0)
}

pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_distance_sorted(&sorted, cdf)
}

/// Two-sample statistic `sup |F_a - F_b|`, tie-aware.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
