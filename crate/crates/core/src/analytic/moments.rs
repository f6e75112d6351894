use super::special::log_gamma;

/// Exact binomial coefficient when it fits in `u128`.
fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        // c * (n - k + i) is divisible by i at every step
        c = c.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(c)
}

/// Fuss-Catalan number `binom(sm + m, m) / (sm + 1)`, the `m`-th moment of `pi^(s)`.
pub fn fc_moment(s: u32, m: u32) -> f64 {
    let (s, m) = (s as u64, m as u64);
    let top = s * m + m;
    match binomial_exact(top, m) {
        Some(c) => (c / (s * m + 1) as u128) as f64,
        None => {
            let ln = log_gamma(top as f64 + 1.0).unwrap()
                - log_gamma(m as f64 + 1.0).unwrap()
                - log_gamma((s * m) as f64 + 1.0).unwrap();
            ln.exp() / (s * m + 1) as f64
        }
    }
}

/// Power-series coefficients of `F_k(z) = 2(k-1) / (k - 2 + k sqrt(1 - 4(k-1) z))`
/// up to `z^order`.
pub fn f_k_coefficients(k: u32, order: usize) -> Vec<f64> {
    if k <= 1 {
        return vec![1.0; order + 1];
    }
    let kf = k as f64;
    let step = -4.0 * (kf - 1.0);
    // sqrt(1 + step z) = sum binom(1/2, n) (step z)^n
    let mut root = vec![0.0; order + 1];
    let mut binom = 1.0;
    let mut power = 1.0;
    for (n, r) in root.iter_mut().enumerate() {
        if n > 0 {
            binom *= (0.5 - (n as f64 - 1.0)) / n as f64;
            power *= step;
        }
        *r = binom * power;
    }
    let denom: Vec<f64> = root
        .iter()
        .enumerate()
        .map(|(n, r)| k as f64 * r + if n == 0 { kf - 2.0 } else { 0.0 })
        .collect();
    let mut f = vec![0.0; order + 1];
    f[0] = 2.0 * (kf - 1.0) / denom[0];
    for n in 1..=order {
        let acc: f64 = (1..=n).map(|j| denom[j] * f[n - j]).sum();
        f[n] = -acc / denom[0];
    }
    f
}

/// `p`-th moment of `nu_k`: the series coefficient of `F_k` divided by `k^p`.
pub fn nu_k_moment(p: u32, k: u32) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    let coeffs = f_k_coefficients(k, p as usize);
    coeffs[p as usize] / (k as f64).powi(p as i32)
}

/// `m`-th moment of the Marchenko-Pastur law in `x = N lambda`: Narayana
/// polynomial in `c` divided by `c^m`.
pub fn mp_moment(m: u32, c: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mm = m as u64;
    let native: f64 = (1..=mm)
        .map(|j| {
            let narayana = binomial_exact(mm, j).unwrap() as f64
                * binomial_exact(mm, j - 1).unwrap() as f64
                / mm as f64;
            narayana * c.powi(j as i32)
        })
        .sum();
    native / c.powi(m as i32)
}
