use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::moments::{fc_moment, mp_moment, nu_k_moment};
use super::quad::{integrate, Tolerance};
use super::special::{generalized_hypergeometric, log_gamma_signed};
use crate::error::{Error, Result};

/// Arcsine density `1 / (pi sqrt(x (2 - x)))` on `(0, 2)`.
pub fn arcsine_density(x: f64) -> f64 {
    if x == 0.0 || x == 2.0 {
        return f64::INFINITY;
    }
    if !(0.0..2.0).contains(&x) {
        return 0.0;
    }
    1.0 / (PI * (x * (2.0 - x)).sqrt())
}

/// Limiting law of the normalized sum of `k >= 2` Haar unitaries, on `(0, 4(k-1)/k)`.
/// This is the free Meixner law with `a = 0`, `b = -1/k`.
pub fn nu_k_density(x: f64, k: u32) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let k = k as f64;
    let edge = 4.0 * (k - 1.0) / k;
    if x <= 0.0 || x >= edge {
        return 0.0;
    }
    let radicand = 4.0 * k * (k - 1.0) * x - k * k * x * x;
    radicand.max(0.0).sqrt() / (2.0 * PI * x * (k - x))
}

/// Marchenko-Pastur law with parameter `c` in its native variable, where it
/// has mean `c`. Returns the continuous density and the atom at zero.
pub fn mp_density(x: f64, c: f64) -> (f64, f64) {
    let atom = (1.0 - c).max(0.0);
    let root = c.sqrt();
    let (lo, hi) = ((1.0 - root).powi(2), (1.0 + root).powi(2));
    if x <= 0.0 || x < lo || x > hi {
        return (0.0, atom);
    }
    // 4c - (x - c - 1)^2 factored, so the density stays accurate near the edges
    let radicand = (x - lo) * (hi - x);
    (radicand.max(0.0).sqrt() / (2.0 * PI * x), atom)
}

pub const BURES_EDGE: f64 = 5.196_152_422_706_632; // 3 sqrt(3)

/// Bures law of the rescaled eigenvalue on `(0, 3 sqrt 3)`.
pub fn bures_density(x: f64) -> f64 {
    if x <= 0.0 || x >= BURES_EDGE {
        return 0.0;
    }
    let c = 1.0 / (4.0 * PI * 3f64.sqrt());
    let t = BURES_EDGE / x;
    let plus = t + (t * t - 1.0).sqrt();
    // t - sqrt(t^2 - 1) without cancellation
    let minus = 1.0 / plus;
    c * (plus.powf(2.0 / 3.0) - minus.powf(2.0 / 3.0))
}

/// Right edge `(s+1)^(s+1) / s^s` of the Fuss-Catalan law.
pub fn fc_edge(s: u32) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let s = s as f64;
    ((s + 1.0) * (s + 1.0).ln() - s * s.ln()).exp()
}

/// Coefficient of the `n`-th hypergeometric term of the Fuss-Catalan density,
/// computed in log space with the sign tracked separately.
pub fn fc_lambda(n: u32, s: u32) -> f64 {
    assert!(n >= 1 && n <= s);
    let (nf, sf) = (n as f64, s as f64);
    let mut log = -1.5 * sf.ln()
        + 0.5 * ((sf + 1.0) / (2.0 * PI)).ln()
        + nf * (sf / (sf + 1.0) * sf.ln() - (sf + 1.0).ln());
    let mut sign = 1.0;
    for j in (1..=s).filter(|&j| j != n) {
        let (l, sg) = log_gamma_signed((j as f64 - nf) / (sf + 1.0)).expect("non-integer argument");
        log += l;
        sign *= sg;
    }
    for j in 1..=s {
        let (l, sg) =
            log_gamma_signed((j as f64 + 1.0) / sf - nf / (sf + 1.0)).expect("no pole for n <= s");
        log -= l;
        sign *= sg;
    }
    sign * log.exp()
}

/// Fuss-Catalan density `pi^(s)` as a superposition of `s` hypergeometric
/// functions of type `sF(s-1)`, on `(0, b(s))`.
pub fn fc_density(x: f64, s: u32) -> f64 {
    if s == 0 {
        return 0.0;
    }
    let b = fc_edge(s);
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.0 || x >= b {
        return 0.0;
    }
    let sf = s as f64;
    let z = (x / b).min(1.0);
    let mut total = 0.0;
    for n in 1..=s {
        let nf = n as f64;
        let a: Vec<f64> = (1..=s)
            .map(|j| 1.0 - (1.0 + j as f64) / sf + nf / (sf + 1.0))
            .collect();
        let bs: Vec<f64> = (1..=s)
            .filter(|&j| j != n)
            .map(|j| 1.0 + (nf - j as f64) / (sf + 1.0))
            .collect();
        let f =
            generalized_hypergeometric(&a, &bs, z).expect("parameters keep the series convergent");
        total += fc_lambda(n, s) * x.powf(nf / (sf + 1.0) - 1.0) * f;
    }
    total.max(0.0)
}

/// Fuss-Catalan density from the angular parametrization
/// `x(phi) = sin((s+1)phi)^(s+1) / (sin(phi) sin(s phi)^s)`,
/// `density = sin(phi)^2 sin(s phi)^(s-1) / (pi sin((s+1)phi)^s)`,
/// `phi` in `(0, pi/(s+1))`, with `phi` found by bisection. Much cheaper than
/// the series near the right edge.
pub fn fc_density_parametric(x: f64, s: u32) -> f64 {
    if s == 0 || x < 0.0 || x >= fc_edge(s) {
        return 0.0;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    let sf = s as f64;
    let log_x = |phi: f64| {
        (sf + 1.0) * ((sf + 1.0) * phi).sin().ln() - phi.sin().ln() - sf * (sf * phi).sin().ln()
    };
    // x(phi) decreases from b at 0 to 0 at pi/(s+1)
    let target = x.ln();
    let (mut lo, mut hi) = (0.0, PI / (sf + 1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if log_x(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    let log_d = 2.0 * phi.sin().ln() + (sf - 1.0) * (sf * phi).sin().ln()
        - sf * ((sf + 1.0) * phi).sin().ln();
    log_d.exp() / PI
}

/// Closed form of the `s = 2` Fuss-Catalan density on `(0, 27/4)`.
pub fn pi2_density(x: f64) -> f64 {
    if x <= 0.0 || x >= 6.75 {
        return 0.0;
    }
    let cbrt2 = 2f64.cbrt();
    let inner = 27.0 + 3.0 * (81.0 - 12.0 * x).max(0.0).sqrt();
    let num = cbrt2 * inner.powf(2.0 / 3.0) - 6.0 * x.cbrt();
    let den = x.powf(2.0 / 3.0) * inner.cbrt();
    cbrt2 * 3f64.sqrt() / (12.0 * PI) * num / den
}

/// Law of the unnormalized sum `w`, related to `nu_k` by `x -> x / k`.
pub fn mu_k_density(x: f64, k: u32) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let kf = k as f64;
    if x <= 0.0 || x >= 4.0 * (kf - 1.0) {
        return 0.0;
    }
    let radicand = 4.0 * (kf - 1.0) * x - x * x;
    kf / (2.0 * PI) * radicand.max(0.0).sqrt() / (kf * kf * x - x * x)
}

/// Radial density of the Brown measure of a sum of `k` free Haar unitaries.
pub fn brown_radial_density(r: f64, k: u32) -> f64 {
    let kf = k as f64;
    if k < 1 || r < 0.0 || r >= kf.sqrt() {
        return 0.0;
    }
    let d = kf * kf - r * r;
    kf * kf * (kf - 1.0) / (PI * d * d)
}

/// Asymptotic law of the rescaled eigenvalue `x = N lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralLaw {
    DiracOne,
    Arcsine,
    NuK {
        k: u32,
    },
    /// Marchenko-Pastur with ratio `c = K/N`, expressed in `x = N lambda`
    /// (mean 1). The native variable of `mp_density` is `c x`.
    Mp {
        c: f64,
    },
    Bures,
    FussCatalan {
        s: u32,
    },
}

impl fmt::Display for SpectralLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralLaw::DiracOne => write!(f, "dirac_one"),
            SpectralLaw::Arcsine => write!(f, "arcsine"),
            SpectralLaw::NuK { k } => write!(f, "nu_k({k})"),
            SpectralLaw::Mp { c } => write!(f, "mp({c})"),
            SpectralLaw::Bures => write!(f, "bures"),
            SpectralLaw::FussCatalan { s } => write!(f, "fuss_catalan({s})"),
        }
    }
}

impl FromStr for SpectralLaw {
    type Err = Error;

    /// Accepts `dirac_one`, `arcsine`, `bures`, `nu_k(3)`, `mp(0.5)`,
    /// `fuss_catalan(2)` and the short forms `nu_k:3`, `mp:4`, `fc:2`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        let (name, arg) = match t.find(['(', ':']) {
            Some(i) => (
                &t[..i],
                Some(t[i + 1..].trim_end_matches(')').trim().to_string()),
            ),
            None => (t.as_str(), None),
        };
        let bad = || Error::Parse(format!("unknown law `{text}`"));
        let int_arg = |arg: &Option<String>| -> Result<u32> {
            arg.as_deref()
                .ok_or_else(bad)?
                .parse::<u32>()
                .map_err(|_| bad())
        };
        let law = match name {
            "dirac_one" | "dirac" => SpectralLaw::DiracOne,
            "arcsine" => SpectralLaw::Arcsine,
            "bures" => SpectralLaw::Bures,
            "nu_k" | "nu" => SpectralLaw::NuK { k: int_arg(&arg)? },
            "fuss_catalan" | "fc" => SpectralLaw::FussCatalan { s: int_arg(&arg)? },
            "mp" | "marchenko_pastur" => SpectralLaw::Mp {
                c: match arg {
                    Some(a) => a.parse::<f64>().map_err(|_| bad())?,
                    None => 1.0,
                },
            },
            "hs" | "hilbert_schmidt" => SpectralLaw::Mp { c: 1.0 },
            _ => return Err(bad()),
        };
        law.validate()?;
        Ok(law)
    }
}

/// Support and endpoint behavior needed by the quadrature substitutions.
#[derive(Debug, Clone, Copy)]
struct Layout {
    lo: f64,
    mid: f64,
    hi: f64,
    /// Left substitution `x = lo + (mid - lo) u^p`.
    p: f64,
}

impl SpectralLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectralLaw::NuK { k } if k < 1 => Err(Error::Domain("nu_k needs k >= 1".into())),
            SpectralLaw::Mp { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::Domain(format!("mp needs c > 0, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Whether the law is a point mass at 1 (`nu_1`, `pi^(0)` included).
    pub fn is_dirac(&self) -> bool {
        matches!(
            self,
            SpectralLaw::DiracOne | SpectralLaw::NuK { k: 1 } | SpectralLaw::FussCatalan { s: 0 }
        )
    }

    pub fn density(&self, x: f64) -> f64 {
        match *self {
            _ if self.is_dirac() => 0.0,
            SpectralLaw::Arcsine | SpectralLaw::NuK { k: 2 } => arcsine_density(x),
            SpectralLaw::NuK { k } => nu_k_density(x, k),
            SpectralLaw::Mp { c } => c * mp_density(c * x, c).0,
            SpectralLaw::Bures => bures_density(x),
            SpectralLaw::FussCatalan { s: 1 } => mp_density(x, 1.0).0,
            SpectralLaw::FussCatalan { s: 2 } => pi2_density(x),
            SpectralLaw::FussCatalan { s } => fc_density_parametric(x, s),
            SpectralLaw::DiracOne => 0.0,
        }
    }

    /// `[lo, hi]` of the continuous part (or `[1, 1]` for a point mass).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            _ if self.is_dirac() => (1.0, 1.0),
            SpectralLaw::Arcsine => (0.0, 2.0),
            SpectralLaw::NuK { k } => (0.0, 4.0 * (k as f64 - 1.0) / k as f64),
            SpectralLaw::Mp { c } => {
                let r = c.sqrt();
                ((1.0 - r).powi(2) / c, (1.0 + r).powi(2) / c)
            }
            SpectralLaw::Bures => (0.0, BURES_EDGE),
            SpectralLaw::FussCatalan { s } => (0.0, fc_edge(s)),
            SpectralLaw::DiracOne => (1.0, 1.0),
        }
    }

    /// Mass of the atom at zero.
    pub fn atom(&self) -> f64 {
        match *self {
            SpectralLaw::Mp { c } => (1.0 - c).max(0.0),
            _ => 0.0,
        }
    }

    /// Exponent `alpha` of the `x^-alpha` divergence at the left edge (0 if bounded).
    pub fn singularity_exponent(&self) -> f64 {
        match *self {
            _ if self.is_dirac() => 0.0,
            SpectralLaw::Arcsine | SpectralLaw::NuK { .. } => 0.5,
            SpectralLaw::Mp { c } => {
                if c == 1.0 {
                    0.5
                } else {
                    0.0
                }
            }
            SpectralLaw::Bures => 2.0 / 3.0,
            SpectralLaw::FussCatalan { s } => s as f64 / (s as f64 + 1.0),
            SpectralLaw::DiracOne => 0.0,
        }
    }

    pub fn singularity_label(&self) -> String {
        match *self {
            _ if self.is_dirac() => "delta(x-1)".into(),
            SpectralLaw::Bures => "x^(-2/3)".into(),
            SpectralLaw::FussCatalan { s } if s >= 2 => format!("x^(-{s}/{})", s + 1),
            SpectralLaw::Mp { c } if c != 1.0 => "none".into(),
            _ => "x^(-1/2)".into(),
        }
    }

    fn layout(&self) -> Layout {
        let (lo, hi) = self.support();
        let p = match *self {
            SpectralLaw::Bures => 3.0,
            SpectralLaw::FussCatalan { s } => s as f64 + 1.0,
            _ => 2.0,
        };
        Layout {
            lo,
            mid: 0.5 * (lo + hi),
            hi,
            p,
        }
    }

    /// `int g(x) density(x) dx` over `[lo, x_to]` with the endpoint substitutions.
    fn integrate_weighted(&self, g: &dyn Fn(f64) -> f64, x_to: f64, tol: Tolerance) -> f64 {
        let Layout { lo, mid, hi, p } = self.layout();
        if x_to <= lo {
            return 0.0;
        }
        let left_width = mid - lo;
        let left = |u: f64| {
            let x = lo + left_width * u.powf(p);
            let w = p * left_width * u.powf(p - 1.0);
            if w == 0.0 {
                return 0.0;
            }
            let v = g(x) * self.density(x) * w;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        let right_width = hi - mid;
        let right = |v: f64| {
            let x = hi - right_width * v * v;
            let w = 2.0 * right_width * v;
            if w == 0.0 {
                return 0.0;
            }
            let val = g(x) * self.density(x) * w;
            if val.is_finite() {
                val
            } else {
                0.0
            }
        };
        if x_to <= mid {
            let u_to = ((x_to - lo) / left_width).powf(1.0 / p);
            return integrate(left, 0.0, u_to, tol).value;
        }
        let left_part = integrate(left, 0.0, 1.0, tol).value;
        let v_to = if x_to >= hi {
            0.0
        } else {
            ((hi - x_to) / right_width).sqrt()
        };
        left_part + integrate(right, v_to, 1.0, tol).value
    }

    /// `E[g(x)]` under the law, atom included.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        if self.is_dirac() {
            return g(1.0);
        }
        let atom = self.atom();
        let atom_part = if atom > 0.0 { atom * g(0.0) } else { 0.0 };
        atom_part + self.integrate_weighted(&g, f64::INFINITY, Tolerance::default())
    }

    /// Mass of the continuous part by quadrature.
    pub fn continuous_mass(&self) -> f64 {
        if self.is_dirac() {
            return 0.0;
        }
        self.integrate_weighted(&|_| 1.0, f64::INFINITY, Tolerance::default())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.is_dirac() {
            return if x >= 1.0 - DIRAC_SLACK { 1.0 } else { 0.0 };
        }
        if x < 0.0 {
            return 0.0;
        }
        let (_, hi) = self.support();
        if x >= hi {
            return 1.0;
        }
        (self.atom() + self.integrate_weighted(&|_| 1.0, x, Tolerance::default())).min(1.0)
    }

    /// `m`-th moment by quadrature.
    pub fn moment(&self, m: u32) -> f64 {
        self.expectation(|x| x.powi(m as i32))
    }

    /// Closed-form moment where one is known.
    pub fn exact_moment(&self, m: u32) -> Option<f64> {
        match *self {
            _ if self.is_dirac() => Some(1.0),
            SpectralLaw::Arcsine => Some(nu_k_moment(m, 2)),
            SpectralLaw::NuK { k } => Some(nu_k_moment(m, k)),
            SpectralLaw::Mp { c } => Some(mp_moment(m, c)),
            SpectralLaw::Bures => match m {
                0 | 1 => Some(1.0),
                2 => Some(2.5),
                _ => None,
            },
            SpectralLaw::FussCatalan { s } => Some(fc_moment(s, m)),
            SpectralLaw::DiracOne => Some(1.0),
        }
    }

    /// `int -x ln x P(x) dx` by quadrature.
    pub fn mean_entropy(&self) -> f64 {
        self.expectation(|x| if x > 0.0 { -x * x.ln() } else { 0.0 })
    }

    /// Closed-form mean entropy where one is known, otherwise quadrature.
    pub fn predicted_mean_entropy(&self) -> f64 {
        match *self {
            _ if self.is_dirac() => 0.0,
            SpectralLaw::Arcsine | SpectralLaw::NuK { k: 2 } => 2f64.ln() - 1.0,
            SpectralLaw::Mp { c: 1.0 } => -0.5,
            SpectralLaw::Bures => -(2f64.ln()),
            SpectralLaw::FussCatalan { s } => -(2..=s + 1).map(|j| 1.0 / j as f64).sum::<f64>(),
            _ => self.mean_entropy(),
        }
    }

    /// Right edge of the support; `N lambda_max` concentrates here.
    pub fn support_edge(&self) -> f64 {
        self.support().1
    }

    /// `-ln b`: offset of the Chebyshev entropy from `ln N`.
    pub fn chebyshev_offset(&self) -> f64 {
        -self.support_edge().ln()
    }

    pub fn cdf_table(&self) -> CdfTable {
        CdfTable::new(*self)
    }
}

/// Point-mass CDF steps at `1 - DIRAC_SLACK` so that `N * (1/N)` rounding
/// below 1 still counts as the atom.
const DIRAC_SLACK: f64 = 1e-9;

const TABLE_KNOTS: usize = 1024;

/// CDF tabulated on a uniform grid of the substitution variables, with cubic
/// Hermite interpolation (the derivative at each knot is the transformed
/// density). The substitutions make the CDF smooth in those variables.
#[derive(Debug, Clone)]
pub struct CdfTable {
    law: SpectralLaw,
    layout: Option<Layout>,
    atom: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    left_slope: Vec<f64>,
    right_slope: Vec<f64>,
}

impl CdfTable {
    pub fn new(law: SpectralLaw) -> Self {
        if law.is_dirac() {
            return Self {
                law,
                layout: None,
                atom: 0.0,
                left: Vec::new(),
                right: Vec::new(),
                left_slope: Vec::new(),
                right_slope: Vec::new(),
            };
        }
        let layout = law.layout();
        let Layout { lo, mid, hi, p } = layout;
        let tol = Tolerance {
            abs: 1e-14,
            rel: 1e-12,
        };
        let k = TABLE_KNOTS;
        let atom = law.atom();
        let left_width = mid - lo;
        let left_f = |u: f64| {
            let x = lo + left_width * u.powf(p);
            let w = p * left_width * u.powf(p - 1.0);
            let v = law.density(x) * w;
            if w == 0.0 || !v.is_finite() {
                0.0
            } else {
                v
            }
        };
        let mut left = Vec::with_capacity(k + 1);
        let mut acc = atom;
        left.push(acc);
        for i in 0..k {
            let (u0, u1) = (i as f64 / k as f64, (i + 1) as f64 / k as f64);
            acc += integrate(left_f, u0, u1, tol).value;
            left.push(acc);
        }
        let right_width = hi - mid;
        let right_f = |v: f64| {
            let x = hi - right_width * v * v;
            let w = 2.0 * right_width * v;
            let val = law.density(x) * w;
            if w == 0.0 || !val.is_finite() {
                0.0
            } else {
                val
            }
        };
        // right[i] is F at v = i / k; v = 1 is the midpoint
        let mut right = vec![0.0; k + 1];
        right[k] = acc;
        for i in (0..k).rev() {
            let (v0, v1) = (i as f64 / k as f64, (i + 1) as f64 / k as f64);
            acc += integrate(right_f, v0, v1, tol).value;
            right[i] = acc;
        }
        let left_slope = (0..=k).map(|i| left_f(i as f64 / k as f64)).collect();
        // F decreases along v
        let right_slope = (0..=k).map(|i| -right_f(i as f64 / k as f64)).collect();
        Self {
            law,
            layout: Some(layout),
            atom,
            left,
            right,
            left_slope,
            right_slope,
        }
    }

    pub fn law(&self) -> SpectralLaw {
        self.law
    }

    /// Total mass of the table (1 up to quadrature error).
    pub fn total(&self) -> f64 {
        self.right.first().copied().unwrap_or(1.0)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let Some(Layout { lo, mid, hi, p }) = self.layout else {
            return if x >= 1.0 - DIRAC_SLACK { 1.0 } else { 0.0 };
        };
        if x < 0.0 {
            return 0.0;
        }
        if x <= lo {
            return self.atom;
        }
        if x >= hi {
            return 1.0;
        }
        let k = TABLE_KNOTS as f64;
        let (t, values, slopes) = if x <= mid {
            (
                ((x - lo) / (mid - lo)).powf(1.0 / p) * k,
                &self.left,
                &self.left_slope,
            )
        } else {
            (
                ((hi - x) / (hi - mid)).sqrt() * k,
                &self.right,
                &self.right_slope,
            )
        };
        let i = (t.floor() as usize).min(TABLE_KNOTS - 1);
        let u = t - i as f64;
        let h = 1.0 / k;
        let (u2, u3) = (u * u, u * u * u);
        let value = (2.0 * u3 - 3.0 * u2 + 1.0) * values[i]
            + (u3 - 2.0 * u2 + u) * h * slopes[i]
            + (-2.0 * u3 + 3.0 * u2) * values[i + 1]
            + (u3 - u2) * h * slopes[i + 1];
        value.clamp(0.0, 1.0)
    }

    /// Smallest `x` with `F(x) >= prob`, by bisection.
    pub fn quantile(&self, prob: f64) -> f64 {
        let Some(Layout { lo, hi, .. }) = self.layout else {
            return 1.0;
        };
        if prob <= self.atom {
            return 0.0;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.evaluate(m) < prob {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_laws() -> Vec<SpectralLaw> {
        vec![
            SpectralLaw::Arcsine,
            SpectralLaw::NuK { k: 3 },
            SpectralLaw::NuK { k: 5 },
            SpectralLaw::Mp { c: 0.5 },
            SpectralLaw::Mp { c: 1.0 },
            SpectralLaw::Mp { c: 4.0 },
            SpectralLaw::Bures,
            SpectralLaw::FussCatalan { s: 2 },
            SpectralLaw::FussCatalan { s: 3 },
        ]
    }

    #[test]
    fn point_values() {
        assert!((arcsine_density(1.0) - 1.0 / PI).abs() < 1e-15);
        assert!((mp_density(1.0, 1.0).0 - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(arcsine_density(2.0), f64::INFINITY);
        assert_eq!(arcsine_density(2.5), 0.0);
        assert_eq!(nu_k_density(3.0, 3), 0.0);
        assert_eq!(bures_density(6.0), 0.0);
        assert_eq!(mp_density(5.0, 1.0).0, 0.0);
    }

    #[test]
    fn lambda_for_single_factor_is_inverse_pi() {
        assert!((fc_lambda(1, 1) - 1.0 / PI).abs() < 1e-15);
        // s = 2 coefficients of the two-term representation
        assert!((fc_lambda(1, 2) - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-14);
        assert!((fc_lambda(2, 2) + 3f64.sqrt() / (6.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn arcsine_normalization_and_entropy() {
        let law = SpectralLaw::Arcsine;
        assert!((law.continuous_mass() - 1.0).abs() < 1e-10);
        assert!((law.mean_entropy() - (2f64.ln() - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn nu_two_is_arcsine() {
        for i in 1..200 {
            let x = i as f64 * 0.01;
            assert!((nu_k_density(x, 2) - arcsine_density(x)).abs() < 1e-12 * arcsine_density(x));
        }
    }

    #[test]
    fn nu_k_second_moment() {
        for k in [2u32, 3, 4, 5, 10] {
            let m2 = SpectralLaw::NuK { k }.moment(2);
            assert!((m2 - (2.0 - 1.0 / k as f64)).abs() < 1e-8, "k = {k}: {m2}");
        }
    }

    #[test]
    fn nu_k_tends_to_marchenko_pastur() {
        let mut worst = 0.0f64;
        for i in 0..=380 {
            let x = 0.1 + i as f64 * 0.01;
            let d = (nu_k_density(x, 10_000) - mp_density(x, 1.0).0).abs();
            worst = worst.max(d);
        }
        assert!(worst < 1e-3, "{worst}");
    }

    #[test]
    fn mp_masses_and_moments() {
        let hs = SpectralLaw::Mp { c: 1.0 };
        assert_eq!(hs.support(), (0.0, 4.0));
        assert!((hs.moment(2) - 2.0).abs() < 1e-8);
        let half = SpectralLaw::Mp { c: 0.5 };
        assert_eq!(half.atom(), 0.5);
        assert!((half.continuous_mass() - 0.5).abs() < 1e-8);
        // native variable: the continuous part alone carries mass min(c, 1)
        let native = integrate(
            |x| mp_density(x, 0.5).0,
            (1.0 - 0.5f64.sqrt()).powi(2),
            (1.0 + 0.5f64.sqrt()).powi(2),
            Tolerance::default(),
        );
        assert!((native.value - 0.5).abs() < 1e-6);
        let four = SpectralLaw::Mp { c: 4.0 };
        let (lo, hi) = four.support();
        assert!((lo * 4.0 - 1.0).abs() < 1e-15 && (hi * 4.0 - 9.0).abs() < 1e-14);
    }

    #[test]
    fn bures_constant_normalizes() {
        let law = SpectralLaw::Bures;
        assert!((law.continuous_mass() - 1.0).abs() < 1e-6);
        assert!((law.moment(2) - 2.5).abs() < 1e-6);
        assert!((law.mean_entropy() + 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn every_law_normalized_with_unit_mean() {
        for law in all_laws() {
            let mass = law.expectation(|_| 1.0);
            let mean = law.moment(1);
            assert!((mass - 1.0).abs() < 1e-8, "{law}: mass {mass}");
            assert!((mean - 1.0).abs() < 1e-8, "{law}: mean {mean}");
        }
    }

    #[test]
    fn fuss_catalan_series_matches_closed_forms() {
        for i in 0..100 {
            let x = 0.01 + i as f64 * (3.98 / 99.0);
            let series = fc_density(x, 1);
            let mp = mp_density(x, 1.0).0;
            assert!((series - mp).abs() < 1e-10, "x = {x}: {series} vs {mp}");
        }
        for i in 0..100 {
            let x = 0.01 + i as f64 * (6.73 / 99.0);
            let series = fc_density(x, 2);
            let closed = pi2_density(x);
            assert!(
                (series - closed).abs() < 1e-9,
                "x = {x}: {series} vs {closed}"
            );
        }
        assert!((fc_density(1.0, 2) - pi2_density(1.0)).abs() < 1e-9);
    }

    #[test]
    fn parametric_fuss_catalan_matches_series() {
        for s in 1..=4u32 {
            let b = fc_edge(s);
            for i in 1..40 {
                let x = b * i as f64 / 40.0;
                let series = fc_density(x, s);
                let param = fc_density_parametric(x, s);
                assert!(
                    (series - param).abs() < 1e-9 * series.max(1.0),
                    "s={s} x={x}: {series} vs {param}"
                );
            }
        }
        assert!((fc_density_parametric(2.0, 2) - pi2_density(2.0)).abs() < 1e-12);
    }

    #[test]
    fn fuss_catalan_moments_by_quadrature() {
        for s in 2..=4u32 {
            let law = SpectralLaw::FussCatalan { s };
            for m in 0..=5u32 {
                let q = law.moment(m);
                let exact = fc_moment(s, m);
                assert!(
                    (q - exact).abs() < 1e-6 * exact.max(1.0),
                    "s={s} m={m}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn fuss_catalan_entropy_and_support() {
        let law = SpectralLaw::FussCatalan { s: 2 };
        assert!((law.mean_entropy() + 5.0 / 6.0).abs() < 1e-6);
        let (lo, hi) = SpectralLaw::FussCatalan { s: 3 }.support();
        assert_eq!(lo, 0.0);
        assert!((hi - 256.0 / 27.0).abs() < 1e-14);
        assert!((SpectralLaw::Mp { c: 1.0 }.mean_entropy() + 0.5).abs() < 1e-8);
    }

    #[test]
    fn singularity_exponents() {
        let cases: Vec<(SpectralLaw, f64)> = vec![
            (SpectralLaw::Arcsine, 0.5),
            (SpectralLaw::NuK { k: 3 }, 0.5),
            (SpectralLaw::Mp { c: 1.0 }, 0.5),
            (SpectralLaw::Bures, 2.0 / 3.0),
            (SpectralLaw::FussCatalan { s: 2 }, 2.0 / 3.0),
            (SpectralLaw::FussCatalan { s: 3 }, 0.75),
            (SpectralLaw::FussCatalan { s: 4 }, 0.8),
        ];
        for (law, alpha) in cases {
            assert_eq!(law.singularity_exponent(), alpha);
            let (x1, x2) = (1e-6, 1e-8);
            let measured = -(law.density(x1) / law.density(x2)).ln() / (x1 / x2).ln();
            assert!((measured - alpha).abs() < 0.01 * alpha, "{law}: {measured}");
        }
    }

    #[test]
    fn mu_k_and_nu_k_rescaling() {
        for k in [2u32, 3, 7] {
            for i in 1..50 {
                let x = i as f64 * 0.03;
                let lhs = mu_k_density(k as f64 * x, k) * k as f64;
                let rhs = nu_k_density(x, k);
                assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn brown_density_normalized_and_flat_for_large_k() {
        for k in [2u32, 5, 20] {
            let r = integrate(
                |r| 2.0 * PI * r * brown_radial_density(r, k),
                0.0,
                (k as f64).sqrt(),
                Tolerance::default(),
            );
            assert!((r.value - 1.0).abs() < 1e-8, "k = {k}: {}", r.value);
        }
        let k = 1000u32;
        for i in 0..10 {
            let rho = i as f64 * 0.1;
            let rescaled = brown_radial_density(rho * (k as f64).sqrt(), k) * k as f64;
            assert!((rescaled - 1.0 / PI).abs() < 1e-2, "rho = {rho}");
        }
    }

    #[test]
    fn table_matches_direct_cdf() {
        for law in all_laws() {
            let table = law.cdf_table();
            assert!((table.total() - 1.0).abs() < 1e-8, "{law}");
            let (lo, hi) = law.support();
            for i in 1..20 {
                let x = lo + (hi - lo) * i as f64 / 20.0;
                let d = (table.evaluate(x) - law.cdf(x)).abs();
                assert!(d < 1e-9, "{law} at {x}: {d}");
            }
            let prob = law.atom() + 0.3 * (1.0 - law.atom());
            let q = table.quantile(prob);
            assert!(
                (table.evaluate(q) - prob).abs() < 1e-9,
                "{law}: F({q}) = {}",
                table.evaluate(q)
            );
        }
    }

    #[test]
    fn law_ids_round_trip() {
        for law in all_laws().into_iter().chain([SpectralLaw::DiracOne]) {
            let parsed: SpectralLaw = law.to_string().parse().unwrap();
            assert_eq!(parsed, law);
        }
        assert_eq!(
            "fc:2".parse::<SpectralLaw>().unwrap(),
            SpectralLaw::FussCatalan { s: 2 }
        );
        assert!("mp(-1)".parse::<SpectralLaw>().is_err());
        assert!("wigner".parse::<SpectralLaw>().is_err());
    }

    #[test]
    fn dirac_law() {
        let d = SpectralLaw::DiracOne;
        assert_eq!(d.cdf(0.999), 0.0);
        assert_eq!(d.cdf(1.0 - 1e-15), 1.0);
        assert_eq!(d.moment(3), 1.0);
        assert_eq!(d.mean_entropy(), 0.0);
    }
}
