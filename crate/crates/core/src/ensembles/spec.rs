use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::SpectralLaw;
use crate::error::{Error, Result};
use crate::sampling::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Induced,
    HilbertSchmidt,
    Bures,
    Arcsine,
    KEntangled,
    GinibreProduct,
    Generalized,
    RealOrthogonalSum,
    RealGinibreProduct,
    UnitInterpolation,
    BuresHsInterpolation,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 11] = [
        EnsembleKind::Induced,
        EnsembleKind::HilbertSchmidt,
        EnsembleKind::Bures,
        EnsembleKind::Arcsine,
        EnsembleKind::KEntangled,
        EnsembleKind::GinibreProduct,
        EnsembleKind::Generalized,
        EnsembleKind::RealOrthogonalSum,
        EnsembleKind::RealGinibreProduct,
        EnsembleKind::UnitInterpolation,
        EnsembleKind::BuresHsInterpolation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Induced => "induced",
            EnsembleKind::HilbertSchmidt => "hilbert_schmidt",
            EnsembleKind::Bures => "bures",
            EnsembleKind::Arcsine => "arcsine",
            EnsembleKind::KEntangled => "k_entangled",
            EnsembleKind::GinibreProduct => "ginibre_product",
            EnsembleKind::Generalized => "generalized",
            EnsembleKind::RealOrthogonalSum => "real_orthogonal_sum",
            EnsembleKind::RealGinibreProduct => "real_ginibre_product",
            EnsembleKind::UnitInterpolation => "unit_interpolation",
            EnsembleKind::BuresHsInterpolation => "bures_hs_interpolation",
        }
    }

    fn uses(self, key: &str) -> bool {
        use EnsembleKind::*;
        match key {
            "kind" | "n" => true,
            "k" | "weights" => matches!(self, KEntangled | Generalized | RealOrthogonalSum),
            "s" => matches!(self, GinibreProduct | Generalized | RealGinibreProduct),
            "dims" => matches!(
                self,
                Induced | GinibreProduct | Generalized | RealGinibreProduct
            ),
            "a" => matches!(self, UnitInterpolation | BuresHsInterpolation),
            "field" => matches!(self, Generalized),
            _ => false,
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match t.as_str() {
            "hs" => "hilbert_schmidt",
            "bures_hs" => "bures_hs_interpolation",
            other => other,
        };
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == alias)
            .ok_or_else(|| Error::Parse(format!("unknown ensemble kind `{s}`")))
    }
}

/// Declarative description of a random-state ensemble.
///
/// Every ensemble reduces to `rho = W W^dagger / Tr(W W^dagger)`. The fields
/// that matter depend on `kind`; the others keep their defaults.
///
/// * `k`, `weights`: number of Haar unitaries and their superposition weights.
/// * `s`, `dims`: number of Ginibre factors and the ratios `c_i = M_i / N` of
///   the rectangular chain, factor `i` being `M_{i-1} x M_i` with `M_0 = N`.
/// * For `induced`, `dims = [c]` holds the environment ratio `c = K / N`.
/// * `a`: interpolation parameter.
/// * `field`: real or complex matrices (only `generalized` chooses).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub weights: Vec<f64>,
    pub dims: Vec<f64>,
    pub a: f64,
    pub field: Field,
}

impl EnsembleSpec {
    /// Spec with the kind's default structure; call `validate` after edits.
    pub fn new(kind: EnsembleKind, n: usize) -> Self {
        use EnsembleKind::*;
        let (k, s) = match kind {
            Induced | HilbertSchmidt => (1, 1),
            Bures => (2, 1),
            Arcsine => (2, 0),
            KEntangled | RealOrthogonalSum => (2, 0),
            GinibreProduct | RealGinibreProduct => (1, 1),
            Generalized => (1, 0),
            UnitInterpolation => (2, 0),
            BuresHsInterpolation => (2, 1),
        };
        let field = match kind {
            RealOrthogonalSum | RealGinibreProduct => Field::Real,
            _ => Field::Complex,
        };
        let a = match kind {
            UnitInterpolation | BuresHsInterpolation => 0.5,
            _ => 0.0,
        };
        let mut spec = Self {
            kind,
            n,
            k,
            s,
            weights: Vec::new(),
            dims: Vec::new(),
            a,
            field,
        };
        spec.fill_defaults();
        spec
    }

    pub fn induced(n: usize, environment: usize) -> Self {
        let mut spec = Self::new(EnsembleKind::Induced, n);
        spec.dims = vec![environment as f64 / n as f64];
        spec
    }

    pub fn k_entangled(n: usize, weights: Vec<f64>) -> Result<Self> {
        let mut spec = Self::new(EnsembleKind::KEntangled, n);
        spec.k = weights.len();
        spec.weights = weights;
        spec.validate()?;
        Ok(spec)
    }

    pub fn uniform_k_entangled(n: usize, k: usize) -> Self {
        let mut spec = Self::new(EnsembleKind::KEntangled, n);
        spec.k = k;
        spec.weights.clear();
        spec.fill_defaults();
        spec
    }

    pub fn ginibre_product(n: usize, s: usize) -> Self {
        let mut spec = Self::new(EnsembleKind::GinibreProduct, n);
        spec.s = s;
        spec.dims.clear();
        spec.fill_defaults();
        spec
    }

    pub fn generalized(n: usize, k: usize, s: usize) -> Self {
        let mut spec = Self::new(EnsembleKind::Generalized, n);
        spec.k = k;
        spec.s = s;
        spec.weights.clear();
        spec.dims.clear();
        spec.fill_defaults();
        spec
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    /// Uniform weights and unit ratios where none were given.
    fn fill_defaults(&mut self) {
        if self.weights.is_empty() && self.k >= 1 {
            self.weights = vec![1.0 / self.k as f64; self.k];
        }
        if self.dims.is_empty() {
            let len = if self.kind == EnsembleKind::Induced {
                1
            } else {
                self.s
            };
            self.dims = vec![1.0; len];
        }
    }

    pub fn validate(&self) -> Result<()> {
        use EnsembleKind::*;
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.kind == Arcsine && self.n < 2 {
            return bad("the arcsine ensemble needs n >= 2".into());
        }
        if self.kind.uses("k") {
            if self.k == 0 {
                return bad("k must be at least 1".into());
            }
            if self.weights.len() != self.k {
                return bad(format!(
                    "{} weights given for k = {}",
                    self.weights.len(),
                    self.k
                ));
            }
            if self.weights.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return bad("weights must be nonnegative".into());
            }
            let total: f64 = self.weights.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return bad(format!("weights sum to {total}, not 1"));
            }
        }
        if matches!(self.kind, GinibreProduct | RealGinibreProduct) && self.s == 0 {
            return bad("s must be at least 1 for a Ginibre product".into());
        }
        if self.kind.uses("dims") {
            let want = if self.kind == Induced { 1 } else { self.s };
            if self.dims.len() != want {
                return bad(format!(
                    "dims chain has {} ratios, expected {want}",
                    self.dims.len()
                ));
            }
            if self.dims.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
                return bad("dims ratios must be positive".into());
            }
        }
        match self.kind {
            UnitInterpolation if !(0.0..=1.0).contains(&self.a) => {
                bad(format!("a = {} outside [0, 1]", self.a))
            }
            BuresHsInterpolation if !(0.0..=0.5).contains(&self.a) => {
                bad(format!("a = {} outside [0, 1/2]", self.a))
            }
            RealOrthogonalSum | RealGinibreProduct if self.field != Field::Real => {
                bad(format!("{} is a real ensemble", self.kind))
            }
            Generalized => Ok(()),
            _ if !matches!(self.kind, RealOrthogonalSum | RealGinibreProduct)
                && self.field != Field::Complex =>
            {
                bad(format!(
                    "field=real applies only to generalized, not {}",
                    self.kind
                ))
            }
            _ => Ok(()),
        }
    }

    /// Integer sizes `M_1..M_s` of the rectangular chain: `round(N c_i)`, at least 1.
    pub fn chain_sizes(&self) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&c| ((self.n as f64 * c).round() as usize).max(1))
            .collect()
    }

    /// Environment dimension `K` of the induced ensemble.
    pub fn environment_dim(&self) -> usize {
        match self.kind {
            EnsembleKind::Induced => self.chain_sizes()[0],
            EnsembleKind::HilbertSchmidt => self.n,
            _ => 0,
        }
    }

    /// `(k, s)` coordinates in the generalized family, when the kind belongs to it.
    pub fn family_coordinates(&self) -> Option<(usize, usize)> {
        use EnsembleKind::*;
        let uniform = self
            .weights
            .iter()
            .all(|&p| (p - 1.0 / self.k as f64).abs() < 1e-12);
        let square = self.dims.iter().all(|&c| c == 1.0);
        match self.kind {
            HilbertSchmidt => Some((1, 1)),
            Induced if square => Some((1, 1)),
            Bures => Some((2, 1)),
            Arcsine => Some((2, 0)),
            KEntangled | RealOrthogonalSum if uniform => Some((self.k, 0)),
            GinibreProduct | RealGinibreProduct if square => Some((1, self.s)),
            Generalized if uniform && square => Some((self.k, self.s)),
            _ => None,
        }
    }

    /// Limiting law of `x = N lambda`, when the ensemble has a known one.
    pub fn asymptotic_law(&self) -> Option<SpectralLaw> {
        use EnsembleKind::*;
        match self.kind {
            Induced => Some(SpectralLaw::Mp { c: self.dims[0] }),
            GinibreProduct | RealGinibreProduct if self.s == 1 => {
                Some(SpectralLaw::Mp { c: self.dims[0] })
            }
            UnitInterpolation => {
                if self.a == 0.0 || self.a == 1.0 {
                    Some(SpectralLaw::DiracOne)
                } else if self.a == 0.5 {
                    Some(SpectralLaw::Arcsine)
                } else {
                    None
                }
            }
            BuresHsInterpolation => {
                if self.a == 0.5 {
                    Some(SpectralLaw::Bures)
                } else if self.a == 0.0 {
                    Some(SpectralLaw::Mp { c: 1.0 })
                } else {
                    None
                }
            }
            _ => match self.family_coordinates()? {
                (1, 0) => Some(SpectralLaw::DiracOne),
                (2, 0) => Some(SpectralLaw::Arcsine),
                (k, 0) => Some(SpectralLaw::NuK { k: k as u32 }),
                (1, 1) => Some(SpectralLaw::Mp { c: 1.0 }),
                (2, 1) => Some(SpectralLaw::Bures),
                (1, s) => Some(SpectralLaw::FussCatalan { s: s as u32 }),
                _ => None,
            },
        }
    }

    /// Flat `key=value` form, one pair per line, with only the keys that
    /// apply to the kind. Floats use the shortest round-trip representation.
    pub fn to_kv(&self) -> String {
        let mut out = vec![format!("kind={}", self.kind), format!("n={}", self.n)];
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.kind.uses("k") {
            out.push(format!("k={}", self.k));
        }
        if self.kind.uses("s") {
            out.push(format!("s={}", self.s));
        }
        if self.kind.uses("weights") {
            out.push(format!("weights={}", list(&self.weights)));
        }
        if self.kind.uses("dims") {
            out.push(format!("dims={}", list(&self.dims)));
        }
        if self.kind.uses("a") {
            out.push(format!("a={:?}", self.a));
        }
        if self.kind.uses("field") {
            out.push(format!("field={}", self.field.as_str()));
        }
        out.join("\n")
    }

    /// Parses the flat form; pairs may be separated by newlines, spaces or `;`.
    /// Keys that do not apply to the kind are rejected.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == ';') {
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{token}`")))?;
            pairs.push((key.trim().to_ascii_lowercase(), value.trim().to_string()));
        }
        let lookup = |name: &str| {
            pairs
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, v)| v.as_str())
        };
        let kind: EnsembleKind = lookup("kind")
            .ok_or_else(|| Error::Parse("missing key `kind`".into()))?
            .parse()?;
        let n = parse_usize(
            "n",
            lookup("n").ok_or_else(|| Error::Parse("missing key `n`".into()))?,
        )?;
        let mut spec = EnsembleSpec::new(kind, n);
        let mut explicit_weights = false;
        let mut explicit_dims = false;
        for (key, value) in &pairs {
            if !kind.uses(key) {
                return Err(Error::Parse(match key.as_str() {
                    "k" | "s" | "weights" | "dims" | "a" | "field" => {
                        format!("key `{key}` does not apply to kind {kind}")
                    }
                    _ => format!("unknown key `{key}`"),
                }));
            }
            match key.as_str() {
                "kind" | "n" => {}
                "k" => spec.k = parse_usize("k", value)?,
                "s" => spec.s = parse_usize("s", value)?,
                "weights" => {
                    spec.weights = parse_list("weights", value)?;
                    explicit_weights = true;
                }
                "dims" => {
                    spec.dims = parse_list("dims", value)?;
                    explicit_dims = true;
                }
                "a" => {
                    spec.a = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("a: `{value}` is not a number")))?
                }
                "field" => {
                    spec.field = match value.to_ascii_lowercase().as_str() {
                        "complex" => Field::Complex,
                        "real" => Field::Real,
                        _ => return Err(Error::Parse(format!("unknown field `{value}`"))),
                    }
                }
                _ => unreachable!(),
            }
        }
        if explicit_weights && lookup("k").is_none() {
            spec.k = spec.weights.len();
        }
        if !explicit_weights {
            spec.weights.clear();
        }
        if !explicit_dims {
            spec.dims.clear();
        }
        spec.fill_defaults();
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: `{value}` is not a nonnegative integer")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{key}: `{v}` is not a number")))
        })
        .collect()
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kv().replace('\n', " "))
    }
}
