use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::analytic::SpectralLaw;
use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};
use crate::linalg::Spectrum;

use super::entropy::{chebyshev_entropy, von_neumann_entropy};
use super::ks::{ks_distance_sorted, one_sample_threshold};
use super::stable_mean;

/// Eigenvalues at or below this are counted as exact zeros (rank deficiency).
pub const ZERO_EIGENVALUE: f64 = 1e-10;

/// Half-width of the window around `x = 1` counted as the point mass.
const DIRAC_SLACK: f64 = 1e-9;

/// Spectra of a batch of samples, keyed by sample id and kept in id order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBatch {
    spec: EnsembleSpec,
    seed: u64,
    ids: Vec<u64>,
    spectra: Vec<Spectrum>,
}

impl SpectrumBatch {
    pub fn new(spec: EnsembleSpec, seed: u64) -> Self {
        Self {
            spec,
            seed,
            ids: Vec::new(),
            spectra: Vec::new(),
        }
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn spectra(&self) -> &[Spectrum] {
        &self.spectra
    }

    pub fn push(&mut self, id: u64, spectrum: Spectrum) -> Result<()> {
        if spectrum.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "spectrum of size {} in a batch of N = {}",
                spectrum.n(),
                self.n()
            )));
        }
        match self.ids.binary_search(&id) {
            Ok(_) => Err(Error::InvalidSpec(format!("duplicate sample id {id}"))),
            Err(pos) => {
                self.ids.insert(pos, id);
                self.spectra.insert(pos, spectrum);
                Ok(())
            }
        }
    }

    /// Union of two batches drawn from the same spec and seed.
    pub fn merge(mut self, other: SpectrumBatch) -> Result<Self> {
        if self.spec != other.spec || self.seed != other.seed {
            return Err(Error::InvalidSpec(
                "cannot merge batches with different specs or seeds".into(),
            ));
        }
        for (id, s) in other.ids.into_iter().zip(other.spectra) {
            self.push(id, s)?;
        }
        Ok(self)
    }

    /// All rescaled eigenvalues `x = N lambda`, sorted ascending.
    pub fn pooled(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.spectra.iter().flat_map(|s| s.rescaled()).collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// `f` applied to each spectrum, in id order.
    pub fn per_sample(&self, f: impl Fn(&Spectrum) -> f64) -> Vec<f64> {
        self.spectra.iter().map(f).collect()
    }
}

/// Mean of `x^p` over the pooled rescaled eigenvalues.
pub fn empirical_moment(batch: &SpectrumBatch, p: u32) -> f64 {
    let values: Vec<f64> = batch.pooled().iter().map(|x| x.powi(p as i32)).collect();
    stable_mean(&values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentComparison {
    pub order: u32,
    pub empirical: f64,
    pub predicted: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

/// Sampled spectra against an asymptotic law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub law: String,
    pub n: usize,
    pub samples: usize,
    /// Number of eigenvalues entering the KS statistic.
    pub ks_points: usize,
    /// KS distance of the nonzero eigenvalues from the continuous part of the law.
    pub ks_distance: f64,
    /// 1% critical value for `ks_points` independent points.
    pub ks_threshold: f64,
    pub moments: Vec<MomentComparison>,
    /// `<S> - ln N`.
    pub entropy_offset_empirical: f64,
    pub entropy_offset_predicted: f64,
    /// `<S_inf> - ln N`.
    pub chebyshev_offset_empirical: f64,
    pub chebyshev_offset_predicted: f64,
    /// `<N lambda_max>`.
    pub support_edge_empirical: f64,
    pub support_edge_predicted: f64,
    /// `N <Tr rho^2>`.
    pub scaled_purity: f64,
    pub zero_fraction: f64,
    pub atom: f64,
    /// `|zero_fraction - atom| <= 1/N`.
    pub atom_consistent: bool,
}

impl ComparisonReport {
    /// One-level JSON object; moments become `moment_<p>_<field>` keys.
    pub fn to_flat_json(&self) -> Value {
        let mut map = Map::new();
        let mut put = |k: &str, v: Value| {
            map.insert(k.to_string(), v);
        };
        put("law", Value::from(self.law.clone()));
        put("n", Value::from(self.n));
        put("samples", Value::from(self.samples));
        put("ks_points", Value::from(self.ks_points));
        put("ks_distance", Value::from(self.ks_distance));
        put("ks_threshold", Value::from(self.ks_threshold));
        for m in &self.moments {
            let p = m.order;
            put(&format!("moment_{p}_empirical"), Value::from(m.empirical));
            put(&format!("moment_{p}_predicted"), Value::from(m.predicted));
            put(&format!("moment_{p}_abs_diff"), Value::from(m.abs_diff));
            put(&format!("moment_{p}_rel_diff"), Value::from(m.rel_diff));
        }
        put(
            "entropy_offset_empirical",
            Value::from(self.entropy_offset_empirical),
        );
        put(
            "entropy_offset_predicted",
            Value::from(self.entropy_offset_predicted),
        );
        put(
            "chebyshev_offset_empirical",
            Value::from(self.chebyshev_offset_empirical),
        );
        put(
            "chebyshev_offset_predicted",
            Value::from(self.chebyshev_offset_predicted),
        );
        put(
            "support_edge_empirical",
            Value::from(self.support_edge_empirical),
        );
        put(
            "support_edge_predicted",
            Value::from(self.support_edge_predicted),
        );
        put("scaled_purity", Value::from(self.scaled_purity));
        put("zero_fraction", Value::from(self.zero_fraction));
        put("atom", Value::from(self.atom));
        put("atom_consistent", Value::from(self.atom_consistent));
        Value::Object(map)
    }

    pub fn moment(&self, order: u32) -> Option<&MomentComparison> {
        self.moments.iter().find(|m| m.order == order)
    }
}

pub fn compare(batch: &SpectrumBatch, law: &SpectralLaw) -> Result<ComparisonReport> {
    law.validate()?;
    if batch.is_empty() {
        return Err(Error::InvalidSpec("empty batch".into()));
    }
    let n = batch.n();
    let nf = n as f64;
    let pooled = batch.pooled();
    let zeros = pooled.partition_point(|&x| x <= nf * ZERO_EIGENVALUE);
    let zero_fraction = zeros as f64 / pooled.len() as f64;
    let atom = law.atom();

    let table = law.cdf_table();
    let (ks_points, ks) = if law.is_dirac() {
        // sup |F_n - F| for a unit step: mass on either side of the step
        let below = pooled.partition_point(|&x| x < 1.0 - DIRAC_SLACK);
        let above = pooled.len() - pooled.partition_point(|&x| x <= 1.0 + DIRAC_SLACK);
        (pooled.len(), below.max(above) as f64 / pooled.len() as f64)
    } else if atom > 0.0 {
        // zeros are checked against the atom separately
        let rest = &pooled[zeros..];
        let scale = 1.0 - atom;
        let d = if rest.is_empty() {
            1.0
        } else {
            ks_distance_sorted(rest, |x| {
                ((table.evaluate(x) - atom) / scale).clamp(0.0, 1.0)
            })
        };
        (rest.len(), d)
    } else {
        (
            pooled.len(),
            ks_distance_sorted(&pooled, |x| table.evaluate(x)),
        )
    };

    let moments = (1..=4)
        .map(|p| {
            let values: Vec<f64> = pooled.iter().map(|x| x.powi(p as i32)).collect();
            let empirical = stable_mean(&values);
            let predicted = law.exact_moment(p).unwrap_or_else(|| law.moment(p));
            let abs_diff = (empirical - predicted).abs();
            MomentComparison {
                order: p,
                empirical,
                predicted,
                abs_diff,
                rel_diff: abs_diff / predicted.abs(),
            }
        })
        .collect();

    let ln_n = nf.ln();
    let entropy = stable_mean(&batch.per_sample(von_neumann_entropy)) - ln_n;
    let chebyshev = stable_mean(&batch.per_sample(chebyshev_entropy)) - ln_n;
    let edge = stable_mean(&batch.per_sample(|s| nf * s.largest()));
    let purity = stable_mean(&batch.per_sample(|s| nf * super::purity(s)));

    Ok(ComparisonReport {
        law: law.to_string(),
        n,
        samples: batch.len(),
        ks_points,
        ks_distance: ks,
        ks_threshold: one_sample_threshold(ks_points.max(1), 0.01),
        moments,
        entropy_offset_empirical: entropy,
        entropy_offset_predicted: law.predicted_mean_entropy(),
        chebyshev_offset_empirical: chebyshev,
        chebyshev_offset_predicted: law.chebyshev_offset(),
        support_edge_empirical: edge,
        support_edge_predicted: law.support_edge(),
        scaled_purity: purity,
        zero_fraction,
        atom,
        atom_consistent: (zero_fraction - atom).abs() <= 1.0 / nf,
    })
}

/// Histogram of the nonzero rescaled eigenvalues.
///
/// Exact zeros and points outside the range are reported as fractions of all
/// pooled points; `masses` are normalized over the remaining points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub zero_fraction: f64,
    pub outside_fraction: f64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    /// `mass / width` for each bin.
    pub fn densities(&self) -> Vec<f64> {
        self.masses
            .iter()
            .zip(self.edges.windows(2))
            .map(|(m, e)| m / (e[1] - e[0]))
            .collect()
    }

    /// `bin_lo,bin_hi,mass` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,mass\n");
        for (m, e) in self.masses.iter().zip(self.edges.windows(2)) {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", e[0], e[1], m));
        }
        out
    }
}

/// Equal-width bins on `[lo, hi]`; the top edge is inclusive.
pub fn histogram(batch: &SpectrumBatch, bins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("bad histogram range [{lo}, {hi}]")));
    }
    let pooled = batch.pooled();
    let total = pooled.len().max(1) as f64;
    let zero_cut = batch.n() as f64 * ZERO_EIGENVALUE;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let (mut zeros, mut outside) = (0usize, 0usize);
    for &x in &pooled {
        if x <= zero_cut {
            zeros += 1;
        } else if x < lo || x > hi {
            outside += 1;
        } else {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
    }
    let kept: usize = counts.iter().sum();
    let masses = counts
        .iter()
        .map(|&c| {
            if kept == 0 {
                0.0
            } else {
                c as f64 / kept as f64
            }
        })
        .collect();
    let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
    Ok(Histogram {
        edges,
        masses,
        zero_fraction: zeros as f64 / total,
        outside_fraction: outside as f64 / total,
    })
}
