//! Random density matrices `rho = W W^dagger / Tr(W W^dagger)` for every
//! supported ensemble, plus the explicit multipartite projection used as an
//! oracle for Ginibre products.

mod multipartite;
mod spec;

pub use multipartite::{
    projected_multipartite_from_unitaries, sample_projected_multipartite, MULTIPARTITE_LIMIT,
};
pub use spec::{EnsembleKind, EnsembleSpec};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, matmul, Complex64, ComplexMatrix, Spectrum, EIGEN_TOLERANCE,
};
use crate::sampling::{ginibre, haar_orthogonal, haar_unitary, Field, GinibreSpec, SeededStream};

/// A validated random state together with the spec that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spec: EnsembleSpec,
}

impl DensityMatrix {
    /// `W W^dagger / Tr(W W^dagger)`.
    pub fn from_factor(w: &ComplexMatrix, spec: EnsembleSpec) -> Result<Self> {
        let gram = w.gram();
        let trace = gram.trace().re;
        if !(trace > 0.0) || !trace.is_finite() {
            return Err(Error::NotDensityMatrix(format!("Tr(W W^dagger) = {trace}")));
        }
        Self::new(gram.scale_real(1.0 / trace), spec)
    }

    /// Wraps a matrix after checking Hermiticity and unit trace.
    pub fn new(mut matrix: ComplexMatrix, spec: EnsembleSpec) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotDensityMatrix("matrix is not square".into()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > 1e-10 {
            return Err(Error::NotHermitian(defect));
        }
        matrix.symmetrize();
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::NotDensityMatrix(format!("trace = {trace}")));
        }
        Ok(Self { matrix, spec })
    }

    pub fn maximally_mixed(spec: EnsembleSpec) -> Self {
        let n = spec.n;
        let matrix = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self { matrix, spec }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenvalues, checked for positivity (to `EIGEN_TOLERANCE`) and unit sum.
    pub fn spectrum(&self) -> Result<Spectrum> {
        spectrum_of(self)
    }
}

pub fn spectrum_of(rho: &DensityMatrix) -> Result<Spectrum> {
    let raw = hermitian_eigenvalues(&rho.matrix)?;
    if let Some(&min) = raw.lambdas().last() {
        if min < -EIGEN_TOLERANCE {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
    }
    Spectrum::of_state(raw.lambdas().to_vec())
}

/// Rescaled eigenvalues `x = N lambda`.
pub fn rescaled(spectrum: &Spectrum) -> Vec<f64> {
    spectrum.rescaled()
}

/// Draws one state from the ensemble described by `spec`.
pub fn sample(spec: &EnsembleSpec, rng: &mut SeededStream) -> Result<DensityMatrix> {
    use EnsembleKind::*;
    spec.validate()?;
    let n = spec.n;
    match spec.kind {
        Induced | HilbertSchmidt => sample_induced_with(spec, rng),
        Bures => sample_bures(n, rng),
        Arcsine => sample_arcsine(n, rng),
        KEntangled => sample_weighted(spec, Some(&spec.weights), &[], Field::Complex, rng),
        GinibreProduct => sample_weighted(spec, None, &spec.chain_sizes(), Field::Complex, rng),
        Generalized => sample_weighted(
            spec,
            Some(&spec.weights),
            &spec.chain_sizes(),
            spec.field,
            rng,
        ),
        RealOrthogonalSum => sample_weighted(spec, Some(&spec.weights), &[], Field::Real, rng),
        RealGinibreProduct => sample_weighted(spec, None, &spec.chain_sizes(), Field::Real, rng),
        UnitInterpolation => sample_unit_interpolation(n, spec.a, rng),
        BuresHsInterpolation => sample_bures_hs_interpolation(n, spec.a, rng),
    }
}

fn sample_induced_with(spec: &EnsembleSpec, rng: &mut SeededStream) -> Result<DensityMatrix> {
    let k = spec.environment_dim();
    let x = ginibre(&GinibreSpec::new(spec.n, k, Field::Complex), rng);
    DensityMatrix::from_factor(&x, spec.clone())
}

/// Induced measure `mu_{N,K}`: `X X^dagger / Tr` for an `N x K` Ginibre `X`.
pub fn sample_induced(n: usize, k: usize, rng: &mut SeededStream) -> Result<DensityMatrix> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidSpec("induced measure needs N, K >= 1".into()));
    }
    sample_induced_with(&EnsembleSpec::induced(n, k), rng)
}

pub fn sample_hilbert_schmidt(n: usize, rng: &mut SeededStream) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::new(EnsembleKind::HilbertSchmidt, n);
    spec.validate()?;
    sample_induced_with(&spec, rng)
}

/// `(2 + U + U^dagger) / (2N + Tr(U + U^dagger))`, keeping the finite-N denominator.
pub fn sample_arcsine(n: usize, rng: &mut SeededStream) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::new(EnsembleKind::Arcsine, n);
    spec.validate()?;
    let u = haar_unitary(n, rng);
    let two = ComplexMatrix::identity(n).scale_real(2.0);
    let m = two.add(&u)?.add(&u.adjoint())?;
    let denom = 2.0 * n as f64 + (u.trace() + u.trace().conj()).re;
    DensityMatrix::new(m.scale_real(1.0 / denom), spec)
}

/// `W = sum_i p_i U_i` over `k = p.len()` independent Haar unitaries.
pub fn sample_k_entangled(n: usize, p: &[f64], rng: &mut SeededStream) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::k_entangled(n, p.to_vec())?;
    sample(&spec, rng)
}

/// `W = (1 + U) G`.
pub fn sample_bures(n: usize, rng: &mut SeededStream) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::new(EnsembleKind::Bures, n);
    spec.validate()?;
    let u = haar_unitary(n, rng);
    let g = ginibre(&GinibreSpec::new(n, n, Field::Complex), rng);
    let w = matmul(&ComplexMatrix::identity(n).add(&u)?, &g)?;
    DensityMatrix::from_factor(&w, spec)
}

/// `W = G_1 ... G_s` along the rectangular chain given by `dims`.
pub fn sample_ginibre_product(
    n: usize,
    s: usize,
    dims: &[f64],
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let mut spec = EnsembleSpec::ginibre_product(n, s);
    if !dims.is_empty() {
        spec.dims = dims.to_vec();
    }
    sample(&spec, rng)
}

/// `W = (1/k) sum_i O_i` over Haar orthogonal matrices.
pub fn sample_real_orthogonal_sum(
    n: usize,
    k: usize,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let mut spec = EnsembleSpec::new(EnsembleKind::RealOrthogonalSum, n);
    spec.k = k;
    spec.weights = if k == 0 {
        Vec::new()
    } else {
        vec![1.0 / k as f64; k]
    };
    sample(&spec, rng)
}

/// `W = R_1 ... R_s` over real Ginibre matrices.
pub fn sample_real_ginibre_product(
    n: usize,
    s: usize,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let mut spec = EnsembleSpec::new(EnsembleKind::RealGinibreProduct, n);
    spec.s = s;
    spec.dims = vec![1.0; s];
    sample(&spec, rng)
}

/// `W = a 1 + (1 - a) U`.
pub fn sample_unit_interpolation(
    n: usize,
    a: f64,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::new(EnsembleKind::UnitInterpolation, n).with_a(a);
    spec.validate()?;
    let u = haar_unitary(n, rng);
    if a == 0.0 || a == 1.0 {
        // W is a multiple of a unitary
        return Ok(DensityMatrix::maximally_mixed(spec));
    }
    let w = interpolate_with_identity(a, &u)?;
    DensityMatrix::from_factor(&w, spec)
}

/// `W = (a 1 + (1 - a) U) G` for `a` in `[0, 1/2]`: `a = 1/2` is the Bures
/// form `(1 + U) G / 2`, `a = 0` is `U G`, which is again Ginibre.
pub fn sample_bures_hs_interpolation(
    n: usize,
    a: f64,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let spec = EnsembleSpec::new(EnsembleKind::BuresHsInterpolation, n).with_a(a);
    spec.validate()?;
    let u = haar_unitary(n, rng);
    let g = ginibre(&GinibreSpec::new(n, n, Field::Complex), rng);
    let w = matmul(&interpolate_with_identity(a, &u)?, &g)?;
    DensityMatrix::from_factor(&w, spec)
}

fn interpolate_with_identity(a: f64, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut w = u.scale_real(1.0 - a);
    w.axpy(Complex64::new(a, 0.0), &ComplexMatrix::identity(u.rows()))?;
    Ok(w)
}

/// `W = (sum_i p_i V_i) G_1 ... G_s` where `V_i` are Haar unitaries (or
/// orthogonals for the real field) and the `G_i` follow the chain `sizes`.
/// `weights = None` drops the unitary part entirely.
fn sample_weighted(
    spec: &EnsembleSpec,
    weights: Option<&[f64]>,
    sizes: &[usize],
    field: Field,
    rng: &mut SeededStream,
) -> Result<DensityMatrix> {
    let n = spec.n;
    let mut w: Option<ComplexMatrix> = None;
    if let Some(weights) = weights {
        let mut acc = ComplexMatrix::zeros(n, n);
        for &p in weights {
            let v = match field {
                Field::Complex => haar_unitary(n, rng),
                Field::Real => haar_orthogonal(n, rng),
            };
            if p != 0.0 {
                acc.axpy(Complex64::new(p, 0.0), &v)?;
            }
        }
        if sizes.is_empty() && weights.iter().filter(|&&p| p != 0.0).count() == 1 {
            // W is a multiple of one unitary, so W W^dagger is the identity
            return Ok(DensityMatrix::maximally_mixed(spec.clone()));
        }
        w = Some(acc);
    }
    let mut rows = n;
    for &cols in sizes {
        let g = ginibre(&GinibreSpec::new(rows, cols, field), rng);
        w = Some(match w {
            Some(acc) => matmul(&acc, &g)?,
            None => g,
        });
        rows = cols;
    }
    let w = w.ok_or_else(|| Error::InvalidSpec("ensemble has no factors".into()))?;
    DensityMatrix::from_factor(&w, spec.clone())
}
