//! Fixtures shared by the benchmarks.

use randrho::{sample, ComplexMatrix, EnsembleSpec, SeededStream};

pub const SEED: u64 = 7;

/// Sizes used by every size-parametrized benchmark.
pub const SIZES: [usize; 3] = [16, 64, 256];

/// A fixed Bures state, as a Hermitian matrix to diagonalize.
pub fn bures_matrix(n: usize) -> ComplexMatrix {
    let spec = EnsembleSpec::new(randrho::EnsembleKind::Bures, n);
    sample(&spec, &mut SeededStream::new(SEED, 0))
        .expect("Bures sampling succeeds")
        .into_matrix()
}
