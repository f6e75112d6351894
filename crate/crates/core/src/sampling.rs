//! Seeded random streams and the primitive random-matrix generators.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{qr_unitary, Complex64, ComplexMatrix};

/// Deterministic random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8 with the stream id mapped onto the cipher's 64-bit
/// stream selector, so distinct ids give independent, non-overlapping
/// sequences and the same pair always reproduces the same draws.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform draw on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        // 53 random mantissa bits
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for SeededStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Number field of a random matrix ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Complex,
    Real,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Complex => "complex",
            Field::Real => "real",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GinibreSpec {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
}

impl GinibreSpec {
    pub fn new(rows: usize, cols: usize, field: Field) -> Self {
        assert!(
            rows >= 1 && cols >= 1,
            "Ginibre dimensions must be positive"
        );
        Self { rows, cols, field }
    }
}

/// Matrix of i.i.d. Gaussian entries with unit second absolute moment.
///
/// Complex entries have independent real and imaginary parts of variance 1/2;
/// real entries are standard normal.
pub fn ginibre(spec: &GinibreSpec, rng: &mut SeededStream) -> ComplexMatrix {
    let count = spec.rows * spec.cols;
    let data = match spec.field {
        Field::Complex => (0..count)
            .map(|_| {
                let re = rng.standard_normal() * std::f64::consts::FRAC_1_SQRT_2;
                let im = rng.standard_normal() * std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(re, im)
            })
            .collect(),
        Field::Real => (0..count)
            .map(|_| Complex64::new(rng.standard_normal(), 0.0))
            .collect(),
    };
    ComplexMatrix::new(spec.rows, spec.cols, data).expect("shape is consistent")
}

/// Haar unitary on U(N) from the positive-diagonal QR of a complex Ginibre matrix.
pub fn haar_unitary(n: usize, rng: &mut SeededStream) -> ComplexMatrix {
    haar_from_ginibre(n, Field::Complex, rng).0
}

/// Haar orthogonal on O(N), returned with zero imaginary parts.
pub fn haar_orthogonal(n: usize, rng: &mut SeededStream) -> ComplexMatrix {
    haar_from_ginibre(n, Field::Real, rng).0
}

/// Draws a Ginibre matrix and returns its Haar-distributed Q factor together
/// with the Gaussian matrix it came from.
pub fn haar_from_ginibre(
    n: usize,
    field: Field,
    rng: &mut SeededStream,
) -> (ComplexMatrix, ComplexMatrix) {
    assert!(n >= 1, "Haar sampling needs N >= 1");
    loop {
        let z = ginibre(&GinibreSpec::new(n, n, field), rng);
        // Rank deficiency has probability zero; redraw if roundoff ever hits it.
        if let Ok((q, _)) = qr_unitary(&z) {
            return (q, z);
        }
    }
}
