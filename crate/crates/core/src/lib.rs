//! Random density matrices from structured ensembles.
//!
//! Every ensemble produces `rho = W W^dagger / Tr(W W^dagger)` for a random
//! factor `W` built from Ginibre matrices and Haar unitaries. Alongside the
//! samplers the crate carries the limiting spectral laws of `x = N lambda`,
//! their moments and entropies, statistics for comparing samples against
//! them, and random quantum channels obtained from random states.

// `!(x > 0.0)` style checks reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channels;
pub mod ensembles;
pub mod error;
pub mod linalg;
pub mod runner;
pub mod sampling;
pub mod stats;

pub use analytic::{CdfTable, SpectralLaw};
pub use channels::{random_operation, to_channel_state, ChoiState, CptpReport};
pub use ensembles::{sample, DensityMatrix, EnsembleKind, EnsembleSpec};
pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix, Spectrum};
pub use runner::{sample_batch, table, TableRow};
pub use sampling::{Field, SeededStream};
pub use stats::{compare, ComparisonReport, Histogram, SpectrumBatch};
