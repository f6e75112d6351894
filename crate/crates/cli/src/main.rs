//! `randrho`: sample random density matrices, tabulate spectral laws and
//! compare the two.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical-invariant failure.
//! Failures print a one-line JSON object on stderr.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use randrho::Error;

#[derive(Parser)]
#[command(
    name = "randrho",
    version,
    about = "Random density matrices from structured ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw states and write their spectra as CSV.
    Sample(SampleArgs),
    /// Tabulate the density of a spectral law.
    Density(DensityArgs),
    /// Moments of a spectral law.
    Moments(MomentsArgs),
    /// Sample an ensemble and compare its spectra with a law.
    Compare(CompareArgs),
    /// Predicted vs sampled summary of the generalized family.
    Table1(TableArgs),
    /// Random quantum channels from random states on N^2.
    Channel(ChannelArgs),
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct EnsembleArgs {
    /// Ensemble kind, e.g. hilbert_schmidt, bures, arcsine, k_entangled, generalized.
    #[arg(long, default_value = "hilbert_schmidt")]
    pub kind: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Comma-separated superposition weights (must sum to 1).
    #[arg(long)]
    pub weights: Option<String>,
    /// Comma-separated ratios M_i / N of the Ginibre chain (K / N for induced).
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    /// complex or real (generalized only).
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct LawArgs {
    /// Law id: arcsine, bures, mp(c), nu_k(k), fuss_catalan(s), dirac; bare
    /// `fc` / `nu_k` take their parameter from --s / --k.
    #[arg(long)]
    pub law: String,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub law: LawArgs,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, default_value_t = 4)]
    pub max_order: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub run: RunArgs,
    /// Law to compare against; defaults to the ensemble's limiting law.
    #[arg(long)]
    pub law: Option<String>,
    /// Also write a histogram of the pooled spectra to this CSV file.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// JSON output file; the aligned table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ChannelArgs {
    /// Ensemble of the states on N^2 (default: induced with K = N^2).
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Channel dimension N.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Failure of a run, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Library(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Library(e) => match e {
                Error::InvalidSpec(_)
                | Error::Parse(_)
                | Error::DimensionMismatch(_)
                | Error::SizeGuard { .. }
                | Error::Domain(_) => 2,
                _ => 3,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Config(_) => "config",
            Failure::Numerical(_) => "numerical_invariant",
            Failure::Library(e) => match e {
                Error::DimensionMismatch(_) => "dimension_mismatch",
                Error::RankDeficient { .. } => "rank_deficient",
                Error::NotHermitian(_) => "not_hermitian",
                Error::NotFactorable { .. } => "not_factorable",
                Error::InvalidSpec(_) => "invalid_spec",
                Error::SizeGuard { .. } => "size_guard",
                Error::EnvironmentDeficient(_) => "environment_deficient",
                Error::NotDensityMatrix(_) => "not_density_matrix",
                Error::GammaPole(_) => "gamma_pole",
                Error::SeriesDivergence(_) => "series_divergence",
                Error::Domain(_) => "domain",
                Error::Parse(_) => "parse",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) | Failure::Numerical(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Density(a) => commands::density(a),
        Command::Moments(a) => commands::moments(a),
        Command::Compare(a) => commands::compare(a),
        Command::Table1(a) => commands::table1(a),
        Command::Channel(a) => commands::channel(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = serde_json::json!({
                "error": f.kind(),
                "message": f.message(),
                "exit_code": f.code(),
            });
            eprintln!("{body}");
            ExitCode::from(f.code())
        }
    }
}
