use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "muntzlab",
    version,
    about = "Run Müntz polynomial and Carleson embedding checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a spectrum file and report its lacunarity data
    Spectrum(SpectrumArgs),
    /// Bracket the L^p decoupling constant over random polynomials
    Decoupling(DecouplingArgs),
    /// Scan the kernel sum over t in [1/2, 1)
    Kernel(KernelArgs),
    /// Bracket the block Bernstein ratio against a measure
    Bernstein(BernsteinArgs),
    /// Search for the embedding constant and list tail rows
    Embedding(EmbeddingArgs),
    /// Classify a measure by its tail exponent and summability tests
    Classify(ClassifyArgs),
    /// Schur row and column sums for the geometric kernel
    Schur(SchurArgs),
    /// Run every default property suite
    All(AllArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Seed for sampled checks (MUNTZLAB_SEED overrides it)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write plot rows here
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Tolerance for the pass/fail decision
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct DecouplingArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Number of grid points in t
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct BernsteinArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Exponent q of the Jacobi norm (defaults to p)
    #[arg(long)]
    pub q_exp: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// Problem file bundling spectrum, measure, p and beta
    #[arg(long, conflicts_with_all = ["spectrum", "measure"])]
    pub problem: Option<PathBuf>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Jacobi exponent of the right-hand measure
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Coordinate ascent rounds after sampling
    #[arg(long, default_value_t = 4)]
    pub ascent: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Spectrum for the moment series (defaults to 2^k, k < 40)
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SchurArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 24)]
    pub i_max: usize,
    /// Hölder exponents p_1,...,p_n (defaults to p and its conjugate)
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct AllArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[command(flatten)]
    pub out: Output,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Decoupling(_) => "decoupling",
            Command::Kernel(_) => "kernel",
            Command::Bernstein(_) => "bernstein",
            Command::Embedding(_) => "embedding",
            Command::Classify(_) => "classify",
            Command::Schur(_) => "schur",
            Command::All(_) => "all",
        }
    }

    pub fn output(&self) -> &Output {
        match self {
            Command::Spectrum(a) => &a.out,
            Command::Decoupling(a) => &a.out,
            Command::Kernel(a) => &a.out,
            Command::Bernstein(a) => &a.out,
            Command::Embedding(a) => &a.out,
            Command::Classify(a) => &a.out,
            Command::Schur(a) => &a.out,
            Command::All(a) => &a.out,
        }
    }
}
