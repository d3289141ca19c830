use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "icpen",
    version,
    about = "Penalized variable selection for interval-censored Cox regression"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for replicate-level parallelism.
    #[arg(long, global = true, env = "ICPEN_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a GIC-tuned path and write the selected model and path table.
    Fit(FitArgs),
    /// Fit a path and print the path table to stdout.
    Path(FitArgs),
    /// Run a simulation campaign.
    Simulate(SimulateArgs),
    /// Score coefficient estimates against a known truth.
    Metrics(MetricsArgs),
    /// Midpoint imputation or missing-genotype filling of a data file.
    Impute(ImputeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TuningArgs {
    /// Number of thresholds on the path.
    #[arg(long, default_value_t = 101)]
    pub grid_size: usize,
    /// Smallest-to-largest threshold ratio; defaults per family.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// EM relative-change tolerance.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// EM iteration cap per threshold.
    #[arg(long, default_value_t = 101)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// lasso, adaptive_lasso, scad or mcp.
    #[arg(long, default_value = "mcp")]
    pub penalty: String,
    /// Concavity parameter for SCAD (> 2) or MCP (> 1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fit on the covariates as given.
    #[arg(long)]
    pub no_standardize: bool,
    /// Use the `trunc` column as left-truncation times.
    #[arg(long)]
    pub truncation: bool,
    /// Covariates left unpenalized.
    #[arg(long, value_delimiter = ',')]
    pub unpenalized: Vec<String>,
    /// Sidecar file of per-covariate penalty factors.
    #[arg(long, conflicts_with = "unpenalized")]
    pub penalty_factors: Option<PathBuf>,
    #[arg(short, long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// t1..t4 or t1-small..t4-small.
    #[arg(long, default_value = "t1-small")]
    pub preset: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Penalty families to fit to every replicate.
    #[arg(long, value_delimiter = ',')]
    pub fit: Vec<String>,
    /// Write each replicate's data file (always on without --fit).
    #[arg(long)]
    pub write_data: bool,
    /// Write midpoint-imputed right-censored files.
    #[arg(long)]
    pub midpoint: bool,
    #[arg(short, long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    /// One row of estimates per replicate, header of covariate names.
    /// Coordinates without a column count as zero.
    #[arg(long)]
    pub estimates: PathBuf,
    /// `name,beta` rows, or one row of true coefficients under a header of
    /// names.
    #[arg(long)]
    pub truth: PathBuf,
    /// Magnitudes at or below this count as zero.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImputeMode {
    Midpoint,
    Genotype,
}

#[derive(Debug, Clone, Args)]
pub struct ImputeArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "midpoint")]
    pub mode: ImputeMode,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
