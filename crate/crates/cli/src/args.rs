use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable that replaces the built-in default truncation tail.
pub const EPSILON_ENV: &str = "JCDYN_EPSILON_TAIL";

#[derive(Debug, Parser)]
#[command(
    name = "jcdyn",
    version,
    about = "Entanglement, purity and energy dynamics of two moving atoms in thermal cavities",
    after_help = "Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced two-atom state and observables on a gt grid
    #[command(args_override_self = true)]
    Timeseries(RunArgs),
    /// Concurrence, purity and energy trajectory only
    #[command(args_override_self = true)]
    Epe(RunArgs),
    /// Extrema, sudden-death intervals and period estimate for each configuration
    #[command(args_override_self = true)]
    Scan(ScanArgs),
    /// Compare the closed form against brute-force propagation
    #[command(args_override_self = true)]
    Validate(ValidateArgs),
    /// Render columns of a CSV produced by this tool as an SVG line plot
    #[command(args_override_self = true)]
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of half-wavelengths of the field mode along the flight path
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub p: u32,
    /// Mean photon number of cavity A
    #[arg(long, default_value_t = 0.1)]
    pub kbar: f64,
    /// Mean photon number of cavity B [default: kbar]
    #[arg(long)]
    pub lbar: Option<f64>,
    /// Detuning omega_0 - omega_c in units of g
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Bare atom-field coupling
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Atoms at rest: constant coupling g
    #[arg(long)]
    pub no_motion: bool,
    /// Thermal tail mass allowed outside the truncated photon basis
    #[arg(long, env = EPSILON_ENV, default_value_t = jcdyn::DEFAULT_EPSILON_TAIL)]
    pub epsilon_tail: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// End of the gt window
    #[arg(long, default_value_t = jcdyn::sweep::DEFAULT_GT_MAX)]
    pub gt_max: f64,
    /// Number of grid intervals; the grid has steps + 1 points
    #[arg(long, default_value_t = jcdyn::sweep::DEFAULT_STEPS)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Omit the generation timestamp from JSON metadata
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// File of key=value lines using the flag names; explicit flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Comma-separated values of p
    #[arg(long, default_value = "1")]
    pub p: String,
    /// Comma-separated mean photon numbers of cavity A
    #[arg(long, default_value = "0.1")]
    pub kbar: String,
    /// Comma-separated mean photon numbers of cavity B [default: kbar, paired]
    #[arg(long)]
    pub lbar: Option<String>,
    /// Comma-separated detunings
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long)]
    pub no_motion: bool,
    #[arg(long, env = EPSILON_ENV, default_value_t = jcdyn::DEFAULT_EPSILON_TAIL)]
    pub epsilon_tail: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value = "1,4")]
    pub p: String,
    /// Comma-separated mean photon numbers, used for both cavities
    #[arg(long, default_value = "0,0.1,0.5")]
    pub kbar: String,
    #[arg(long, default_value = "0,1,5", allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long)]
    pub no_motion: bool,
    #[arg(long, env = EPSILON_ENV, default_value_t = jcdyn::DEFAULT_EPSILON_TAIL)]
    pub epsilon_tail: f64,
    #[arg(long, default_value_t = jcdyn::sweep::DEFAULT_GT_MAX)]
    pub gt_max: f64,
    /// Number of grid intervals in [0, gt_max]
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// CSV written by `timeseries` or `epe`
    #[arg(short, long)]
    pub input: PathBuf,
    /// SVG file; standard output when absent
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Column on the horizontal axis; `energy` or `purity` give the EPE projections
    #[arg(long, default_value = "gt")]
    pub x: String,
    /// Comma-separated columns drawn as polylines
    #[arg(long, default_value = "concurrence,purity,energy")]
    pub columns: String,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}
