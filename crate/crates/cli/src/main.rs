mod commands;
mod input;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcorr_core::Error;

#[derive(Parser, Debug)]
#[command(name = "dcorr", version, about = "Distance correlation diagnostics for time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance covariance and correlation of two columns.
    Dcov(DcovArgs),
    /// Auto-distance correlation function of one column.
    Adcf(AdcfArgs),
    /// Cross-distance correlation function of two columns.
    Cdcf(CdcfArgs),
    /// Ordinary sample autocorrelation function.
    Acf(AcfArgs),
    /// Fit an AR(p) model.
    FitAr(FitArgs),
    /// Simulate a causal AR(p) series.
    Simulate(SimulateArgs),
    /// Scaled ADCF with an iid permutation envelope.
    Permtest(PermtestArgs),
    /// Goodness-of-fit report for an AR(p) model.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Svg,
    /// One-column CSV of the simulated series (`simulate` only).
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Seed for every random draw; echoed in the output.
    #[arg(long, env = "DCORR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for resampling (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// CSV file, or `-` for standard input.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct MeasureArg {
    /// Weight measure, e.g. `szekely:alpha=1.0`, `gauss:var=0.5`, `stable:beta=1.5,scale=1.0`.
    #[arg(long, default_value = "gauss:var=0.5")]
    pub measure: String,
}

#[derive(Args, Debug)]
pub struct ResampleArgs {
    /// Number of resampling replicates.
    #[arg(long = "B", default_value_t = 1000)]
    pub b: usize,
    /// Comma-separated quantile levels.
    #[arg(long, default_value = "0.05,0.5,0.95", value_delimiter = ',')]
    pub levels: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct DcovArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// First column (name or 0-based index).
    #[arg(long, default_value = "0")]
    pub x: String,
    /// Second column (name or 0-based index).
    #[arg(long, default_value = "1")]
    pub y: String,
    #[command(flatten)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct AdcfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Column (name or 0-based index).
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    /// Report `n R(h)` instead of `R(h)`.
    #[arg(long)]
    pub scaled: bool,
    #[command(flatten)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CdcfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0")]
    pub x: String,
    #[arg(long, default_value = "1")]
    pub y: String,
    /// Lags as a comma list or range, e.g. `-5..5` or `0,1,4`.
    /// Defaults to `-max_lag..max_lag`.
    #[arg(long, allow_hyphen_values = true)]
    pub lags: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[command(flatten)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct AcfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    /// Applied before the ACF: identity, square or abs.
    #[arg(long, default_value = "identity")]
    pub transform: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    /// AR order; selected by AICC when omitted.
    #[arg(long)]
    pub p: Option<usize>,
    /// Largest order considered by AICC.
    #[arg(long, default_value_t = 10)]
    pub p_max: usize,
    /// `ls` (least squares) or `yw` (Yule-Walker).
    #[arg(long, default_value = "ls")]
    pub method: String,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0")]
    pub column: String,
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Comma-separated AR coefficients.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Vec<f64>,
    /// Innovations: `gauss[:sigma=1]`, `t:df=1.5`, `sgamma:delta=0.2,rate=0.5`.
    #[arg(long, default_value = "gauss")]
    pub noise: String,
    #[arg(long)]
    pub n: usize,
    /// Discarded start-up values (default 10p + 100).
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PermtestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[command(flatten)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub resample: ResampleArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0")]
    pub column: String,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub resample: ResampleArgs,
    /// Parametric-bootstrap innovations: `resample` (residuals) or `gauss`.
    #[arg(long, default_value = "resample")]
    pub bootstrap_noise: String,
    #[command(flatten)]
    pub common: Common,
}

/// 1 usage/configuration, 2 data, 3 numerical.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Lag(_) | Error::Order(_) | Error::Domain(_) => 1,
        Error::Io { .. }
        | Error::TooFewObservations { .. }
        | Error::Shape(_)
        | Error::DegenerateSeries(_) => 2,
        Error::Numerical(_) | Error::SingularFit(_) | Error::NonCausal(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dcorr: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
