use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdpfeas_core::BoundKind;

#[derive(Debug, Parser)]
#[command(
    name = "sdpfeas",
    version,
    about = "Tail bounds on whether a defect predictor can stand in for manual testing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Confusion counts (JSON) or labelled records (CSV) to the failure probability.
    Metrics(MetricsArgs),
    /// One bound at one time point. Exits 3 when the bound does not apply.
    Bound(BoundArgs),
    /// Bounds over the configured time grid.
    Sweep(ScenarioArgs),
    /// Sweep, then check every applicable bound against exact and/or
    /// Monte-Carlo tails. Exits 4 if any check fails.
    Verify(ScenarioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// `{"tp":..,"fn":..,"fp":..,"tn":..}` or a CSV with `actual,predicted`
    /// columns; `-` reads standard input.
    #[arg(value_name = "INPUT", required_unless_present = "config", conflicts_with = "config")]
    pub input: Option<PathBuf>,

    /// Same as INPUT.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,

    #[command(flatten)]
    pub output: OutputArgs,

    /// Monte-Carlo seed; overrides the config.
    #[arg(long, env = "SDPFEAS_SEED")]
    pub seed: Option<u64>,

    /// Monte-Carlo trials per bound; 0 disables sampling.
    #[arg(long)]
    pub trials: Option<u64>,

    /// Injected-reliability expectation with the sign that matches e^{-Yt}.
    #[arg(long, conflicts_with = "as_published")]
    pub corrected: bool,

    /// Injected-reliability expectation with the sign as originally printed.
    #[arg(long)]
    pub as_published: bool,

    /// Verdict cut-off: bounds at or below this mark a time point infeasible.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Test hook: scale every bound before verification.
    #[arg(long, hide = true)]
    pub corrupt_bound_factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Which bound, when the config lists none or several.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<BoundKind>,
}

fn parse_kind(s: &str) -> Result<BoundKind, String> {
    match s {
        "hazard" => Ok(BoundKind::Hazard),
        "reliability" => Ok(BoundKind::Reliability),
        other => Err(format!("expected `hazard` or `reliability`, got `{other}`")),
    }
}
