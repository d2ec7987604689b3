use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fkwc",
    version,
    about = "Depth-rank k-sample tests for equality of covariance operators of functional data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test equality of the group covariance operators
    Test(TestArgs),
    /// Pairwise two-group comparisons with a family-wise correction
    Mc(McArgs),
    /// Predicted power and sample size from a JSON power spec
    Power(PowerArgs),
    /// Run a replicated size/power study from a JSON study spec
    Simulate(SimulateArgs),
    /// Per-curve depth values and ranks
    Depth(DepthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepthName {
    Ltr,
    Rp,
    Mfhd,
    Mbd,
    Spatial,
    Ksd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrectionName {
    Sidak,
    Bonferroni,
    Holm,
}

/// Where derivative curves come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivatives {
    FiniteDiff,
    File(PathBuf),
}

fn parse_derivatives(s: &str) -> Result<Derivatives, String> {
    if s == "finite-diff" {
        return Ok(Derivatives::FiniteDiff);
    }
    match s.strip_prefix("file=") {
        Some(p) if !p.is_empty() => Ok(Derivatives::File(PathBuf::from(p))),
        _ => Err(format!("expected `finite-diff` or `file=PATH`, got `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input file: a dataset (wide CSV, or JSON by extension) or, for power and simulate, a JSON description
    #[arg(long, short)]
    pub input: PathBuf,
    /// Write the result here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 = all cores); results do not depend on it
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct DepthOpts {
    /// Depth function used to rank the pooled sample
    #[arg(long, value_enum, default_value_t = DepthName::Rp)]
    pub depth: DepthName,
    /// Use the curve together with its first derivative
    #[arg(long)]
    pub primed: bool,
    /// Number of random directions for RP depth
    #[arg(long, value_name = "M", default_value_t = 20)]
    pub projections: usize,
    /// Derivative source: `finite-diff` or `file=PATH` (wide CSV, same rows as the input)
    #[arg(long, value_name = "SOURCE", value_parser = parse_derivatives, default_value = "finite-diff")]
    pub derivatives: Derivatives,
    /// Subtract each group's deepest curve before pooling
    #[arg(long)]
    pub center: bool,
    /// Seed for random directions and tie-breaking
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub depth: DepthOpts,
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Use the percentile statistic on this fraction of the least deep curves
    #[arg(long, value_name = "R")]
    pub r: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub depth: DepthOpts,
    /// Family-wise correction of the pairwise p-values
    #[arg(long, value_enum, default_value_t = CorrectionName::Sidak)]
    pub correction: CorrectionName,
    /// Number of tests to correct over (default: number of pairs)
    #[arg(long, value_name = "M")]
    pub comparisons: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub common: Common,
    /// Override the seed stored in the input file
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the significance level stored in the input file
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Override the seed stored in the input file
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the significance level stored in the input file
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Override the percentile fraction stored in the input file
    #[arg(long, value_name = "R")]
    pub r: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub depth: DepthOpts,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
