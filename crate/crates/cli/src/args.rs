use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "splitquant", version, about = "Quantize 1-D distributions and run error sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantize one distribution; writes `position,weight` CSV and a JSON sidecar.
    Quantize(CommonArgs),
    /// W1 error and bounds against representation size.
    SweepRepsize(CommonArgs),
    /// W1 error of repeated compressed arithmetic against the operand count.
    SweepArith(CommonArgs),
    /// Monte Carlo sample count matching each quantizer's W1 error.
    McCompare(CommonArgs),
    /// Upper and lower error envelopes for laws bounded below.
    Bounds(CommonArgs),
}

/// Flags shared by every subcommand. Each overrides the matching `--config` entry.
#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// TOML experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Distribution as `name:params`, e.g. `exp:1`, `gauss:0,1`, `pareto:2,1`, `heavy`. Repeatable.
    #[arg(long = "dist")]
    pub dists: Vec<String>,

    /// mean, median, geomean, optimal or asympt. Repeatable.
    #[arg(long = "method")]
    pub methods: Vec<String>,

    /// Depth `n` (rep size `2^n`) or an inclusive range `a-b`. Repeatable.
    #[arg(long = "n")]
    pub depths: Vec<String>,

    /// Atom count. Must be a power of two for split methods. Repeatable.
    #[arg(long = "rep-size")]
    pub rep_sizes: Vec<usize>,

    /// Arithmetic operation: add, sub or mul.
    #[arg(long)]
    pub op: Option<String>,

    /// Number of operands.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Fill the `wall_seconds` column (cells then run one at a time).
    #[arg(long)]
    pub timing: bool,

    /// Monte Carlo replicates per row.
    #[arg(long)]
    pub replicates: Option<usize>,

    /// Monte Carlo statistic: mean or p95.
    #[arg(long)]
    pub statistic: Option<String>,

    /// Depth of the per-operand grid used for arithmetic references.
    #[arg(long)]
    pub reference_n: Option<u32>,

    /// Compression depth of arithmetic references once exact products get too large.
    #[arg(long)]
    pub reference_acc_n: Option<u32>,
}
