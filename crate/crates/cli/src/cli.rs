//! Command-line surface.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "acidlab", version, about = "Numerical laboratory for an acid-mediated tumor invasion model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Linear and global stability classification of a parameter point.
    Classify(ClassifyArgs),
    /// The six global-stability threshold values at (a1, a2, d1).
    Thresholds(ThresholdsArgs),
    /// Run the PDE solver and write trajectory artifacts.
    Simulate(SimulateArgs),
    /// Sweep the (d1, d2/r) plane and map theorem cases.
    Scan(ScanArgs),
    /// Run a simulation and gate on the Lyapunov and sandwich checks.
    Verify(VerifyArgs),
}

/// Model-parameter overrides shared by several subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamFlags {
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Tumor diffusion rate.
    #[arg(long = "D", alias = "diffusion")]
    pub diffusion: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct ThresholdsArgs {
    #[arg(long, default_value_t = 0.5)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a2: f64,
    #[arg(long, default_value_t = 0.5)]
    pub d1: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SimulateArgs {
    /// JSON run configuration; flags override individual fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub n_cells: Option<usize>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub sample_every: Option<f64>,
    #[arg(long)]
    pub snapshot_every: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// auto | heterogeneous | homogeneous_tumor | healthy
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also emit a log-scale SVG plot of the norms.
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub verify_lyapunov: bool,
    #[arg(long)]
    pub verify_sandwich: bool,
}

#[derive(Args, Debug, Default)]
pub struct ScanArgs {
    /// JSON scan configuration; flags override individual fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long = "D", alias = "diffusion")]
    pub diffusion: Option<f64>,
    #[arg(long)]
    pub d1_min: Option<f64>,
    #[arg(long)]
    pub d1_max: Option<f64>,
    #[arg(long)]
    pub d1_count: Option<usize>,
    #[arg(long)]
    pub d2_min: Option<f64>,
    #[arg(long)]
    pub d2_max: Option<f64>,
    #[arg(long)]
    pub d2_count: Option<usize>,
    /// classify | certificate | simulate
    #[arg(long)]
    pub action: Option<String>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: SimulateArgs,
}
