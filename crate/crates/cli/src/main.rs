//! `synthmotion`: ingest motion files, build render manifests, demo frame
//! sampling and run the toy evaluation.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
//! data errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use synthmotion_core::augmentation::Granularity;
use synthmotion_core::sampling::SamplingKind;

use config::Config;

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "SYNTHMOTION_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "synthmotion",
    version,
    about = "Synthetic human-action data toolkit"
)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// TOML configuration file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smooth and augment a directory of motion files into a render manifest.
    Augment(AugmentArgs),
    /// Run the toy nearest-neighbor benchmark.
    Eval(EvalArgs),
    /// Print the frame indices a sampling strategy picks for a video.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Directory of `*.motion.jsonl` files.
    #[arg(long)]
    input: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    output: PathBuf,
    /// Number of evenly spaced camera azimuths.
    #[arg(long)]
    views: Option<u32>,
    #[arg(long)]
    renders_per_view: Option<usize>,
    /// Noise granularity: video, frame, keyframe or keyframe:N.
    #[arg(long)]
    noise: Option<Granularity>,
    /// Noise standard deviation; enables video-level noise if --noise is absent.
    #[arg(long)]
    sigma: Option<f64>,
    /// Blend each render with a same-class partner clip.
    #[arg(long)]
    interpolate: bool,
}

#[derive(Debug, Args)]
pub struct StrategyArgs {
    #[arg(long)]
    strategy: Option<SamplingKind>,
    /// Keep sampled frames in temporal order.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    ordered: Option<bool>,
    /// Frames per clip.
    #[arg(long)]
    frames: Option<usize>,
    /// Test-time stride between windows.
    #[arg(long)]
    stride: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Number of seeds for the paired comparisons.
    #[arg(long)]
    seeds: Option<u64>,
    #[command(flatten)]
    strategy: StrategyArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Video length in frames.
    #[arg(long = "T")]
    total: usize,
    #[command(flatten)]
    strategy: StrategyArgs,
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    match &cli.config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = load_config(&cli)?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Augment(args) => commands::augment(&args, &mut config, cli.seed, &mut out),
        Command::Eval(args) => commands::eval(&args, &mut config, cli.seed, &mut out),
        Command::Sample(args) => commands::sample(&args, &mut config, cli.seed, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
