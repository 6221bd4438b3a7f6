//! `isafp` command-line tool: simulate, reconstruct, evaluate and plot.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isafp::sim::NoiseSpec;
use isafp::solver::StepRule;

mod commands;
mod error;
mod render;
mod units;

use units::{parse_angle, parse_grid, parse_init, parse_noise, InitChoice};

#[derive(Parser, Debug)]
#[command(name = "isafp", version, about = "Inverse synthetic aperture Fourier ptychography")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a dual-plane dataset from a target image.
    Simulate(SimulateArgs),
    /// Recover the object and per-record shifts from a dataset.
    Reconstruct(ReconstructArgs),
    /// Compare a reconstruction with the dataset's ground truth.
    Evaluate(EvaluateArgs),
    /// Render amplitude, phase and k-space figures.
    Plot(PlotArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SceneArg {
    Satellite,
    Texture,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Target image: 8-bit grayscale PNG or raw little-endian .f32 in [0, 1].
    #[arg(long, conflicts_with = "scene")]
    pub target: Option<PathBuf>,
    /// Optional separate phase source (same formats as --target).
    #[arg(long)]
    pub phase: Option<PathBuf>,
    /// Peak target phase in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub phase_max: f64,
    /// Procedural scene instead of a target file.
    #[arg(long, value_enum)]
    pub scene: Option<SceneArg>,
    /// Rotation grid as NXxNY.
    #[arg(long, default_value = "11x11", value_parser = parse_grid)]
    pub grid: (usize, usize),
    /// Largest rotation per axis; plain numbers are radians, suffix `deg` for degrees.
    #[arg(long, value_parser = parse_angle, conflicts_with = "kmax")]
    pub theta_max: Option<f64>,
    /// Largest spectrum shift per axis in pixels, instead of --theta-max.
    #[arg(long)]
    pub kmax: Option<f64>,
    /// Grid size N.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Pupil radius in pixels. Defaults to the radius giving --overlap.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Neighboring-aperture overlap used when --radius is absent.
    #[arg(long, default_value_t = 0.54)]
    pub overlap: f64,
    /// Wavelength in meters.
    #[arg(long, default_value_t = 532e-9)]
    pub wavelength: f64,
    /// Physical target width in meters; the pixel pitch is width / N.
    #[arg(long, default_value_t = 100.0, conflicts_with = "pixel_pitch")]
    pub target_width: f64,
    /// Sample-plane pixel pitch in meters.
    #[arg(long)]
    pub pixel_pitch: Option<f64>,
    /// none, gaussian:<sigma> or poisson:<peak>.
    #[arg(long, default_value = "none", value_parser = parse_noise)]
    pub noise: NoiseSpec,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output dataset directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StepRuleArg {
    NormalizedCoverage,
    Coverage,
}

impl From<StepRuleArg> for StepRule {
    fn from(r: StepRuleArg) -> Self {
        match r {
            StepRuleArg::NormalizedCoverage => StepRule::NormalizedCoverage,
            StepRuleArg::Coverage => StepRule::Coverage,
        }
    }
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Dataset directory.
    pub dataset: PathBuf,
    /// ground-truth, pupil-support, coarse or file:<path>.
    #[arg(long, default_value = "pupil-support", value_parser = parse_init)]
    pub init: InitChoice,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// TV weight.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// Phase-sparsity weight.
    #[arg(long, default_value_t = 1e-3)]
    pub gamma: f64,
    /// Initial search radius in pixels; 0 disables the search.
    #[arg(long, default_value_t = 9)]
    pub dmax: u32,
    /// Final search radius in pixels.
    #[arg(long, default_value_t = 1)]
    pub dmin: u32,
    #[arg(long, default_value_t = 10)]
    pub search_every: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub epsilon: f64,
    /// Also enforce the pupil-plane intensities.
    #[arg(long)]
    pub pupil_constraint: bool,
    #[arg(long, value_enum, default_value_t = StepRuleArg::NormalizedCoverage)]
    pub step_rule: StepRuleArg,
    /// Grid stride of the coarse initializer.
    #[arg(long, default_value_t = 4)]
    pub coarse_stride: u32,
    /// Per-axis bound of the coarse initializer; defaults to the on-grid limit.
    #[arg(long)]
    pub coarse_bound: Option<u32>,
    /// Output result directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Result directory.
    pub result: PathBuf,
    /// Synthetic dataset holding the ground truth.
    #[arg(long, required_unless_present = "truth_result")]
    pub dataset: Option<PathBuf>,
    /// Use another result (object and corrected shifts) as the truth.
    #[arg(long, conflicts_with = "dataset")]
    pub truth_result: Option<PathBuf>,
    /// Write the JSON report here as well as printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Result directory.
    pub result: PathBuf,
    /// Dataset for the truth overlay and phase offset correction.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Leave out ground truth even when the dataset has it.
    #[arg(long)]
    pub no_truth: bool,
    /// Output directory for the PNG files.
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Reconstruct(a) => commands::reconstruct::run(a),
        Command::Evaluate(a) => commands::evaluate::run(a),
        Command::Plot(a) => commands::plot::run(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
