use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use veda_core::filters::SurroundKind;
use veda_core::retinal::ContrastModel;

use crate::config::parse_number;

/// Uneven-light image enhancement.
#[derive(Debug, Parser)]
#[command(name = "veda", version, about)]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "VEDA_THREADS", value_name = "N")]
    pub threads: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enhance image files or directories of images.
    Enhance(EnhanceArgs),
    /// Enhance one image over a grid of (gamma, k) values.
    Sweep(SweepArgs),
    /// Compare enhanced images with references (PSNR, SSIM, LOE).
    Metrics(MetricsArgs),
}

/// Pipeline parameters; anything left unset comes from `--config`, then
/// from the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// key=value file with default settings.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Luminance exponent in (0, 1].
    #[arg(long, value_parser = parse_number)]
    pub gamma: Option<f64>,

    /// Log-domain luminance offset; accepts `ln(x)`.
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    pub k: Option<f64>,

    /// Shunting decay rate.
    #[arg(long, value_parser = parse_number)]
    pub m: Option<f64>,

    /// Shunting gain.
    #[arg(long, value_parser = parse_number)]
    pub g: Option<f64>,

    /// Comma-separated surround scales, strictly increasing.
    #[arg(long, value_parser = parse_number, value_delimiter = ',', value_name = "LIST")]
    pub sigmas: Option<Vec<f64>>,

    /// Surround filter: gaussian or wgif.
    #[arg(long)]
    pub surround: Option<SurroundKind>,

    /// Contrast model: shunting, weber, michelson or rms.
    #[arg(long)]
    pub contrast: Option<ContrastModel>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

/// Grid overrides for sweeps.
#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Comma-separated gamma values (default 0.1,...,0.9).
    #[arg(long, value_parser = parse_number, value_delimiter = ',', value_name = "LIST")]
    pub gammas: Option<Vec<f64>>,

    /// Comma-separated k values, `ln(x)` allowed (default ln(5),...,ln(55)).
    #[arg(long, value_parser = parse_number, value_delimiter = ',', value_name = "LIST",
          allow_hyphen_values = true)]
    pub ks: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct EnhanceArgs {
    /// Image files (PNG, PPM, PGM) or directories containing them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    #[command(flatten)]
    pub params: ParamArgs,

    /// Fuse with a denoised copy, weighted by the residual.
    #[arg(long, value_name = "STRENGTH", num_args = 0..=1, require_equals = true,
          value_parser = parse_number)]
    pub denoise: Option<Option<f64>>,

    /// External denoiser command; `{input}` and `{output}` are replaced by
    /// single-channel PFM paths. Implies --denoise.
    #[arg(long, value_name = "CMD")]
    pub denoiser_cmd: Option<String>,

    /// Write per-scale contrast, residual and surround planes as PFM.
    #[arg(long)]
    pub dump: bool,

    /// Reference directory; writes metrics.csv for the enhanced outputs.
    #[arg(long = "ref", value_name = "DIR")]
    pub reference: Option<PathBuf>,

    /// Run a (gamma, k) sweep per input instead of a single enhancement.
    #[arg(long)]
    pub sweep: bool,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// A single image file.
    pub input: PathBuf,

    #[command(flatten)]
    pub params: ParamArgs,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    /// Directory of enhanced images (`<stem>.veda.png` or `<stem>.<ext>`).
    pub enhanced: PathBuf,

    /// Directory of reference images, matched by stem.
    #[arg(long = "ref", value_name = "DIR")]
    pub reference: PathBuf,

    /// Directory of the original inputs for LOE (defaults to --ref).
    #[arg(long, value_name = "DIR")]
    pub input: Option<PathBuf>,

    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}
