use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toonflow::denoise::PostDenoise;
use toonflow::tiler::Window;
use toonflow::video::Smoothing;

use crate::config::PipelineConfig;

#[derive(Debug, Parser)]
#[command(name = "toonflow", version, about = "Cartoon stylization pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diffusion-driven stylization of one image
    StylizeImage(StylizeImageArgs),
    /// Frame-by-frame stylization of a Y4M file or frame directory
    StylizeVideo(StylizeVideoArgs),
    /// Median-cut palette cartoon with edge darkening
    Cartoonize(CartoonizeArgs),
    /// Attention-weighted statistics transfer baseline
    Adaattn(AdaattnArgs),
    /// Post-denoise an image (none, nlm, tiled-nlm)
    Denoise(DenoiseArgs),
    /// Embedding similarity report over matching image directories
    Evaluate(EvaluateArgs),
    /// Flicker, fidelity and seam metrics
    Metrics(MetricsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::StylizeImage(_) => "stylize-image",
            Command::StylizeVideo(_) => "stylize-video",
            Command::Cartoonize(_) => "cartoonize",
            Command::Adaattn(_) => "adaattn",
            Command::Denoise(_) => "denoise",
            Command::Evaluate(_) => "evaluate",
            Command::Metrics(_) => "metrics",
        }
    }

    pub fn config_args(&self) -> &ConfigArgs {
        match self {
            Command::StylizeImage(a) => &a.config,
            Command::StylizeVideo(a) => &a.config,
            Command::Cartoonize(a) => &a.config,
            Command::Adaattn(a) => &a.config,
            Command::Denoise(a) => &a.config,
            Command::Evaluate(a) => &a.config,
            Command::Metrics(a) => &a.config,
        }
    }
}

/// Pipeline settings; each flag overrides the same key from `--config`.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// JSON config file; flags given on the command line win
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print the merged config as JSON and exit
    #[arg(long)]
    pub dump_config: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub strength: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub palette_size: Option<usize>,
    #[arg(long)]
    pub edge_strength: Option<f64>,
    /// none | nlm | tiled-nlm
    #[arg(long)]
    pub post_denoise: Option<PostDenoise>,
    #[arg(long)]
    pub h_luma: Option<f64>,
    #[arg(long)]
    pub h_chroma: Option<f64>,
    #[arg(long)]
    pub template_window: Option<usize>,
    #[arg(long)]
    pub search_window: Option<usize>,
    #[arg(long)]
    pub tile: Option<usize>,
    #[arg(long)]
    pub overlap: Option<usize>,
    /// rect | linear | hann
    #[arg(long)]
    pub window: Option<Window>,
    /// Resize to NxN before tiling and back afterwards
    #[arg(long, value_name = "N")]
    pub resize: Option<usize>,
    /// Number of diffusion timesteps T
    #[arg(long = "schedule-t", value_name = "T")]
    pub schedule_t: Option<usize>,
    #[arg(long)]
    pub beta_start: Option<f64>,
    #[arg(long)]
    pub beta_end: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub temperature: Option<f64>,
    /// none | ema:<alpha>
    #[arg(long)]
    pub smoothing: Option<Smoothing>,
}

impl ConfigArgs {
    pub fn apply(&self, cfg: &mut PipelineConfig) {
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$flag { cfg.$($field).+ = v; })*
            };
        }
        set! {
            seed => seed,
            strength => strength,
            steps => steps,
            palette_size => palette_size,
            edge_strength => edge_strength,
            post_denoise => post_denoise,
            h_luma => nlm.h_luma,
            h_chroma => nlm.h_chroma,
            template_window => nlm.template_window,
            search_window => nlm.search_window,
            tile => tile,
            overlap => overlap,
            window => window,
            schedule_t => schedule.steps,
            beta_start => schedule.beta_start,
            beta_end => schedule.beta_end,
            levels => levels,
            temperature => temperature,
            smoothing => smoothing,
        }
        if self.resize.is_some() {
            cfg.resize = self.resize;
        }
    }
}

#[derive(Debug, Args)]
pub struct StylizeImageArgs {
    #[arg(long, required_unless_present = "dump_config")]
    pub content: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub style: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChromaArg {
    #[value(name = "444")]
    C444,
    #[value(name = "420")]
    C420,
}

/// Frame source/sink options shared by the video commands.
#[derive(Debug, Args)]
pub struct FrameArgs {
    /// File name pattern inside frame directories
    #[arg(long, default_value = "frame_%04d.png")]
    pub pattern: String,
    /// Frame rate assumed for frame directories, as NUM/DEN or NUM
    #[arg(long, default_value = "25/1")]
    pub fps: String,
}

#[derive(Debug, Args)]
pub struct StylizeVideoArgs {
    /// Y4M file or directory of numbered frames
    #[arg(long, required_unless_present = "dump_config")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub style: Option<PathBuf>,
    /// Output .y4m file or frame directory
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    /// Chroma layout of Y4M output
    #[arg(long, value_enum, default_value = "444")]
    pub chroma: ChromaArg,
    #[command(flatten)]
    pub frames: FrameArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct CartoonizeArgs {
    #[arg(long, required_unless_present = "dump_config")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct AdaattnArgs {
    #[arg(long, required_unless_present = "dump_config")]
    pub content: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub style: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[arg(long, required_unless_present = "dump_config")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmbedderArg {
    Builtin,
    Remote,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, required_unless_present = "dump_config")]
    pub generated: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub styles: Option<PathBuf>,
    #[arg(long, required_unless_present = "dump_config")]
    pub contents: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "builtin")]
    pub embedder: EmbedderArg,
    /// Base URL of the embedding service (remote embedder)
    #[arg(long, required_if_eq("embedder", "remote"))]
    pub endpoint: Option<String>,
    /// Per-request timeout in seconds (remote embedder)
    #[arg(long, default_value_t = 30.0)]
    pub timeout: f64,
    /// Method name recorded in the report
    #[arg(long, default_value = "toonflow")]
    pub method: String,
    /// Report JSON path
    #[arg(long, required_unless_present = "dump_config")]
    pub out: Option<PathBuf>,
    /// Also write the aligned text table here
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Video (Y4M or frame directory) to measure
    #[arg(long)]
    pub video: Option<PathBuf>,
    /// Report the flicker index of --video
    #[arg(long, requires = "video")]
    pub flicker: bool,
    /// Source video for the temporal consistency ratio of --video
    #[arg(long, requires = "video")]
    pub source: Option<PathBuf>,
    /// Image to measure
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Reference image for MSE/PSNR against --image
    #[arg(long, requires = "image")]
    pub reference: Option<PathBuf>,
    /// Tile pitch for the seam energy of --image
    #[arg(long, requires = "image")]
    pub seam_pitch: Option<usize>,
    #[command(flatten)]
    pub frames: FrameArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
}
