//! `toonflow` command-line front end. Every subcommand is a thin adapter
//! over the library; all numeric work lives in `toonflow-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use clap::error::ErrorKind;

use args::{Cli, Command};
use config::PipelineConfig;
use manifest::Manifest;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROCESSING: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {1}", path = .0.display())]
    Io(PathBuf, #[source] std::io::Error),
    #[error(transparent)]
    Image(#[from] toonflow::ImageError),
    #[error(transparent)]
    Denoise(#[from] toonflow::denoise::DenoiseError),
    #[error(transparent)]
    Stylize(#[from] toonflow::stylize::StylizeError),
    #[error(transparent)]
    Tile(#[from] toonflow::tiler::TileError),
    #[error(transparent)]
    Video(#[from] toonflow::video::VideoError),
    #[error(transparent)]
    Eval(#[from] toonflow::eval::EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_PROCESSING,
        }
    }
}

/// Config file (if any) overlaid with command-line flags.
pub fn resolve_config(cmd: &Command) -> Result<PipelineConfig, CliError> {
    let flags = cmd.config_args();
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?
        }
        None => PipelineConfig::default(),
    };
    flags.apply(&mut cfg);
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = resolve_config(cmd)?;
    let write = |out: &mut dyn Write, text: String| {
        writeln!(out, "{text}").map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
    };
    if cmd.config_args().dump_config {
        return write(out, serde_json::to_string_pretty(&cfg).expect("config serializes"));
    }
    let mut m = Manifest::new(cmd.name(), &cfg);
    match cmd {
        Command::StylizeImage(a) => commands::stylize_image(a, &mut m)?,
        Command::StylizeVideo(a) => commands::stylize_video_cmd(a, &mut m)?,
        Command::Cartoonize(a) => commands::cartoonize_cmd(a, &mut m)?,
        Command::Adaattn(a) => commands::adaattn_cmd(a, &mut m)?,
        Command::Denoise(a) => commands::denoise_cmd(a, &mut m)?,
        Command::Evaluate(a) => commands::evaluate_cmd(a, &mut m)?,
        Command::Metrics(a) => commands::metrics_cmd(a, &mut m)?,
    }
    write(out, serde_json::to_string_pretty(&m).expect("manifest serializes"))
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code: 0 ok, 1 usage error, 2 processing error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{e}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { 0 }
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
