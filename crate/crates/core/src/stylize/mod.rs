//! Stylization: attention-weighted statistics transfer over hand-made
//! feature pyramids, a median-cut cartoonizer, a histogram style
//! descriptor, and the diffusion-driven image pipeline.

mod adaattn;
mod embed;
mod features;
mod palette;
mod pipeline;

pub use adaattn::{adaattn_statistics, adaattn_transfer, attention_features, instance_norm, AttentionStats};
pub use embed::{descriptor, style_embed, COLOR_BINS, EMBED_DIM, ORIENTATION_BINS};
pub use features::{extract_features, FeatureMap, FeaturePyramid, FEATURE_CHANNELS};
pub use palette::{cartoonize, cartoonize_with_palette, edge_map, median_cut, Palette, PaletteMethod};
pub use pipeline::{inst_stylize, InstConfig};

use crate::denoise::DenoiseError;
use crate::diffusion::DiffusionError;
use crate::imagecore::ImageError;

#[derive(Debug, thiserror::Error)]
pub enum StylizeError {
    #[error("{width}x{height} image is too small for {levels} pyramid level(s)")]
    TooSmall {
        width: usize,
        height: usize,
        levels: usize,
    },
    #[error("pyramid needs at least one level")]
    ZeroLevels,
    #[error("temperature must be positive, got {0}")]
    Temperature(f64),
    #[error("palette size must be between 1 and 256, got {0}")]
    PaletteSize(usize),
    #[error("edge strength must lie in [0, 1], got {0}")]
    EdgeStrength(f64),
    #[error("invalid stylization config: {0}")]
    Config(String),
    #[error("expected a 3-channel image, got {0} channel(s)")]
    ChannelCount(usize),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Diffusion(#[from] DiffusionError),
    #[error(transparent)]
    Denoise(#[from] DenoiseError),
}

pub(crate) fn require_rgb(img: &crate::imagecore::Image) -> Result<(), StylizeError> {
    match img.channels() {
        3 => Ok(()),
        c => Err(StylizeError::ChannelCount(c)),
    }
}
