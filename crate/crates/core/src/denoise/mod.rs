//! Post-denoising: colored non-local means and the stage dispatcher that
//! optionally runs it through the fixed-size tiler.

mod nlm;
mod stage;

pub use nlm::{nlm_denoise_colored, nlm_plane, NlmParams};
pub use stage::{denoise_stage, DenoiseBackend, PostDenoise, TiledSettings};

use crate::imagecore::ImageError;
use crate::tiler::TileError;

#[derive(Debug, thiserror::Error)]
pub enum DenoiseError {
    #[error("non-local means needs a 3-channel image, got {0} channel(s)")]
    ChannelCount(usize),
    #[error("image {width}x{height} is smaller than the {template}x{template} template")]
    TooSmall {
        width: usize,
        height: usize,
        template: usize,
    },
    #[error("invalid denoise parameters: {0}")]
    InvalidParams(String),
    #[error("unknown denoise backend {0:?} (expected none, nlm or tiled-nlm)")]
    UnknownBackend(String),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Tile(#[from] TileError),
}
