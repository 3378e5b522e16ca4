use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{nlm_denoise_colored, DenoiseError, NlmParams};
use crate::imagecore::{resize_bilinear, Image};
use crate::tiler::{process_tiled, TileOpError, Window};

/// Named post-denoise choice as it appears in configs and on the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PostDenoise {
    #[default]
    None,
    Nlm,
    TiledNlm,
}

impl FromStr for PostDenoise {
    type Err = DenoiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(PostDenoise::None),
            "nlm" => Ok(PostDenoise::Nlm),
            "tiled-nlm" | "tiled(nlm)" => Ok(PostDenoise::TiledNlm),
            other => Err(DenoiseError::UnknownBackend(other.to_string())),
        }
    }
}

/// Geometry for running a fixed-input-size denoiser tile by tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TiledSettings {
    pub tile: usize,
    pub overlap: usize,
    pub window: Window,
    /// Resize to `resize x resize` before tiling and back afterwards.
    pub resize: Option<usize>,
}

impl Default for TiledSettings {
    fn default() -> Self {
        Self {
            tile: 48,
            overlap: 16,
            window: Window::Hann,
            resize: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DenoiseBackend {
    None,
    Nlm(NlmParams),
    Tiled {
        inner: Box<DenoiseBackend>,
        tiling: TiledSettings,
    },
}

impl DenoiseBackend {
    pub fn from_choice(choice: PostDenoise, nlm: NlmParams, tiling: TiledSettings) -> Self {
        match choice {
            PostDenoise::None => DenoiseBackend::None,
            PostDenoise::Nlm => DenoiseBackend::Nlm(nlm),
            PostDenoise::TiledNlm => DenoiseBackend::Tiled {
                inner: Box::new(DenoiseBackend::Nlm(nlm)),
                tiling,
            },
        }
    }

    pub fn from_name(
        name: &str,
        nlm: NlmParams,
        tiling: TiledSettings,
    ) -> Result<Self, DenoiseError> {
        Ok(Self::from_choice(name.parse()?, nlm, tiling))
    }
}

pub fn denoise_stage(img: &Image, backend: &DenoiseBackend) -> Result<Image, DenoiseError> {
    match backend {
        DenoiseBackend::None => Ok(img.clone()),
        DenoiseBackend::Nlm(params) => nlm_denoise_colored(img, params),
        DenoiseBackend::Tiled { inner, tiling } => {
            let (w, h) = img.dims();
            let work = match tiling.resize {
                Some(side) => resize_bilinear(img, side, side)?,
                None => img.clone(),
            };
            let op = |tile: &Image| -> Result<Image, TileOpError> {
                Ok(denoise_stage(tile, inner)?)
            };
            let out = process_tiled(&work, &op, tiling.tile, tiling.overlap, tiling.window)?;
            if out.dims() == (w, h) {
                Ok(out)
            } else {
                Ok(resize_bilinear(&out, w, h)?)
            }
        }
    }
}
