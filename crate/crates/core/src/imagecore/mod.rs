//! Raster type, color conversion, resampling, noise, fidelity metrics and
//! still-image I/O shared by every pipeline stage.

use std::path::{Path, PathBuf};

mod filters;
mod io;
mod ops;
mod raster;
mod rng;

pub use filters::{box_downsample2, gaussian_blur3, sobel, Border, Gradient};
pub use io::{decode_image, encode_png, encode_ppm, load_image, save_image};
pub use ops::{
    add_gaussian_noise, luma, mse, psnr, resize_bilinear, rgb_to_ycbcr, rgb_to_ycbcr_pixel,
    ycbcr_delta_to_rgb, ycbcr_to_rgb, ycbcr_to_rgb_pixel,
};
pub use raster::{mirror_index, quantize, wrap_index, Image, Raster};
pub use rng::Rng;

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("file not found: {0}")]
    NotFound(PathBuf),
    #[error("unsupported image format{path}", path = fmt_path(.0))]
    Unsupported(Option<PathBuf>),
    #[error("corrupt image header{path}: {1}", path = fmt_path(.0))]
    CorruptHeader(Option<PathBuf>, String),
    #[error("corrupt image file{path}: {1}", path = fmt_path(.0))]
    Corrupt(Option<PathBuf>, String),
    #[error("i/o error on {0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("expected {expected} channels, found {found}")]
    ChannelCount { expected: usize, found: usize },
    #[error("sample buffer has {found} values, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("image shapes differ: {a:?} vs {b:?}")]
    ShapeMismatch {
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    },
    #[error("non-finite sample")]
    NonFinite,
    #[error("noise sigma must be >= 0, got {0}")]
    NegativeSigma(f64),
}

fn fmt_path(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map(|p| format!(" ({})", p.display()))
        .unwrap_or_default()
}

impl ImageError {
    pub(crate) fn with_path(self, path: &Path) -> Self {
        let p = Some(path.to_path_buf());
        match self {
            ImageError::Unsupported(None) => ImageError::Unsupported(p),
            ImageError::CorruptHeader(None, m) => ImageError::CorruptHeader(p, m),
            ImageError::Corrupt(None, m) => ImageError::Corrupt(p, m),
            other => other,
        }
    }
}
