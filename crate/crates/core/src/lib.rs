//! Cartoon stylization pipeline engine.
//!
//! Modules, bottom-up:
//!
//! - [`imagecore`]: float raster, color conversion, resampling, noise, metrics, file I/O
//! - [`denoise`]: colored non-local means and the post-denoise stage dispatcher
//! - [`tiler`]: fixed-size tiled processing with overlap blending and a seam metric
//! - [`diffusion`]: noise schedule, forward noising, DDIM sampling, stochastic inversion
//! - [`stylize`]: attention-weighted statistics transfer, palette cartoonizer, full pipeline
//! - [`video`]: Y4M and frame-directory I/O, per-frame stylization, flicker metrics
//! - [`eval`]: embedding similarity harness with builtin and remote embedders

pub mod denoise;
pub mod diffusion;
pub mod eval;
pub mod imagecore;
pub mod stylize;
pub mod tiler;
pub mod video;

pub use imagecore::{Image, ImageError, Raster, Rng};
