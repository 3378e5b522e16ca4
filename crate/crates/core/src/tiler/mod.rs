//! Fixed-input-size tiled processing.
//!
//! An image is mirror-padded on the right and bottom until
//! `(padded - tile)` is a multiple of `stride`, cut into `tile x tile`
//! tiles in row-major order, processed independently and recombined by
//! window-weighted averaging. With `stride == tile` and a rectangular
//! window this is plain crop-and-concatenate; overlapping tiles with a
//! tapered window hide the per-tile discontinuities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::imagecore::{mirror_index, Image, ImageError};

mod seam;
pub mod synthetic;

pub use seam::seam_energy;

pub type TileOpError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, thiserror::Error)]
pub enum TileError {
    #[error("tile size must be >= 1")]
    ZeroTile,
    #[error("stride must be in 1..={tile}, got {stride}")]
    BadStride { stride: usize, tile: usize },
    #[error("overlap {overlap} must be smaller than tile {tile}")]
    OverlapTooLarge { overlap: usize, tile: usize },
    #[error("expected {expected} tiles, got {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("tile {index} is {found:?}, expected {expected:?}")]
    TileShape {
        index: usize,
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    #[error("seam pitch {pitch} out of range for {width}x{height}")]
    PitchOutOfRange {
        pitch: usize,
        width: usize,
        height: usize,
    },
    #[error("tile operation failed: {0}")]
    Op(#[source] TileOpError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Blend window applied to every tile before normalization.
///
/// Tapered windows ramp over the overlap band only and are flat elsewhere,
/// so with `overlap == 0` all three degenerate to the rectangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Rect,
    Linear,
    #[default]
    Hann,
}

impl std::str::FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rect" => Ok(Window::Rect),
            "linear" => Ok(Window::Linear),
            "hann" => Ok(Window::Hann),
            other => Err(format!("unknown window {other:?} (rect|linear|hann)")),
        }
    }
}

impl Window {
    /// 1-D profile of length `tile`, strictly positive.
    pub fn profile(self, tile: usize, overlap: usize) -> Vec<f64> {
        (0..tile)
            .map(|i| {
                if overlap == 0 || self == Window::Rect {
                    return 1.0;
                }
                let rise = (i as f64 + 0.5) / overlap as f64;
                let fall = (tile as f64 - i as f64 - 0.5) / overlap as f64;
                let t = rise.min(fall).min(1.0);
                match self {
                    Window::Linear => t,
                    Window::Hann => {
                        let s = libm::sin(std::f64::consts::FRAC_PI_2 * t);
                        s * s
                    }
                    Window::Rect => unreachable!(),
                }
            })
            .collect()
    }
}

/// Anything that maps a `tile x tile` image to another of the same size.
pub trait TileOp: Sync {
    fn apply(&self, tile: &Image) -> Result<Image, TileOpError>;
}

impl<F> TileOp for F
where
    F: Fn(&Image) -> Result<Image, TileOpError> + Sync,
{
    fn apply(&self, tile: &Image) -> Result<Image, TileOpError> {
        self(tile)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileGrid {
    pub tile: usize,
    pub stride: usize,
    pub cols: usize,
    pub rows: usize,
    /// Top-left corner of each tile in padded coordinates, row-major.
    pub origins: Vec<(usize, usize)>,
    pub padded: (usize, usize),
    pub original: (usize, usize),
    pub channels: usize,
    pub window_kind: Window,
    /// `tile * tile` blend weights, row-major.
    pub window: Vec<f64>,
}

fn padded_len(n: usize, tile: usize, stride: usize) -> usize {
    if n <= tile {
        tile
    } else {
        tile + (n - tile).div_ceil(stride) * stride
    }
}

impl TileGrid {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        tile: usize,
        stride: usize,
        window: Window,
    ) -> Result<Self, TileError> {
        if tile == 0 {
            return Err(TileError::ZeroTile);
        }
        if stride == 0 || stride > tile {
            return Err(TileError::BadStride { stride, tile });
        }
        let pw = padded_len(width, tile, stride);
        let ph = padded_len(height, tile, stride);
        let cols = (pw - tile) / stride + 1;
        let rows = (ph - tile) / stride + 1;
        let origins = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (c * stride, r * stride)))
            .collect();
        let profile = window.profile(tile, tile - stride);
        let window_weights = profile
            .iter()
            .flat_map(|wy| profile.iter().map(move |wx| wx * wy))
            .collect();
        Ok(Self {
            tile,
            stride,
            cols,
            rows,
            origins,
            padded: (pw, ph),
            original: (width, height),
            channels,
            window_kind: window,
            window: window_weights,
        })
    }

    pub fn overlap(&self) -> usize {
        self.tile - self.stride
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    /// Raw (unnormalized) window weight summed over all tiles, per padded pixel.
    pub fn weight_sum(&self) -> Vec<f64> {
        let (pw, ph) = self.padded;
        let mut sum = vec![0.0; pw * ph];
        for &(ox, oy) in &self.origins {
            for ty in 0..self.tile {
                for tx in 0..self.tile {
                    sum[(oy + ty) * pw + ox + tx] += self.window[ty * self.tile + tx];
                }
            }
        }
        sum
    }

    /// Sum of normalized weights per padded pixel; 1 everywhere when the
    /// tiles cover the padded image.
    pub fn normalized_weight_sum(&self) -> Vec<f64> {
        let raw = self.weight_sum();
        let (pw, ph) = self.padded;
        let mut sum = vec![0.0; pw * ph];
        for &(ox, oy) in &self.origins {
            for ty in 0..self.tile {
                for tx in 0..self.tile {
                    let p = (oy + ty) * pw + ox + tx;
                    sum[p] += self.window[ty * self.tile + tx] / raw[p];
                }
            }
        }
        sum
    }
}

pub fn split_tiles(
    img: &Image,
    tile: usize,
    stride: usize,
    window: Window,
) -> Result<(TileGrid, Vec<Image>), TileError> {
    let (w, h) = img.dims();
    let ch = img.channels();
    let grid = TileGrid::new(w, h, ch, tile, stride, window)?;
    let tiles = grid
        .origins
        .iter()
        .map(|&(ox, oy)| {
            Image::from_fn(tile, tile, ch, |x, y, c| {
                let sx = mirror_index((ox + x) as isize, w);
                let sy = mirror_index((oy + y) as isize, h);
                img.get(sx, sy, c)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((grid, tiles))
}

/// Window-weighted recombination, cropped to the original size.
///
/// Each output sample is `first + sum(w_i * (v_i - first)) / sum(w_i)`
/// where `first` is the first tile's sample at that pixel: the weighted mean
/// written so that agreeing tiles reproduce their common value bit-exactly.
pub fn merge_tiles(grid: &TileGrid, tiles: &[Image]) -> Result<Image, TileError> {
    if tiles.len() != grid.len() {
        return Err(TileError::CountMismatch {
            expected: grid.len(),
            found: tiles.len(),
        });
    }
    let expected = (grid.tile, grid.tile, grid.channels);
    for (index, t) in tiles.iter().enumerate() {
        let found = (t.width(), t.height(), t.channels());
        if found != expected {
            return Err(TileError::TileShape {
                index,
                expected,
                found,
            });
        }
    }
    let (w, h) = grid.original;
    let ch = grid.channels;
    let n = w * h * ch;
    let mut first = vec![f64::NAN; n];
    let mut acc = vec![0.0; n];
    let mut wsum = vec![0.0; w * h];
    for (t, &(ox, oy)) in tiles.iter().zip(&grid.origins) {
        for ty in 0..grid.tile {
            let y = oy + ty;
            if y >= h {
                break;
            }
            for tx in 0..grid.tile {
                let x = ox + tx;
                if x >= w {
                    break;
                }
                let wt = grid.window[ty * grid.tile + tx];
                let p = y * w + x;
                wsum[p] += wt;
                for c in 0..ch {
                    let v = t.get(tx, ty, c);
                    let i = p * ch + c;
                    if first[i].is_nan() {
                        first[i] = v;
                    } else {
                        acc[i] += wt * (v - first[i]);
                    }
                }
            }
        }
    }
    let data = (0..n).map(|i| first[i] + acc[i] / wsum[i / ch]).collect();
    Ok(Image::new(w, h, ch, data)?)
}

/// Split, apply `op` to every tile (in parallel), merge.
pub fn process_tiled<O: TileOp + ?Sized>(
    img: &Image,
    op: &O,
    tile: usize,
    overlap: usize,
    window: Window,
) -> Result<Image, TileError> {
    if tile == 0 {
        return Err(TileError::ZeroTile);
    }
    if overlap >= tile {
        return Err(TileError::OverlapTooLarge { overlap, tile });
    }
    let (grid, tiles) = split_tiles(img, tile, tile - overlap, window)?;
    let processed = tiles
        .par_iter()
        .map(|t| op.apply(t).map_err(TileError::Op))
        .collect::<Result<Vec<_>, _>>()?;
    merge_tiles(&grid, &processed)
}
