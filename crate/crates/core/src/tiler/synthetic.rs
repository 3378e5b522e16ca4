//! Synthetic fixtures for measuring tiling artifacts.

use super::{TileOp, TileOpError};
use crate::imagecore::{Image, Rng};

/// Square RGB image with four quadrants of distinct mean color and a mild
/// sinusoidal texture.
pub fn quadrant_fixture(size: usize) -> Image {
    const MEANS: [[f64; 3]; 4] = [
        [0.25, 0.30, 0.55],
        [0.70, 0.45, 0.30],
        [0.40, 0.65, 0.35],
        [0.80, 0.75, 0.60],
    ];
    let half = size / 2;
    Image::from_fn(size, size, 3, |x, y, c| {
        let q = usize::from(x >= half) + 2 * usize::from(y >= half);
        let texture = 0.04 * libm::sin(0.37 * x as f64 + c as f64) * libm::cos(0.23 * y as f64);
        MEANS[q][c] + texture
    })
    .expect("fixture dimensions are valid")
}

/// Image whose four quadrants are flat at distinct values.
pub fn flat_quadrants(size: usize, values: [f64; 4]) -> Image {
    let half = size / 2;
    Image::from_fn(size, size, 1, |x, y, _| {
        values[usize::from(x >= half) + 2 * usize::from(y >= half)]
    })
    .expect("fixture dimensions are valid")
}

/// Stand-in for a fixed-size restoration model with per-tile bias: adds a
/// random brightness offset to the whole tile plus small per-pixel noise.
///
/// The random stream is keyed by the seed and a hash of the tile content,
/// so the op is reentrant and independent of evaluation order.
#[derive(Clone, Debug)]
pub struct NoisyTileOp {
    pub seed: u64,
    pub bias_sigma: f64,
    pub noise_sigma: f64,
}

impl NoisyTileOp {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            bias_sigma: 0.08,
            noise_sigma: 0.01,
        }
    }
}

fn content_hash(img: &Image) -> u64 {
    // FNV-1a over the sample bit patterns
    img.data().iter().fold(0xcbf2_9ce4_8422_2325, |h, v| {
        v.to_bits()
            .to_le_bytes()
            .iter()
            .fold(h, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x0100_0000_01b3))
    })
}

impl TileOp for NoisyTileOp {
    fn apply(&self, tile: &Image) -> Result<Image, TileOpError> {
        let mut rng = Rng::fork(self.seed, content_hash(tile));
        let bias = self.bias_sigma * rng.gaussian();
        let data = tile
            .data()
            .iter()
            .map(|&v| v + bias + self.noise_sigma * rng.gaussian())
            .collect();
        Ok(Image::new(tile.width(), tile.height(), tile.channels(), data)?)
    }
}

/// Replaces every tile by its per-channel mean.
pub fn mean_fill(tile: &Image) -> Result<Image, TileOpError> {
    let ch = tile.channels();
    let n = (tile.width() * tile.height()) as f64;
    let means: Vec<f64> = (0..ch)
        .map(|c| tile.plane(c).iter().sum::<f64>() / n)
        .collect();
    Ok(Image::from_fn(tile.width(), tile.height(), ch, |_, _, c| means[c])?)
}
