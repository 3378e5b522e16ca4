use rayon::prelude::*;

use super::{extract_features, require_rgb, FeaturePyramid, StylizeError};
use crate::imagecore::{rgb_to_ycbcr_pixel, ycbcr_to_rgb_pixel, Image};

/// `(x - mean) / std` over the whole plane; a flat plane maps to zeros.
pub fn instance_norm(plane: &[f64]) -> Vec<f64> {
    let n = plane.len() as f64;
    let mean = plane.iter().sum::<f64>() / n;
    let var = plane.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < 1e-12 {
        return vec![0.0; plane.len()];
    }
    plane.iter().map(|v| (v - mean) / std).collect()
}

/// Per-pixel attention vectors at full resolution: every channel of every
/// level is instance-normalized at its own scale, then sampled back at
/// level 0 by nearest neighbour. Returned row-major, `dim` values per pixel.
pub fn attention_features(pyr: &FeaturePyramid) -> (Vec<f64>, usize) {
    let base = &pyr.levels[0];
    let (w, h) = (base.width, base.height);
    let normed: Vec<Vec<Vec<f64>>> = pyr
        .levels
        .iter()
        .map(|l| l.channels.iter().map(|c| instance_norm(c)).collect())
        .collect();
    let dim: usize = normed.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(w * h * dim);
    for y in 0..h {
        for x in 0..w {
            for (l, level) in pyr.levels.iter().enumerate() {
                let lx = (x >> l).min(level.width - 1);
                let ly = (y >> l).min(level.height - 1);
                for c in &normed[l] {
                    out.push(c[ly * level.width + lx]);
                }
            }
        }
    }
    (out, dim)
}

/// Attention-weighted statistics of the style's Y/Cb/Cr planes at every
/// content pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct AttentionStats {
    pub width: usize,
    pub height: usize,
    /// `M = A V`, three values per pixel.
    pub mean: Vec<f64>,
    /// `S^2 = A (V * V) - M * M`, three values per pixel.
    pub variance: Vec<f64>,
}

fn check_inputs(content: &Image, style: &Image, levels: usize, temperature: f64) -> Result<(), StylizeError> {
    require_rgb(content)?;
    require_rgb(style)?;
    if levels == 0 {
        return Err(StylizeError::ZeroLevels);
    }
    if !(temperature > 0.0) {
        return Err(StylizeError::Temperature(temperature));
    }
    for img in [content, style] {
        let (w, h) = img.dims();
        let min = 1usize.checked_shl(levels as u32).unwrap_or(usize::MAX);
        if levels >= usize::BITS as usize || w < min || h < min {
            return Err(StylizeError::TooSmall { width: w, height: h, levels });
        }
    }
    Ok(())
}

fn ycbcr_planes(img: &Image) -> [Vec<f64>; 3] {
    let mut planes = [Vec::new(), Vec::new(), Vec::new()];
    for p in img.data().chunks_exact(3) {
        let ycc = rgb_to_ycbcr_pixel([p[0], p[1], p[2]]);
        for c in 0..3 {
            planes[c].push(ycc[c]);
        }
    }
    planes
}

/// Computes `softmax(Q K^T / temperature)` against the style's Y/Cb/Cr
/// values. A temperature of `f64::INFINITY` gives uniform attention.
pub fn adaattn_statistics(
    content: &Image,
    style: &Image,
    levels: usize,
    temperature: f64,
) -> Result<AttentionStats, StylizeError> {
    check_inputs(content, style, levels, temperature)?;
    let (q, dim) = attention_features(&extract_features(content, levels)?);
    let (k, _) = attention_features(&extract_features(style, levels)?);
    let v = ycbcr_planes(style);
    let n_keys = v[0].len();
    let (w, h) = content.dims();

    let mut mean = vec![0.0; w * h * 3];
    let mut variance = vec![0.0; w * h * 3];
    mean.par_chunks_mut(3)
        .zip(variance.par_chunks_mut(3))
        .zip(q.par_chunks(dim))
        .for_each_init(
            || vec![0.0; n_keys],
            |logits, ((m, s), qi)| {
                let mut max = f64::NEG_INFINITY;
                for (j, kj) in k.chunks_exact(dim).enumerate() {
                    let dot: f64 = qi.iter().zip(kj).map(|(a, b)| a * b).sum();
                    logits[j] = dot / temperature;
                    max = max.max(logits[j]);
                }
                let (mut z, mut m1, mut m2) = (0.0, [0.0; 3], [0.0; 3]);
                for j in 0..n_keys {
                    let e = libm::exp(logits[j] - max);
                    z += e;
                    for c in 0..3 {
                        m1[c] += e * v[c][j];
                        m2[c] += e * v[c][j] * v[c][j];
                    }
                }
                for c in 0..3 {
                    m[c] = m1[c] / z;
                    s[c] = m2[c] / z - m[c] * m[c];
                }
            },
        );
    Ok(AttentionStats { width: w, height: h, mean, variance })
}

/// Per-point adaptive normalization: every content Y/Cb/Cr plane is
/// instance-normalized and re-scaled to the attention-weighted style
/// statistics, `sqrt(max(S^2, 0)) * IN(c) + M`, then converted back to RGB.
pub fn adaattn_transfer(content: &Image, style: &Image, levels: usize, temperature: f64) -> Result<Image, StylizeError> {
    let stats = adaattn_statistics(content, style, levels, temperature)?;
    let normed: Vec<Vec<f64>> = ycbcr_planes(content).iter().map(|p| instance_norm(p)).collect();
    let mut data = Vec::with_capacity(stats.mean.len());
    for i in 0..stats.width * stats.height {
        let mut ycc = [0.0; 3];
        for c in 0..3 {
            let s = stats.variance[3 * i + c].max(0.0).sqrt();
            ycc[c] = s * normed[c][i] + stats.mean[3 * i + c];
        }
        data.extend(ycbcr_to_rgb_pixel(ycc));
    }
    Ok(Image::new(stats.width, stats.height, 3, data)?)
}
