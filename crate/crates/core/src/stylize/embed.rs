use super::{require_rgb, StylizeError};
use crate::diffusion::StyleEmbedding;
use crate::imagecore::{luma, sobel, Border, Image};

/// 8 x 8 x 8 joint RGB histogram.
pub const COLOR_BINS: usize = 512;
/// 10-degree orientation bins centred on multiples of 10 degrees.
pub const ORIENTATION_BINS: usize = 36;
pub const EMBED_DIM: usize = COLOR_BINS + ORIENTATION_BINS;

fn color_bin(v: f64) -> usize {
    ((v * 8.0).floor() as usize).min(7)
}

fn l1_normalize(block: &mut [f64]) {
    let s: f64 = block.iter().sum();
    if s > 0.0 {
        block.iter_mut().for_each(|v| *v /= s);
    }
}

/// Position-free color and texture descriptor: a joint RGB histogram and a
/// magnitude-weighted gradient orientation histogram, each L1-normalized,
/// then L2-normalized together. Gradients use wraparound borders so
/// circular shifts of the image leave the descriptor unchanged.
pub fn descriptor(img: &Image) -> Result<Vec<f64>, StylizeError> {
    require_rgb(img)?;
    let mut out = vec![0.0; EMBED_DIM];
    for p in img.data().chunks_exact(3) {
        out[color_bin(p[0]) * 64 + color_bin(p[1]) * 8 + color_bin(p[2])] += 1.0;
    }
    let (w, h) = img.dims();
    let grad = sobel(&luma(img), w, h, Border::Wrap);
    let mag = grad.magnitude();
    for i in 0..mag.len() {
        if mag[i] > 0.0 {
            let deg = libm::atan2(grad.gy[i], grad.gx[i]).to_degrees();
            let bin = ((deg + 5.0) / 10.0).floor().rem_euclid(ORIENTATION_BINS as f64) as usize;
            out[COLOR_BINS + bin.min(ORIENTATION_BINS - 1)] += mag[i];
        }
    }
    let (color, orient) = out.split_at_mut(COLOR_BINS);
    l1_normalize(color);
    l1_normalize(orient);
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.iter_mut().for_each(|v| *v /= norm);
    Ok(out)
}

/// Style conditioning vector for the diffusion sampler.
pub fn style_embed(style: &Image) -> Result<StyleEmbedding, StylizeError> {
    Ok(StyleEmbedding::new(descriptor(style)?)?)
}
