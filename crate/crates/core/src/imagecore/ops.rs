use super::{Image, ImageError, Rng};

/// Bilinear resampling with half-pixel-centre alignment; edge samples are
/// clamped, so every output is a convex combination of at most four inputs.
pub fn resize_bilinear(img: &Image, new_w: usize, new_h: usize) -> Result<Image, ImageError> {
    if new_w == 0 || new_h == 0 {
        return Err(ImageError::InvalidDimensions {
            width: new_w,
            height: new_h,
        });
    }
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let axis = |out: usize, inp: usize| -> Vec<(usize, usize, f64)> {
        let scale = inp as f64 / out as f64;
        (0..out)
            .map(|i| {
                let src = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (inp - 1) as f64);
                let i0 = src.floor() as usize;
                let i1 = (i0 + 1).min(inp - 1);
                (i0, i1, src - i0 as f64)
            })
            .collect()
    };
    let xs = axis(new_w, w);
    let ys = axis(new_h, h);
    // lerp in the `a + t * (b - a)` form keeps constants exact and never
    // leaves the [a, b] interval
    let lerp = |a: f64, b: f64, t: f64| a + t * (b - a);
    let mut data = Vec::with_capacity(new_w * new_h * ch);
    for &(y0, y1, fy) in &ys {
        for &(x0, x1, fx) in &xs {
            for c in 0..ch {
                let top = lerp(img.get(x0, y0, c), img.get(x1, y0, c), fx);
                let bot = lerp(img.get(x0, y1, c), img.get(x1, y1, c), fx);
                data.push(lerp(top, bot, fy));
            }
        }
    }
    Image::new(new_w, new_h, ch, data)
}

/// `clamp(img + sigma * N(0, 1))` per sample, drawing from `rng` in raster order.
pub fn add_gaussian_noise(img: &Image, sigma: f64, rng: &mut Rng) -> Result<Image, ImageError> {
    if !(sigma >= 0.0) {
        return Err(ImageError::NegativeSigma(sigma));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let data = img
        .data()
        .iter()
        .map(|&v| v + sigma * rng.gaussian())
        .collect();
    Image::new(img.width(), img.height(), img.channels(), data)
}

fn check_same(a: &Image, b: &Image) -> Result<(), ImageError> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(ImageError::ShapeMismatch {
            a: (a.width(), a.height(), a.channels()),
            b: (b.width(), b.height(), b.channels()),
        })
    }
}

pub fn mse(a: &Image, b: &Image) -> Result<f64, ImageError> {
    check_same(a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio for unit peak. Identical images give `+inf`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64, ImageError> {
    let m = mse(a, b)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * libm::log10(m)
    })
}

// Full-range BT.601 (JFIF) coefficients.
const KR: f64 = 0.299;
const KG: f64 = 0.587;
const KB: f64 = 0.114;

#[inline]
fn forward(r: f64, g: f64, b: f64) -> [f64; 3] {
    let y = KR * r + KG * g + KB * b;
    let cb = 0.5 + (b - y) / (2.0 * (1.0 - KB));
    let cr = 0.5 + (r - y) / (2.0 * (1.0 - KR));
    [y, cb, cr]
}

/// Linear part of the inverse transform (offsets removed).
#[inline]
fn inverse_linear(y: f64, cb: f64, cr: f64) -> [f64; 3] {
    let r = y + 2.0 * (1.0 - KR) * cr;
    let b = y + 2.0 * (1.0 - KB) * cb;
    let g = (y - KR * r - KB * b) / KG;
    [r, g, b]
}

/// Full-range BT.601 RGB to YCbCr on one unclamped pixel.
pub fn rgb_to_ycbcr_pixel(p: [f64; 3]) -> [f64; 3] {
    forward(p[0], p[1], p[2])
}

/// Inverse of [`rgb_to_ycbcr_pixel`]; no clamping.
pub fn ycbcr_to_rgb_pixel(p: [f64; 3]) -> [f64; 3] {
    inverse_linear(p[0], p[1] - 0.5, p[2] - 0.5)
}

fn require_rgb(img: &Image) -> Result<(), ImageError> {
    if img.channels() == 3 {
        Ok(())
    } else {
        Err(ImageError::ChannelCount {
            expected: 3,
            found: img.channels(),
        })
    }
}

pub fn rgb_to_ycbcr(img: &Image) -> Result<Image, ImageError> {
    require_rgb(img)?;
    let data = img
        .data()
        .chunks_exact(3)
        .flat_map(|p| forward(p[0], p[1], p[2]))
        .collect();
    Image::new(img.width(), img.height(), 3, data)
}

pub fn ycbcr_to_rgb(img: &Image) -> Result<Image, ImageError> {
    require_rgb(img)?;
    let data = img
        .data()
        .chunks_exact(3)
        .flat_map(|p| inverse_linear(p[0], p[1] - 0.5, p[2] - 0.5))
        .collect();
    Image::new(img.width(), img.height(), 3, data)
}

/// Applies a YCbCr-space change to an RGB image: `rgb + M^-1 * (after - before)`.
///
/// Equal to `ycbcr_to_rgb(after)` up to rounding, but exact wherever the
/// change is zero.
pub fn ycbcr_delta_to_rgb(rgb: &Image, before: &Image, after: &Image) -> Result<Image, ImageError> {
    require_rgb(rgb)?;
    check_same(rgb, before)?;
    check_same(rgb, after)?;
    let mut data = Vec::with_capacity(rgb.data().len());
    for ((p, b), a) in rgb
        .data()
        .chunks_exact(3)
        .zip(before.data().chunks_exact(3))
        .zip(after.data().chunks_exact(3))
    {
        let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        if d == [0.0; 3] {
            data.extend_from_slice(p);
        } else {
            let delta = inverse_linear(d[0], d[1], d[2]);
            data.extend((0..3).map(|c| p[c] + delta[c]));
        }
    }
    Image::new(rgb.width(), rgb.height(), 3, data)
}

/// BT.601 luma plane of an RGB image; single-channel input is returned as is.
pub fn luma(img: &Image) -> Vec<f64> {
    if img.channels() == 1 {
        return img.data().to_vec();
    }
    img.data()
        .chunks_exact(3)
        .map(|p| KR * p[0] + KG * p[1] + KB * p[2])
        .collect()
}
