use super::TileError;
use crate::imagecore::Image;

/// Excess edge response on tile-boundary lines.
///
/// For each axis, finite differences `|I(x) - I(x-1)|` (averaged over
/// channels) are split into those crossing a boundary at a multiple of
/// `pitch` and all the others. The per-axis excess is the mean boundary
/// difference minus the mean background difference; the two axes are
/// combined weighted by their number of boundary samples and the result is
/// floored at zero.
pub fn seam_energy(img: &Image, pitch: usize) -> Result<f64, TileError> {
    let (w, h) = img.dims();
    let out_of_range = || TileError::PitchOutOfRange {
        pitch,
        width: w,
        height: h,
    };
    if pitch < 2 || (pitch >= w && pitch >= h) {
        return Err(out_of_range());
    }
    let ch = img.channels();
    let diff = |x0: usize, y0: usize, x1: usize, y1: usize| -> f64 {
        (0..ch)
            .map(|c| (img.get(x1, y1, c) - img.get(x0, y0, c)).abs())
            .sum::<f64>()
            / ch as f64
    };

    // (seam sum, seam count, background sum, background count)
    let mut horiz = [0.0; 4];
    for y in 0..h {
        for x in 1..w {
            let d = diff(x - 1, y, x, y);
            let k = if x % pitch == 0 { 0 } else { 2 };
            horiz[k] += d;
            horiz[k + 1] += 1.0;
        }
    }
    let mut vert = [0.0; 4];
    for y in 1..h {
        for x in 0..w {
            let d = diff(x, y - 1, x, y);
            let k = if y % pitch == 0 { 0 } else { 2 };
            vert[k] += d;
            vert[k + 1] += 1.0;
        }
    }

    let excess = |a: &[f64; 4]| -> f64 {
        let background = if a[3] > 0.0 { a[2] / a[3] } else { 0.0 };
        a[0] / a[1] - background
    };
    let mut num = 0.0;
    let mut den = 0.0;
    for axis in [&horiz, &vert] {
        if axis[1] > 0.0 {
            num += axis[1] * excess(axis);
            den += axis[1];
        }
    }
    if den == 0.0 {
        return Err(out_of_range());
    }
    Ok((num / den).max(0.0))
}
