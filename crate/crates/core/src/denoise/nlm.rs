use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DenoiseError;
use crate::imagecore::{mirror_index, rgb_to_ycbcr, ycbcr_delta_to_rgb, Image};

/// Parameters of the colored non-local means filter.
///
/// Strengths live in the `[0, 1]` sample domain: an 8-bit strength of 3
/// is `3.0 / 255.0` here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NlmParams {
    pub h_luma: f64,
    pub h_chroma: f64,
    pub template_window: usize,
    pub search_window: usize,
    /// Noise floor subtracted from patch distances (`2 * sigma0^2`).
    pub sigma0: f64,
}

impl Default for NlmParams {
    fn default() -> Self {
        Self {
            h_luma: 3.0 / 255.0,
            h_chroma: 3.0 / 255.0,
            template_window: 7,
            search_window: 21,
            sigma0: 0.0,
        }
    }
}

impl NlmParams {
    pub fn validate(&self) -> Result<(), DenoiseError> {
        let bad = |msg: String| Err(DenoiseError::InvalidParams(msg));
        if !(self.h_luma > 0.0) || !(self.h_chroma > 0.0) {
            return bad(format!(
                "filter strengths must be > 0 (h_luma={}, h_chroma={})",
                self.h_luma, self.h_chroma
            ));
        }
        if !(self.sigma0 >= 0.0) {
            return bad(format!("sigma0 must be >= 0, got {}", self.sigma0));
        }
        for (name, v) in [
            ("template_window", self.template_window),
            ("search_window", self.search_window),
        ] {
            if v == 0 || v % 2 == 0 {
                return bad(format!("{name} must be odd and >= 1, got {v}"));
            }
        }
        if self.search_window < self.template_window {
            return bad(format!(
                "search_window {} smaller than template_window {}",
                self.search_window, self.template_window
            ));
        }
        Ok(())
    }
}

/// Fast NLM for color images: filter the luma plane with `h_luma` and both
/// chroma planes with `h_chroma` in full-range YCbCr, then map the change
/// back to RGB.
pub fn nlm_denoise_colored(img: &Image, params: &NlmParams) -> Result<Image, DenoiseError> {
    params.validate()?;
    if img.channels() != 3 {
        return Err(DenoiseError::ChannelCount(img.channels()));
    }
    let (w, h) = img.dims();
    if w < params.template_window || h < params.template_window {
        return Err(DenoiseError::TooSmall {
            width: w,
            height: h,
            template: params.template_window,
        });
    }
    let ycc = rgb_to_ycbcr(img)?;
    let strengths = [params.h_luma, params.h_chroma, params.h_chroma];
    let planes: Vec<Vec<f64>> = ycc
        .planes()
        .into_par_iter()
        .zip(strengths)
        .map(|(plane, strength)| nlm_plane(&plane, w, h, strength, params))
        .collect();
    let filtered = Image::from_planes(w, h, &planes)?;
    Ok(ycbcr_delta_to_rgb(img, &ycc, &filtered)?)
}

/// Single-plane NLM.
///
/// Works offset by offset over the search window: for a fixed offset `o`
/// the squared difference field between the plane and its shifted copy is
/// box-summed over the template to give every pixel's patch distance at
/// once. Rows are independent and evaluated in parallel; within a row the
/// offsets are accumulated in a fixed order, so the result does not depend
/// on scheduling. The output is `v_p + sum w (v_q - v_p) / sum w`, which
/// keeps flat regions exactly flat.
pub fn nlm_plane(plane: &[f64], w: usize, h: usize, strength: f64, params: &NlmParams) -> Vec<f64> {
    let r = params.template_window / 2;
    let big_r = params.search_window / 2;
    let pad = r + big_r;
    let pw = w + 2 * pad;
    let ph = h + 2 * pad;
    let padded: Vec<f64> = (0..ph)
        .flat_map(|y| {
            let sy = mirror_index(y as isize - pad as isize, h);
            (0..pw).map(move |x| plane[sy * w + mirror_index(x as isize - pad as isize, w)])
        })
        .collect();
    let tsize = params.template_window;
    let inv_area = 1.0 / (tsize * tsize) as f64;
    let inv_h2 = 1.0 / (strength * strength);
    let floor = 2.0 * params.sigma0 * params.sigma0;
    let span = w + 2 * r;

    let rows: Vec<Vec<f64>> = (0..h)
        .into_par_iter()
        .map(|y| {
            let mut acc = vec![0.0; w];
            let mut wsum = vec![0.0; w];
            let mut col = vec![0.0; span];
            for dy in -(big_r as isize)..=big_r as isize {
                for dx in -(big_r as isize)..=big_r as isize {
                    // column sums of the squared difference over the template rows
                    for (i, c) in col.iter_mut().enumerate() {
                        let px = pad - r + i;
                        let qx = (px as isize + dx) as usize;
                        let mut s = 0.0;
                        for k in 0..tsize {
                            let py = y + pad - r + k;
                            let qy = (py as isize + dy) as usize;
                            let d = padded[py * pw + px] - padded[qy * pw + qx];
                            s += d * d;
                        }
                        *c = s;
                    }
                    for x in 0..w {
                        let dist: f64 = col[x..x + tsize].iter().sum::<f64>() * inv_area;
                        let wt = libm::exp(-(dist - floor).max(0.0) * inv_h2);
                        let p = (y + pad) * pw + x + pad;
                        let q = ((y + pad) as isize + dy) as usize * pw
                            + ((x + pad) as isize + dx) as usize;
                        acc[x] += wt * (padded[q] - padded[p]);
                        wsum[x] += wt;
                    }
                }
            }
            (0..w)
                .map(|x| plane[y * w + x] + acc[x] / wsum[x])
                .collect()
        })
        .collect();
    rows.concat()
}
