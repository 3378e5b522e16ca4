//! Independent brute-force reference implementations used only by tests.
//!
//! Each oracle is written for clarity over speed and deliberately avoids
//! the code paths of the implementation it checks.
#![allow(dead_code)]

use rayon::prelude::*;
use toonflow::denoise::NlmParams;
use toonflow::imagecore::{mirror_index, rgb_to_ycbcr, ycbcr_to_rgb, Image, Rng};
use toonflow::stylize::extract_features;

/// Plain quadruple-loop NLM on one plane: explicit patch distance for
/// every (pixel, candidate) pair, weighted mean `sum w v / sum w`. Rows are
/// spread over threads only to keep the runtime reasonable.
pub fn nlm_plane_bruteforce(plane: &[f64], w: usize, h: usize, strength: f64, p: &NlmParams) -> Vec<f64> {
    let r = (p.template_window / 2) as isize;
    let big_r = (p.search_window / 2) as isize;
    let at = |x: isize, y: isize| plane[mirror_index(y, h) * w + mirror_index(x, w)];
    let area = (p.template_window * p.template_window) as f64;
    let rows: Vec<Vec<f64>> = (0..h as isize).into_par_iter().map(|y| {
        let mut row = vec![0.0; w];
        for x in 0..w as isize {
            let mut num = 0.0;
            let mut den = 0.0;
            for qy in y - big_r..=y + big_r {
                for qx in x - big_r..=x + big_r {
                    let mut d2 = 0.0;
                    for ky in -r..=r {
                        for kx in -r..=r {
                            let d = at(x + kx, y + ky) - at(qx + kx, qy + ky);
                            d2 += d * d;
                        }
                    }
                    d2 /= area;
                    let wt = (-(d2 - 2.0 * p.sigma0 * p.sigma0).max(0.0) / (strength * strength)).exp();
                    num += wt * at(qx, qy);
                    den += wt;
                }
            }
            row[x as usize] = num / den;
        }
        row
    }).collect();
    rows.concat()
}

pub fn nlm_colored_bruteforce(img: &Image, p: &NlmParams) -> Image {
    let (w, h) = img.dims();
    let ycc = rgb_to_ycbcr(img).unwrap();
    let strengths = [p.h_luma, p.h_chroma, p.h_chroma];
    let planes: Vec<Vec<f64>> = (0..3)
        .map(|c| nlm_plane_bruteforce(&ycc.plane(c), w, h, strengths[c], p))
        .collect();
    ycbcr_to_rgb(&Image::from_planes(w, h, &planes).unwrap()).unwrap()
}

/// 64x64 RGB scene made of flat regions: background, a rectangle, a disc.
pub fn piecewise_constant_fixture() -> Image {
    Image::from_fn(64, 64, 3, |x, y, c| {
        let (fx, fy) = (x as f64 - 44.0, y as f64 - 44.0);
        if fx * fx + fy * fy <= 144.0 {
            [0.3, 0.8, 0.4][c]
        } else if (8..40).contains(&x) && (10..30).contains(&y) {
            [0.8, 0.6, 0.2][c]
        } else {
            [0.2, 0.3, 0.5][c]
        }
    })
    .unwrap()
}

pub fn random_image(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = Rng::new(seed);
    Image::from_fn(w, h, 3, |_, _, _| rng.next_f64()).unwrap()
}

/// alpha_bar[t] for the linear schedule via a log-domain sum, an
/// algebraically different route from a running product.
pub fn linear_alpha_bar(t_total: usize, beta_start: f64, beta_end: f64, t: usize) -> f64 {
    let beta = |s: usize| {
        if t_total == 1 {
            beta_start
        } else {
            beta_start + (beta_end - beta_start) * (s - 1) as f64 / (t_total - 1) as f64
        }
    };
    (1..=t).map(|s| (-beta(s)).ln_1p()).sum::<f64>().exp()
}

/// Denoising fixture shared by the NLM tests: flat scene plus Gaussian
/// noise of sigma 25/255, seed 2024.
pub fn nlm_gain_fixture() -> (Image, Image) {
    let clean = piecewise_constant_fixture();
    let noisy = toonflow::imagecore::add_gaussian_noise(&clean, 25.0 / 255.0, &mut Rng::new(2024)).unwrap();
    (clean, noisy)
}

/// Strengths used on the gain fixture.
pub fn nlm_gain_params() -> NlmParams {
    NlmParams { h_luma: 15.0 / 255.0, h_chroma: 15.0 / 255.0, ..Default::default() }
}

/// PSNR gain of the brute-force oracle on the gain fixture, frozen from an
/// oracle run (dB).
pub const NLM_ORACLE_GAIN_DB: f64 = 10.0959;

/// Direct attention math: explicit feature concatenation, a dense
/// attention matrix with a textbook softmax, then `M = A V`,
/// `S^2 = A V^2 - M^2` and the per-point renormalization of the content
/// planes. Returns `(mean, variance, output)`.
pub fn adaattn_bruteforce(content: &Image, style: &Image, levels: usize, temperature: f64) -> (Vec<f64>, Vec<f64>, Image) {
    fn standardize(v: &[f64]) -> Vec<f64> {
        let n = v.len() as f64;
        let mu = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n).sqrt();
        if sd < 1e-12 {
            vec![0.0; v.len()]
        } else {
            v.iter().map(|x| (x - mu) / sd).collect()
        }
    }
    fn feats(img: &Image, levels: usize) -> Vec<Vec<f64>> {
        let pyr = extract_features(img, levels).unwrap();
        let (w, h) = img.dims();
        let mut per_pixel = vec![Vec::new(); w * h];
        for (l, level) in pyr.levels.iter().enumerate() {
            for ch in &level.channels {
                let z = standardize(ch);
                for y in 0..h {
                    for x in 0..w {
                        let lx = ((x as f64 / (1u64 << l) as f64).floor() as usize).min(level.width - 1);
                        let ly = ((y as f64 / (1u64 << l) as f64).floor() as usize).min(level.height - 1);
                        per_pixel[y * w + x].push(z[ly * level.width + lx]);
                    }
                }
            }
        }
        per_pixel
    }
    let q = feats(content, levels);
    let k = feats(style, levels);
    let cy = rgb_to_ycbcr(content).unwrap();
    let sy = rgb_to_ycbcr(style).unwrap();
    let v: Vec<[f64; 3]> = sy.data().chunks(3).map(|p| [p[0], p[1], p[2]]).collect();

    let mut a = vec![vec![0.0; k.len()]; q.len()];
    for (i, qi) in q.iter().enumerate() {
        let logits: Vec<f64> = k.iter().map(|kj| qi.iter().zip(kj).map(|(x, y)| x * y).sum::<f64>() / temperature).collect();
        let mx = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = logits.iter().map(|l| (l - mx).exp()).sum();
        for j in 0..k.len() {
            a[i][j] = (logits[j] - mx).exp() / z;
        }
    }
    let mut mean = Vec::new();
    let mut var = Vec::new();
    for row in &a {
        for c in 0..3 {
            let m: f64 = row.iter().zip(&v).map(|(w, vj)| w * vj[c]).sum();
            let m2: f64 = row.iter().zip(&v).map(|(w, vj)| w * vj[c] * vj[c]).sum();
            mean.push(m);
            var.push(m2 - m * m);
        }
    }
    let (w, h) = content.dims();
    let planes: Vec<Vec<f64>> = (0..3).map(|c| standardize(&cy.plane(c))).collect();
    let mut ycc = Vec::new();
    for i in 0..w * h {
        for c in 0..3 {
            ycc.push(var[3 * i + c].max(0.0).sqrt() * planes[c][i] + mean[3 * i + c]);
        }
    }
    // back to RGB by solving the forward matrix numerically
    let fwd = [
        [0.299, 0.587, 0.114],
        [-0.299 / 1.772, -0.587 / 1.772, 0.886 / 1.772],
        [0.701 / 1.402, -0.587 / 1.402, -0.114 / 1.402],
    ];
    let rgb: Vec<f64> = ycc
        .chunks(3)
        .flat_map(|p| solve3(fwd, [p[0], p[1] - 0.5, p[2] - 0.5]))
        .collect();
    (mean, var, Image::new(w, h, 3, rgb).unwrap())
}

/// Cramer's rule on a 3x3 system.
fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let mut out = [0.0; 3];
    for col in 0..3 {
        let mut mc = m;
        for r in 0..3 {
            mc[r][col] = b[r];
        }
        out[col] = det(mc) / d;
    }
    out
}
