use serde::{Deserialize, Serialize};

use super::{require_rgb, StylizeError};
use crate::imagecore::{luma, sobel, Border, Image};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaletteMethod {
    MedianCut,
}

/// Distinct RGB colors in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub colors: Vec<[f64; 3]>,
    pub method: PaletteMethod,
}

impl Palette {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Index of the closest color (squared RGB distance); ties go to the
    /// lowest index.
    pub fn nearest(&self, p: [f64; 3]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, c) in self.colors.iter().enumerate() {
            let d = (0..3).map(|k| (p[k] - c[k]) * (p[k] - c[k])).sum::<f64>();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }
}

#[derive(Clone, Copy)]
struct Entry {
    color: [f64; 3],
    count: usize,
}

fn cmp_color(a: &[f64; 3], b: &[f64; 3]) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

/// Widest axis of a box and its extent.
fn widest_axis(entries: &[Entry]) -> (usize, f64) {
    let mut best = (0, 0.0);
    for axis in 0..3 {
        let (lo, hi) = entries.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
            (lo.min(e.color[axis]), hi.max(e.color[axis]))
        });
        if hi - lo > best.1 {
            best = (axis, hi - lo);
        }
    }
    best
}

/// Pixel-weighted mean of a box, written as an offset from its first color
/// so a single-color box reproduces that color exactly.
fn representative(entries: &[Entry]) -> [f64; 3] {
    let first = entries[0].color;
    let total: usize = entries.iter().map(|e| e.count).sum();
    let mut out = [0.0; 3];
    for c in 0..3 {
        let acc: f64 = entries.iter().map(|e| e.count as f64 * (e.color[c] - first[c])).sum();
        out[c] = first[c] + acc / total as f64;
    }
    out
}

/// Splits at the weighted median along `axis`. Entries sharing the median
/// value stay together; both halves are non-empty when the box has extent.
fn split(mut entries: Vec<Entry>, axis: usize) -> (Vec<Entry>, Vec<Entry>) {
    entries.sort_by(|a, b| a.color[axis].total_cmp(&b.color[axis]).then(cmp_color(&a.color, &b.color)));
    let total: usize = entries.iter().map(|e| e.count).sum();
    let mut acc = 0;
    let mut median = entries[0].color[axis];
    for e in &entries {
        acc += e.count;
        if 2 * acc >= total {
            median = e.color[axis];
            break;
        }
    }
    let top = entries[entries.len() - 1].color[axis];
    let cut = if median < top {
        entries.partition_point(|e| e.color[axis] <= median)
    } else {
        entries.partition_point(|e| e.color[axis] < median)
    };
    let right = entries.split_off(cut);
    (entries, right)
}

/// Median-cut palette of at most `k` colors over the pixels of `img`.
pub fn median_cut(img: &Image, k: usize) -> Result<Palette, StylizeError> {
    require_rgb(img)?;
    if !(1..=256).contains(&k) {
        return Err(StylizeError::PaletteSize(k));
    }
    let mut pixels: Vec<[f64; 3]> = img.data().chunks_exact(3).map(|p| [p[0], p[1], p[2]]).collect();
    pixels.sort_by(cmp_color);
    let mut entries: Vec<Entry> = Vec::new();
    for p in pixels {
        match entries.last_mut() {
            Some(e) if e.color == p => e.count += 1,
            _ => entries.push(Entry { color: p, count: 1 }),
        }
    }

    let mut boxes = vec![entries];
    while boxes.len() < k {
        let mut pick: Option<(usize, usize, f64)> = None;
        for (i, b) in boxes.iter().enumerate() {
            let (axis, extent) = widest_axis(b);
            if extent > 0.0 && pick.is_none_or(|(_, _, e)| extent > e) {
                pick = Some((i, axis, extent));
            }
        }
        let Some((i, axis, _)) = pick else { break };
        let (left, right) = split(boxes.remove(i), axis);
        boxes.insert(i, right);
        boxes.insert(i, left);
    }

    let mut colors: Vec<[f64; 3]> = Vec::with_capacity(boxes.len());
    for b in &boxes {
        let c = representative(b);
        if !colors.contains(&c) {
            colors.push(c);
        }
    }
    Ok(Palette { colors, method: PaletteMethod::MedianCut })
}

/// Sobel magnitude of the luma plane scaled so its maximum is 1 (all zeros
/// for a flat image).
pub fn edge_map(img: &Image) -> Vec<f64> {
    let (w, h) = img.dims();
    let mag = sobel(&luma(img), w, h, Border::Mirror).magnitude();
    let max = mag.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        mag.iter().map(|m| m / max).collect()
    } else {
        mag
    }
}

/// Maps every pixel to its nearest palette color and darkens edges by
/// `1 - edge_strength * E`.
pub fn cartoonize_with_palette(img: &Image, palette: &Palette, edge_strength: f64) -> Result<Image, StylizeError> {
    require_rgb(img)?;
    if !(0.0..=1.0).contains(&edge_strength) {
        return Err(StylizeError::EdgeStrength(edge_strength));
    }
    if palette.is_empty() {
        return Err(StylizeError::PaletteSize(0));
    }
    let edges = (edge_strength > 0.0).then(|| edge_map(img));
    let mut data = Vec::with_capacity(img.data().len());
    for (i, p) in img.data().chunks_exact(3).enumerate() {
        let c = palette.colors[palette.nearest([p[0], p[1], p[2]])];
        match &edges {
            Some(e) => {
                let m = 1.0 - edge_strength * e[i];
                data.extend(c.iter().map(|v| v * m));
            }
            None => data.extend_from_slice(&c),
        }
    }
    Ok(Image::new(img.width(), img.height(), 3, data)?)
}

/// Flat-shaded cartoon of `img` using its own median-cut palette.
pub fn cartoonize(img: &Image, palette_size: usize, edge_strength: f64) -> Result<Image, StylizeError> {
    let palette = median_cut(img, palette_size)?;
    cartoonize_with_palette(img, &palette, edge_strength)
}
