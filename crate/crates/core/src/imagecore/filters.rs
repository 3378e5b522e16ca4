//! Small fixed-kernel filters over single planes.

use super::{mirror_index, wrap_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Border {
    /// Symmetric reflection, edge sample repeated.
    Mirror,
    /// Periodic wraparound.
    Wrap,
}

impl Border {
    #[inline]
    fn index(self, i: isize, n: usize) -> usize {
        match self {
            Border::Mirror => mirror_index(i, n),
            Border::Wrap => wrap_index(i, n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gradient {
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
}

impl Gradient {
    pub fn magnitude(&self) -> Vec<f64> {
        self.gx
            .iter()
            .zip(&self.gy)
            .map(|(x, y)| libm::hypot(*x, *y))
            .collect()
    }
}

/// 3x3 Sobel derivatives scaled by 1/8, so a unit step yields 0.5 on
/// both columns adjacent to the edge.
pub fn sobel(plane: &[f64], w: usize, h: usize, border: Border) -> Gradient {
    let at = |x: isize, y: isize| plane[border.index(y, h) * w + border.index(x, w)];
    let mut gx = Vec::with_capacity(w * h);
    let mut gy = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let dx = (at(x + 1, y - 1) - at(x - 1, y - 1))
                + 2.0 * (at(x + 1, y) - at(x - 1, y))
                + (at(x + 1, y + 1) - at(x - 1, y + 1));
            let dy = (at(x - 1, y + 1) - at(x - 1, y - 1))
                + 2.0 * (at(x, y + 1) - at(x, y - 1))
                + (at(x + 1, y + 1) - at(x + 1, y - 1));
            gx.push(dx / 8.0);
            gy.push(dy / 8.0);
        }
    }
    Gradient { gx, gy }
}

/// Separable [1 2 1]/4 binomial blur with mirror borders.
pub fn gaussian_blur3(plane: &[f64], w: usize, h: usize) -> Vec<f64> {
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let l = plane[y * w + mirror_index(x as isize - 1, w)];
            let r = plane[y * w + mirror_index(x as isize + 1, w)];
            tmp[y * w + x] = 0.25 * l + 0.5 * plane[y * w + x] + 0.25 * r;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let up = mirror_index(y as isize - 1, h);
        let down = mirror_index(y as isize + 1, h);
        for x in 0..w {
            out[y * w + x] = 0.25 * tmp[up * w + x] + 0.5 * tmp[y * w + x] + 0.25 * tmp[down * w + x];
        }
    }
    out
}

/// 2x2 box average; odd trailing rows/columns are dropped.
pub fn box_downsample2(plane: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (nw, nh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(nw * nh);
    for y in 0..nh {
        for x in 0..nw {
            let i = 2 * y * w + 2 * x;
            out.push(0.25 * (plane[i] + plane[i + 1] + plane[i + w] + plane[i + w + 1]));
        }
    }
    (out, nw, nh)
}
