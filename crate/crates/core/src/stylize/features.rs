use super::StylizeError;
use crate::imagecore::{box_downsample2, gaussian_blur3, luma, sobel, Border, Image};

/// Channels per level: intensity, blurred intensity, gradient magnitude,
/// cos and sin of the gradient orientation.
pub const FEATURE_CHANNELS: usize = 5;

/// One pyramid level, stored as separate planes.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMap {
    pub width: usize,
    pub height: usize,
    pub channels: Vec<Vec<f64>>,
}

impl FeatureMap {
    fn from_intensity(intensity: Vec<f64>, width: usize, height: usize) -> Self {
        let blur = gaussian_blur3(&intensity, width, height);
        let grad = sobel(&intensity, width, height, Border::Mirror);
        let mag = grad.magnitude();
        let (mut cos, mut sin) = (vec![0.0; mag.len()], vec![0.0; mag.len()]);
        for i in 0..mag.len() {
            if mag[i] > 0.0 {
                cos[i] = grad.gx[i] / mag[i];
                sin[i] = grad.gy[i] / mag[i];
            }
        }
        Self {
            width,
            height,
            channels: vec![intensity, blur, mag, cos, sin],
        }
    }

    pub fn intensity(&self) -> &[f64] {
        &self.channels[0]
    }

    pub fn gradient_magnitude(&self) -> &[f64] {
        &self.channels[2]
    }
}

/// Multiscale local statistics; level `l` is `(w >> l) x (h >> l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeaturePyramid {
    pub levels: Vec<FeatureMap>,
}

pub fn extract_features(img: &Image, levels: usize) -> Result<FeaturePyramid, StylizeError> {
    if levels == 0 {
        return Err(StylizeError::ZeroLevels);
    }
    let (w, h) = img.dims();
    if levels > usize::BITS as usize || (w >> (levels - 1)) == 0 || (h >> (levels - 1)) == 0 {
        return Err(StylizeError::TooSmall {
            width: w,
            height: h,
            levels,
        });
    }
    let mut out = Vec::with_capacity(levels);
    let (mut plane, mut lw, mut lh) = (luma(img), w, h);
    for l in 0..levels {
        if l > 0 {
            (plane, lw, lh) = box_downsample2(&plane, lw, lh);
        }
        out.push(FeatureMap::from_intensity(plane.clone(), lw, lh));
    }
    Ok(FeaturePyramid { levels: out })
}
