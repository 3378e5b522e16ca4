use super::ImageError;

/// Planar-interleaved float raster with samples in `[0, 1]`.
///
/// Samples are stored row-major with channels interleaved
/// (`data[(y * width + x) * channels + c]`). Every constructor clamps into
/// the unit interval and rejects non-finite input, so an `Image` in hand is
/// always a valid, displayable picture.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

/// Unclamped raster used for intermediate arithmetic (diffusion states,
/// noise fields). Same layout as [`Image`].
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

fn check_shape(width: usize, height: usize, channels: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::InvalidDimensions { width, height });
    }
    if channels != 1 && channels != 3 {
        return Err(ImageError::ChannelCount {
            expected: 3,
            found: channels,
        });
    }
    Ok(())
}

impl Image {
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Result<Self, ImageError> {
        check_shape(width, height, channels)?;
        if data.len() != width * height * channels {
            return Err(ImageError::DataLength {
                expected: width * height * channels,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(ImageError::NonFinite);
        }
        let data = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(
        width: usize,
        height: usize,
        channels: usize,
        value: f64,
    ) -> Result<Self, ImageError> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds an image by evaluating `f(x, y, channel)` for every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self, ImageError> {
        check_shape(width, height, channels)?;
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, channels, data)
    }

    /// Reassembles an image from separate channel planes.
    pub fn from_planes(width: usize, height: usize, planes: &[Vec<f64>]) -> Result<Self, ImageError> {
        check_shape(width, height, planes.len())?;
        let n = width * height;
        if let Some(bad) = planes.iter().find(|p| p.len() != n) {
            return Err(ImageError::DataLength {
                expected: n,
                found: bad.len(),
            });
        }
        let channels = planes.len();
        let mut data = Vec::with_capacity(n * channels);
        for i in 0..n {
            for plane in planes {
                data.push(plane[i]);
            }
        }
        Self::new(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Copy of one channel as a `width * height` plane.
    pub fn plane(&self, c: usize) -> Vec<f64> {
        self.data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    pub fn planes(&self) -> Vec<Vec<f64>> {
        (0..self.channels).map(|c| self.plane(c)).collect()
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn to_raster(&self) -> Raster {
        Raster {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.clone(),
        }
    }

    /// Single-channel images are replicated to RGB; RGB is returned as is.
    pub fn to_rgb(&self) -> Image {
        if self.channels == 3 {
            return self.clone();
        }
        let data = self.data.iter().flat_map(|&v| [v, v, v]).collect();
        Image {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        }
    }

    /// Per-sample map; the result is clamped like any other constructor.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Image, ImageError> {
        Image::new(
            self.width,
            self.height,
            self.channels,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Samples quantized to 8 bits with `round(v * 255)`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| quantize(v)).collect()
    }

    pub fn from_u8(
        width: usize,
        height: usize,
        channels: usize,
        bytes: &[u8],
    ) -> Result<Image, ImageError> {
        Image::new(
            width,
            height,
            channels,
            bytes.iter().map(|&b| f64::from(b) / 255.0).collect(),
        )
    }
}

#[inline]
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

impl Raster {
    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        }
    }

    pub fn from_parts(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Result<Self, ImageError> {
        if data.len() != width * height * channels {
            return Err(ImageError::DataLength {
                expected: width * height * channels,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn same_shape(&self, other: &Raster) -> bool {
        self.shape() == other.shape()
    }

    /// The one place an unclamped raster becomes an [`Image`].
    pub fn clamp_to_image(&self) -> Result<Image, ImageError> {
        Image::new(self.width, self.height, self.channels, self.data.clone())
    }

    pub fn max_abs_diff(&self, other: &Raster) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `a * self + b * other`, elementwise.
    pub fn axpby(&self, a: f64, other: &Raster, b: f64) -> Raster {
        Raster {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Raster {
        Raster {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|x| a * x).collect(),
        }
    }
}

impl From<&Image> for Raster {
    fn from(img: &Image) -> Self {
        img.to_raster()
    }
}

/// Symmetric (edge-repeating) reflection of an arbitrary index into `0..n`.
///
/// `-1 -> 0`, `-2 -> 1`, `n -> n - 1`; periodic with period `2n`, so any
/// offset is valid.
#[inline]
pub fn mirror_index(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}

#[inline]
pub fn wrap_index(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}
