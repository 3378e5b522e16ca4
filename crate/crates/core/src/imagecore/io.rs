//! Still-image file boundary: binary PPM (P6, maxval 255) and 8-bit PNG.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, ImageReader};

use super::{Image, ImageError};

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

pub fn load_image(path: impl AsRef<Path>) -> Result<Image, ImageError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(ImageError::NotFound(path.to_path_buf()));
    }
    let bytes = fs::read(path).map_err(|e| ImageError::Io(path.to_path_buf(), e))?;
    decode_image(&bytes).map_err(|e| e.with_path(path))
}

/// Decodes PPM or PNG bytes, sniffing the format from the leading magic.
pub fn decode_image(bytes: &[u8]) -> Result<Image, ImageError> {
    if bytes.starts_with(b"P6") {
        decode_ppm(bytes)
    } else if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else {
        Err(ImageError::Unsupported(None))
    }
}

pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let bytes = match ext.as_deref() {
        Some("png") => encode_png(img)?,
        Some("ppm") => encode_ppm(img),
        _ => return Err(ImageError::Unsupported(Some(path.to_path_buf()))),
    };
    fs::write(path, bytes).map_err(|e| ImageError::Io(path.to_path_buf(), e))
}

pub fn encode_ppm(img: &Image) -> Vec<u8> {
    let rgb = img.to_rgb();
    let mut out = format!("P6\n{} {}\n255\n", rgb.width(), rgb.height()).into_bytes();
    out.extend(rgb.to_u8());
    out
}

pub fn encode_png(img: &Image) -> Result<Vec<u8>, ImageError> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let bytes = img.to_u8();
    let dynamic = if img.channels() == 3 {
        image::RgbImage::from_raw(w, h, bytes).map(image::DynamicImage::ImageRgb8)
    } else {
        image::GrayImage::from_raw(w, h, bytes).map(image::DynamicImage::ImageLuma8)
    }
    .expect("buffer length matches image dimensions");
    let mut out = Cursor::new(Vec::new());
    dynamic
        .write_to(&mut out, ImageFormat::Png)
        .map_err(|e| ImageError::Corrupt(None, e.to_string()))?;
    Ok(out.into_inner())
}

fn decode_png(bytes: &[u8]) -> Result<Image, ImageError> {
    let decoded = ImageReader::with_format(Cursor::new(bytes), ImageFormat::Png)
        .decode()
        .map_err(|e| ImageError::Corrupt(None, e.to_string()))?;
    let rgb = decoded.to_rgb8();
    Image::from_u8(rgb.width() as usize, rgb.height() as usize, 3, rgb.as_raw())
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ImageError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::CorruptHeader(None, format!("bad {what}")))
    }
}

fn decode_ppm(bytes: &[u8]) -> Result<Image, ImageError> {
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(ImageError::CorruptHeader(
            None,
            format!("maxval {maxval} unsupported (only 255)"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(ImageError::CorruptHeader(None, "zero dimension".into()));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(ImageError::CorruptHeader(None, "missing raster separator".into())),
    }
    let need = width * height * 3;
    let payload = &bytes[cur.pos..];
    if payload.len() < need {
        return Err(ImageError::Corrupt(
            None,
            format!("truncated payload: {} of {need} bytes", payload.len()),
        ));
    }
    Image::from_u8(width, height, 3, &payload[..need])
}
