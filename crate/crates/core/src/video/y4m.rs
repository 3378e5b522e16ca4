use std::path::Path;

use super::{Fps, FrameSequence, VideoError};
use crate::imagecore::{quantize, rgb_to_ycbcr_pixel, ycbcr_to_rgb_pixel, Image};

const MAGIC: &str = "YUV4MPEG2";

/// Chroma layouts this reader understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chroma {
    C444,
    /// 4:2:0 with centred (JPEG) siting; chroma planes are `ceil(w/2) x ceil(h/2)`.
    C420Jpeg,
}

impl Chroma {
    fn tag(self) -> &'static str {
        match self {
            Chroma::C444 => "444",
            Chroma::C420Jpeg => "420jpeg",
        }
    }

    fn plane_dims(self, w: usize, h: usize) -> (usize, usize) {
        match self {
            Chroma::C444 => (w, h),
            Chroma::C420Jpeg => (w.div_ceil(2), h.div_ceil(2)),
        }
    }
}

struct Header {
    width: usize,
    height: usize,
    fps: Fps,
    chroma: Chroma,
    limited: bool,
}

fn parse_header(line: &str) -> Result<Header, VideoError> {
    let mut tokens = line.split(' ').filter(|t| !t.is_empty());
    if tokens.next() != Some(MAGIC) {
        return Err(VideoError::BadMagic);
    }
    let bad = |m: String| VideoError::BadHeader(m);
    let (mut width, mut height, mut fps, mut chroma, mut limited) = (None, None, Fps::default(), Chroma::C420Jpeg, false);
    for tok in tokens {
        let (key, val) = tok.split_at(tok.chars().next().map_or(0, char::len_utf8));
        match key {
            "W" => width = Some(val.parse::<usize>().map_err(|_| bad(format!("width {val:?}")))?),
            "H" => height = Some(val.parse::<usize>().map_err(|_| bad(format!("height {val:?}")))?),
            "F" => {
                let (n, d) = val.split_once(':').ok_or_else(|| bad(format!("frame rate {val:?}")))?;
                let parse = |s: &str| s.parse::<u32>().map_err(|_| bad(format!("frame rate {val:?}")));
                fps = Fps::new(parse(n)?, parse(d)?)?;
            }
            "C" => {
                chroma = match val {
                    "444" => Chroma::C444,
                    "420jpeg" | "420" => Chroma::C420Jpeg,
                    other => return Err(VideoError::UnsupportedChroma(other.to_string())),
                }
            }
            "I" if val != "p" && val != "?" => return Err(bad(format!("interlacing {val:?} not supported"))),
            "X" => {
                if val == "COLORRANGE=LIMITED" {
                    limited = true;
                }
            }
            _ => {}
        }
    }
    match (width, height) {
        (Some(w), Some(h)) if w > 0 && h > 0 => Ok(Header { width: w, height: h, fps, chroma, limited }),
        _ => Err(bad("missing or zero W/H".into())),
    }
}

/// Full-range chroma byte: neutral (0.5) is code 128, as in JFIF.
fn chroma_byte(c: f64) -> u8 {
    (255.0 * (c - 0.5) + 128.0).round().clamp(0.0, 255.0) as u8
}

fn sample_to_unit(v: u8, chroma: bool, limited: bool) -> f64 {
    match (limited, chroma) {
        (false, false) => v as f64 / 255.0,
        (false, true) => (v as f64 - 128.0) / 255.0 + 0.5,
        (true, false) => (v as f64 - 16.0) / 219.0,
        (true, true) => (v as f64 - 128.0) / 224.0 + 0.5,
    }
}

/// Parses a YUV4MPEG2 stream. Samples are read as full-range BT.601
/// unless the stream carries `XCOLORRANGE=LIMITED`.
pub fn decode_y4m(bytes: &[u8]) -> Result<FrameSequence, VideoError> {
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or(VideoError::BadMagic)?;
    let line = std::str::from_utf8(&bytes[..nl]).map_err(|_| VideoError::BadMagic)?;
    let hdr = parse_header(line)?;
    let (w, h) = (hdr.width, hdr.height);
    let (cw, ch) = hdr.chroma.plane_dims(w, h);
    let frame_len = w * h + 2 * cw * ch;

    let mut pos = nl + 1;
    let mut frames = Vec::new();
    while pos < bytes.len() {
        let index = frames.len();
        let rest = &bytes[pos..];
        let Some(eol) = rest.iter().position(|&b| b == b'\n') else {
            return Err(VideoError::Truncated { index });
        };
        if !rest[..eol].starts_with(b"FRAME") {
            return Err(VideoError::BadFrame { index });
        }
        pos += eol + 1;
        if bytes.len() - pos < frame_len {
            return Err(VideoError::Truncated { index });
        }
        let data = &bytes[pos..pos + frame_len];
        pos += frame_len;
        let (yp, chroma) = data.split_at(w * h);
        let (up, vp) = chroma.split_at(cw * ch);
        let mut rgb = Vec::with_capacity(w * h * 3);
        for y in 0..h {
            for x in 0..w {
                let ci = match hdr.chroma {
                    Chroma::C444 => y * w + x,
                    Chroma::C420Jpeg => (y / 2) * cw + x / 2,
                };
                rgb.extend(ycbcr_to_rgb_pixel([
                    sample_to_unit(yp[y * w + x], false, hdr.limited),
                    sample_to_unit(up[ci], true, hdr.limited),
                    sample_to_unit(vp[ci], true, hdr.limited),
                ]));
            }
        }
        frames.push(Image::new(w, h, 3, rgb)?);
    }
    FrameSequence::new(frames, hdr.fps)
}

/// Serializes frames as full-range YCbCr with the given chroma layout.
/// 4:2:0 chroma is the box average of each 2x2 block.
pub fn encode_y4m(seq: &FrameSequence, chroma: Chroma) -> Vec<u8> {
    let (w, h) = seq.dims();
    let (cw, ch) = chroma.plane_dims(w, h);
    let fps = seq.fps();
    let mut out = format!("{MAGIC} W{w} H{h} F{}:{} Ip A1:1 C{} XCOLORRANGE=FULL\n", fps.num, fps.den, chroma.tag()).into_bytes();
    for frame in seq.frames() {
        let rgb = frame.to_rgb();
        let ycc: Vec<[f64; 3]> = rgb.data().chunks_exact(3).map(|p| rgb_to_ycbcr_pixel([p[0], p[1], p[2]])).collect();
        out.extend_from_slice(b"FRAME\n");
        out.extend(ycc.iter().map(|p| quantize(p[0])));
        for c in 1..3 {
            match chroma {
                Chroma::C444 => out.extend(ycc.iter().map(|p| chroma_byte(p[c]))),
                Chroma::C420Jpeg => {
                    for by in 0..ch {
                        for bx in 0..cw {
                            let (mut sum, mut n) = (0.0, 0.0);
                            for y in 2 * by..(2 * by + 2).min(h) {
                                for x in 2 * bx..(2 * bx + 2).min(w) {
                                    sum += ycc[y * w + x][c];
                                    n += 1.0;
                                }
                            }
                            out.push(chroma_byte(sum / n));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn read_y4m(path: impl AsRef<Path>) -> Result<FrameSequence, VideoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| VideoError::Io { path: path.into(), source })?;
    decode_y4m(&bytes)
}

pub fn write_y4m(seq: &FrameSequence, path: impl AsRef<Path>, chroma: Chroma) -> Result<(), VideoError> {
    let path = path.as_ref();
    std::fs::write(path, encode_y4m(seq, chroma)).map_err(|source| VideoError::Io { path: path.into(), source })
}
