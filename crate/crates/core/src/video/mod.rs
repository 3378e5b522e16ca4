//! Video as a sequence of frames: Y4M and numbered-image-directory I/O,
//! per-frame stylization with optional EMA smoothing, and flicker metrics.

mod framedir;
mod temporal;
mod y4m;

pub use framedir::{read_frame_dir, write_frame_dir, FramePattern};
pub use temporal::{flicker_index, stylize_video, temporal_consistency_ratio, Smoothing};
pub use y4m::{decode_y4m, encode_y4m, read_y4m, write_y4m, Chroma};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::imagecore::{Image, ImageError};

pub type FrameOpError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, thiserror::Error)]
pub enum VideoError {
    #[error("not a YUV4MPEG2 stream")]
    BadMagic,
    #[error("unsupported chroma tag C{0} (expected C444 or C420jpeg)")]
    UnsupportedChroma(String),
    #[error("bad Y4M header: {0}")]
    BadHeader(String),
    #[error("stream truncated in frame {index}")]
    Truncated { index: usize },
    #[error("bad frame marker at frame {index}")]
    BadFrame { index: usize },
    #[error("frame pattern {0:?} needs exactly one %d or %0Nd placeholder")]
    BadPattern(String),
    #[error("missing frame indices {missing:?} in {dir}")]
    Gap { dir: PathBuf, missing: Vec<usize> },
    #[error("no frames found")]
    Empty,
    #[error("frame {index} is {found:?}, expected {expected:?}")]
    MixedDimensions {
        index: usize,
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    #[error("EMA alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("metric needs at least two frames")]
    TooFewFrames,
    #[error("sequences differ in length: {0} vs {1}")]
    CountMismatch(usize, usize),
    #[error("source sequence has zero flicker")]
    StaticSource,
    #[error("frame rate must be positive, got {num}/{den}")]
    BadFps { num: u32, den: u32 },
    #[error("frame {index}: {source}")]
    Op {
        index: usize,
        #[source]
        source: FrameOpError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Frames per second as a ratio, e.g. 30000/1001.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fps {
    pub num: u32,
    pub den: u32,
}

impl Fps {
    pub fn new(num: u32, den: u32) -> Result<Self, VideoError> {
        if num == 0 || den == 0 {
            return Err(VideoError::BadFps { num, den });
        }
        Ok(Self { num, den })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Fps {
    fn default() -> Self {
        Self { num: 25, den: 1 }
    }
}

/// Non-empty list of same-shaped frames.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Image>,
    fps: Fps,
}

fn shape(img: &Image) -> (usize, usize, usize) {
    (img.width(), img.height(), img.channels())
}

impl FrameSequence {
    pub fn new(frames: Vec<Image>, fps: Fps) -> Result<Self, VideoError> {
        let first = frames.first().ok_or(VideoError::Empty)?;
        let expected = shape(first);
        for (index, f) in frames.iter().enumerate() {
            if shape(f) != expected {
                return Err(VideoError::MixedDimensions {
                    index,
                    expected,
                    found: shape(f),
                });
            }
        }
        Ok(Self { frames, fps })
    }

    pub fn frames(&self) -> &[Image] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Image> {
        self.frames
    }

    pub fn fps(&self) -> Fps {
        self.fps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].dims()
    }
}
