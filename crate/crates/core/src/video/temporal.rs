use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FrameOpError, FrameSequence, VideoError};
use crate::imagecore::{Image, Raster};

/// Temporal smoothing applied after per-frame stylization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    #[default]
    None,
    /// `out[i] = alpha * styled[i] + (1 - alpha) * out[i - 1]`.
    Ema(f64),
}

impl Smoothing {
    pub fn validate(self) -> Result<(), VideoError> {
        match self {
            Smoothing::Ema(a) if !(a > 0.0 && a <= 1.0) => Err(VideoError::Alpha(a)),
            _ => Ok(()),
        }
    }
}

impl FromStr for Smoothing {
    type Err = String;

    /// `none`, `ema:<alpha>` or `ema(<alpha>)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(Smoothing::None);
        }
        let alpha = s
            .strip_prefix("ema:")
            .or_else(|| s.strip_prefix("ema(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| format!("expected none or ema:<alpha>, got {s:?}"))?;
        let a: f64 = alpha.parse().map_err(|_| format!("bad EMA alpha {alpha:?}"))?;
        let out = Smoothing::Ema(a);
        out.validate().map_err(|e| e.to_string())?;
        Ok(out)
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothing::None => f.write_str("none"),
            Smoothing::Ema(a) => write!(f, "ema:{a}"),
        }
    }
}

/// Stylizes every frame independently (in parallel; `op` gets the frame
/// index so it can derive per-frame seeds), then applies `smoothing`.
pub fn stylize_video<F, E>(seq: &FrameSequence, op: F, smoothing: Smoothing) -> Result<FrameSequence, VideoError>
where
    F: Fn(usize, &Image) -> Result<Image, E> + Sync,
    E: Into<FrameOpError>,
{
    smoothing.validate()?;
    let styled: Vec<Image> = seq
        .frames()
        .par_iter()
        .enumerate()
        .map(|(index, f)| op(index, f).map_err(|e| VideoError::Op { index, source: e.into() }))
        .collect::<Result<_, _>>()?;
    let frames = match smoothing {
        Smoothing::None => styled,
        Smoothing::Ema(alpha) => {
            let mut out: Vec<Image> = Vec::with_capacity(styled.len());
            for (i, cur) in styled.into_iter().enumerate() {
                let next = match out.last() {
                    Some(prev) if cur.same_shape(prev) => {
                        Raster::from(&cur).axpby(alpha, &Raster::from(prev), 1.0 - alpha).clamp_to_image()?
                    }
                    Some(prev) => {
                        return Err(VideoError::MixedDimensions {
                            index: i,
                            expected: (prev.width(), prev.height(), prev.channels()),
                            found: (cur.width(), cur.height(), cur.channels()),
                        })
                    }
                    None => cur,
                };
                out.push(next);
            }
            out
        }
    };
    FrameSequence::new(frames, seq.fps())
}

/// Mean over consecutive frame pairs of the mean absolute sample difference.
pub fn flicker_index(seq: &FrameSequence) -> Result<f64, VideoError> {
    let frames = seq.frames();
    if frames.len() < 2 {
        return Err(VideoError::TooFewFrames);
    }
    let total: f64 = frames
        .windows(2)
        .map(|p| {
            let (a, b) = (p[0].data(), p[1].data());
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
        })
        .sum();
    Ok(total / (frames.len() - 1) as f64)
}

/// `flicker(stylized) / flicker(source)`; above 1 means stylization
/// added flicker.
pub fn temporal_consistency_ratio(stylized: &FrameSequence, source: &FrameSequence) -> Result<f64, VideoError> {
    if stylized.len() != source.len() {
        return Err(VideoError::CountMismatch(stylized.len(), source.len()));
    }
    let base = flicker_index(source)?;
    if base == 0.0 {
        return Err(VideoError::StaticSource);
    }
    Ok(flicker_index(stylized)? / base)
}
