use std::path::{Path, PathBuf};

use super::{Fps, FrameSequence, VideoError};
use crate::imagecore::{load_image, save_image};

/// File name template with one `%d` / `%0Nd` index placeholder, e.g.
/// `frame_%04d.png`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramePattern {
    prefix: String,
    suffix: String,
    width: usize,
}

impl FramePattern {
    pub fn parse(pattern: &str) -> Result<Self, VideoError> {
        let bad = || VideoError::BadPattern(pattern.to_string());
        let start = pattern.find('%').ok_or_else(bad)?;
        let rest = &pattern[start + 1..];
        let digits_end = rest.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        if !rest[digits_end..].starts_with('d') {
            return Err(bad());
        }
        let spec = &rest[..digits_end];
        let width = match spec {
            "" => 0,
            s if s.starts_with('0') && s.len() > 1 => s[1..].parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        let suffix = &rest[digits_end + 1..];
        if suffix.contains('%') || suffix.contains('/') || pattern[..start].contains('/') {
            return Err(bad());
        }
        Ok(Self {
            prefix: pattern[..start].to_string(),
            suffix: suffix.to_string(),
            width,
        })
    }

    pub fn format(&self, index: usize) -> String {
        format!("{}{:0w$}{}", self.prefix, index, self.suffix, w = self.width)
    }

    /// Inverse of [`format`](Self::format) for file names that match.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        let digits = name.strip_prefix(&self.prefix)?.strip_suffix(&self.suffix)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if self.width > 0 && digits.len() < self.width {
            return None;
        }
        let index: usize = digits.parse().ok()?;
        (self.format(index) == name).then_some(index)
    }
}

/// Loads every file in `dir` matching `pattern`, in index order. Indices
/// must be contiguous from the smallest one found.
pub fn read_frame_dir(dir: impl AsRef<Path>, pattern: &str, fps: Fps) -> Result<FrameSequence, VideoError> {
    let dir = dir.as_ref();
    let pat = FramePattern::parse(pattern)?;
    let io = |source| VideoError::Io { path: dir.to_path_buf(), source };
    let mut indices = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let entry = entry.map_err(io)?;
        if let Some(i) = entry.file_name().to_str().and_then(|n| pat.index_of(n)) {
            indices.push(i);
        }
    }
    indices.sort_unstable();
    let (Some(&lo), Some(&hi)) = (indices.first(), indices.last()) else {
        return Err(VideoError::Empty);
    };
    if hi - lo + 1 != indices.len() {
        let missing = (lo..=hi).filter(|i| indices.binary_search(i).is_err()).collect();
        return Err(VideoError::Gap { dir: dir.to_path_buf(), missing });
    }
    let frames = indices
        .iter()
        .map(|&i| load_image(dir.join(pat.format(i))))
        .collect::<Result<Vec<_>, _>>()?;
    FrameSequence::new(frames, fps)
}

/// Writes frame `i` to `dir/pattern(i)`, numbering from 0. Returns the
/// written paths.
pub fn write_frame_dir(seq: &FrameSequence, dir: impl AsRef<Path>, pattern: &str) -> Result<Vec<PathBuf>, VideoError> {
    let pat = FramePattern::parse(pattern)?;
    let mut paths = Vec::with_capacity(seq.len());
    for (i, frame) in seq.frames().iter().enumerate() {
        let path = dir.as_ref().join(pat.format(i));
        save_image(frame, &path)?;
        paths.push(path);
    }
    Ok(paths)
}
