//! Embedding similarity evaluation: builtin descriptor embeddings, a
//! blocking client for a remote embedding service, and the
//! generated-vs-style / generated-vs-content report.

mod remote;
mod report;

pub use remote::{embed_remote, remote_health, Health, RemoteEmbedder};
pub use report::{similarity_report, ReportRow, SimilarityReport};

use serde::{Deserialize, Serialize};

use crate::imagecore::{Image, ImageError};
use crate::stylize::{descriptor, StylizeError};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("embedding dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("remote declared dim {declared} but sent {found} values")]
    DeclaredDim { declared: usize, found: usize },
    #[error("request to {url} timed out")]
    Timeout { url: String },
    #[error("{url} answered with HTTP status {status}")]
    Status { url: String, status: u16 },
    #[error("malformed response from {url}: {reason}")]
    Malformed { url: String, reason: String },
    #[error("transport error talking to {url}: {reason}")]
    Transport { url: String, reason: String },
    #[error("embedding must be finite and non-zero")]
    Degenerate,
    #[error("report needs equally long, non-empty lists (generated {generated}, styles {styles}, contents {contents})")]
    LengthMismatch {
        generated: usize,
        styles: usize,
        contents: usize,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Stylize(#[from] StylizeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingSource {
    Builtin,
    Remote(String),
}

impl std::fmt::Display for EmbeddingSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmbeddingSource::Builtin => f.write_str("builtin"),
            EmbeddingSource::Remote(model) => write!(f, "remote({model})"),
        }
    }
}

/// Unit-norm feature vector with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    values: Vec<f64>,
    source: EmbeddingSource,
}

impl Embedding {
    /// Scales `values` to unit L2 norm.
    pub fn normalized(values: Vec<f64>, source: EmbeddingSource) -> Result<Self, EvalError> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(EvalError::Degenerate);
        }
        Ok(Self {
            values: values.into_iter().map(|v| v / norm).collect(),
            source,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn source(&self) -> &EmbeddingSource {
        &self.source
    }
}

/// The stylizer's color/orientation descriptor used as an image embedding.
pub fn embed_builtin(img: &Image) -> Result<Embedding, EvalError> {
    Embedding::normalized(descriptor(img)?, EmbeddingSource::Builtin)
}

/// Dot product of two unit vectors, clamped to `[-1, 1]` against rounding.
pub fn cosine_similarity(a: &Embedding, b: &Embedding) -> Result<f64, EvalError> {
    if a.dim() != b.dim() {
        return Err(EvalError::DimMismatch(a.dim(), b.dim()));
    }
    let dot: f64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum();
    Ok(dot.clamp(-1.0, 1.0))
}

/// Something that turns images into embeddings.
pub trait Embedder: Sync {
    fn embed(&self, img: &Image) -> Result<Embedding, EvalError>;
    /// Short name recorded in reports.
    fn tag(&self) -> String;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuiltinEmbedder;

impl Embedder for BuiltinEmbedder {
    fn embed(&self, img: &Image) -> Result<Embedding, EvalError> {
        embed_builtin(img)
    }

    fn tag(&self) -> String {
        "builtin".into()
    }
}
