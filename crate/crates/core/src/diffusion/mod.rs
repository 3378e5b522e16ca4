//! Desk-scale diffusion engine.
//!
//! Variance-preserving forward process, deterministic DDIM reverse steps,
//! stochastic inversion and conditional synthesis. The noise predictor is
//! a trait so tests can plug in exact oracles and the pipeline can plug in
//! a predictor aimed at a stylization target.

mod predictor;
mod sampler;
mod schedule;

pub use predictor::{NoisePredictor, OraclePredictor, PerturbedPredictor, TargetPredictor, ZeroPredictor};
pub use sampler::{ddim_step, q_sample, stochastic_inversion, synthesize, synthesize_raster, Inversion};
pub use schedule::{evenly_spaced_steps, make_linear_schedule, NoiseSchedule, ScheduleKind, ScheduleSpec};

use crate::imagecore::ImageError;

#[derive(Debug, thiserror::Error)]
pub enum DiffusionError {
    #[error("invalid noise schedule: {0}")]
    InvalidSchedule(String),
    #[error("timestep {t} out of range 1..={max}")]
    TimestepOutOfRange { t: usize, max: usize },
    #[error("reverse step must go backwards in time, got {t} -> {t_prev}")]
    TimestepOrder { t: usize, t_prev: usize },
    #[error("malformed step list: {0}")]
    MalformedSteps(String),
    #[error("raster shape {found:?} does not match {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    #[error("invalid style embedding: {0}")]
    InvalidEmbedding(String),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Style conditioning vector handed to the noise predictor.
#[derive(Clone, Debug, PartialEq)]
pub struct StyleEmbedding(Vec<f64>);

impl StyleEmbedding {
    pub fn new(values: Vec<f64>) -> Result<Self, DiffusionError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DiffusionError::InvalidEmbedding("non-finite entry".into()));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1.0 + 1e-9 {
            return Err(DiffusionError::InvalidEmbedding(format!("norm {norm} exceeds 1")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}
