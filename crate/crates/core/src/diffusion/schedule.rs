use serde::{Deserialize, Serialize};

use super::DiffusionError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    #[default]
    Linear,
}

/// Serialized form of a [`NoiseSchedule`]: `{"T", "beta_start", "beta_end", "kind"}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    #[serde(rename = "T")]
    pub steps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    #[serde(default)]
    pub kind: ScheduleKind,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        Self {
            steps: 50,
            beta_start: 1e-4,
            beta_end: 0.02,
            kind: ScheduleKind::Linear,
        }
    }
}

/// Variance-preserving noise schedule.
///
/// Timesteps run `1..=T`; `alpha_bar(0)` is defined as 1 so the reverse
/// sampler can land on the clean image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleSpec", into = "ScheduleSpec")]
pub struct NoiseSchedule {
    spec: ScheduleSpec,
    betas: Vec<f64>,
    alpha_bars: Vec<f64>,
}

pub fn make_linear_schedule(
    steps: usize,
    beta_start: f64,
    beta_end: f64,
) -> Result<NoiseSchedule, DiffusionError> {
    NoiseSchedule::try_from(ScheduleSpec {
        steps,
        beta_start,
        beta_end,
        kind: ScheduleKind::Linear,
    })
}

impl TryFrom<ScheduleSpec> for NoiseSchedule {
    type Error = DiffusionError;

    fn try_from(spec: ScheduleSpec) -> Result<Self, Self::Error> {
        let ScheduleSpec {
            steps,
            beta_start,
            beta_end,
            ..
        } = spec;
        if steps == 0 {
            return Err(DiffusionError::InvalidSchedule("T must be >= 1".into()));
        }
        if !(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0) {
            return Err(DiffusionError::InvalidSchedule(format!(
                "need 0 < beta_start <= beta_end < 1, got {beta_start}..{beta_end}"
            )));
        }
        let betas: Vec<f64> = (0..steps)
            .map(|i| {
                if steps == 1 {
                    beta_start
                } else {
                    beta_start + (beta_end - beta_start) * i as f64 / (steps - 1) as f64
                }
            })
            .collect();
        let mut alpha_bars = Vec::with_capacity(steps + 1);
        alpha_bars.push(1.0);
        let mut prod = 1.0;
        for b in &betas {
            prod *= 1.0 - b;
            alpha_bars.push(prod);
        }
        Ok(Self {
            spec,
            betas,
            alpha_bars,
        })
    }
}

impl From<NoiseSchedule> for ScheduleSpec {
    fn from(s: NoiseSchedule) -> Self {
        s.spec
    }
}

impl Default for NoiseSchedule {
    fn default() -> Self {
        NoiseSchedule::try_from(ScheduleSpec::default()).expect("default schedule is valid")
    }
}

impl NoiseSchedule {
    pub fn spec(&self) -> ScheduleSpec {
        self.spec
    }

    /// Total number of timesteps `T`.
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// `beta_t` for `t` in `1..=T`.
    pub fn beta(&self, t: usize) -> f64 {
        self.betas[t - 1]
    }

    pub fn alpha(&self, t: usize) -> f64 {
        1.0 - self.beta(t)
    }

    /// Cumulative product for `t` in `0..=T`.
    pub fn alpha_bar(&self, t: usize) -> f64 {
        self.alpha_bars[t]
    }

    pub fn check_timestep(&self, t: usize) -> Result<(), DiffusionError> {
        if t == 0 || t > self.len() {
            Err(DiffusionError::TimestepOutOfRange { t, max: self.len() })
        } else {
            Ok(())
        }
    }

    /// Maps a strength in `[0, 1]` to a starting timestep in `1..=T`.
    pub fn strength_to_timestep(&self, strength: f64) -> usize {
        let t = (strength.clamp(0.0, 1.0) * self.len() as f64).round() as usize;
        t.clamp(1, self.len())
    }
}

/// `n` evenly spaced DDIM transitions from `start` down to 0, e.g.
/// `evenly_spaced_steps(30, 3) == [30, 20, 10, 0]`. Duplicate timesteps
/// (when `n > start`) are dropped.
pub fn evenly_spaced_steps(start: usize, n: usize) -> Vec<usize> {
    let n = n.max(1);
    let mut steps: Vec<usize> = (0..=n)
        .map(|i| ((start * (n - i)) as f64 / n as f64).round() as usize)
        .collect();
    steps.dedup();
    steps
}
