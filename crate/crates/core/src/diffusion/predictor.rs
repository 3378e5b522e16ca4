use super::{DiffusionError, NoiseSchedule, StyleEmbedding};
use crate::imagecore::{Raster, Rng};

/// Noise prediction `eps_hat = f(x_t, t, style)`.
///
/// Implementations must return a raster of the same shape as `x_t` and be
/// deterministic in their inputs.
pub trait NoisePredictor: Sync {
    fn predict(
        &self,
        x_t: &Raster,
        t: usize,
        style: Option<&StyleEmbedding>,
    ) -> Result<Raster, DiffusionError>;
}

/// Always predicts zero noise.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroPredictor;

impl NoisePredictor for ZeroPredictor {
    fn predict(&self, x_t: &Raster, _: usize, _: Option<&StyleEmbedding>) -> Result<Raster, DiffusionError> {
        Ok(Raster::zeros(x_t.width, x_t.height, x_t.channels))
    }
}

/// Predicts the noise that would explain `x_t` if the clean image were
/// `target`: `(x_t - sqrt(ab_t) * target) / sqrt(1 - ab_t)`.
///
/// Every DDIM step driven by this predictor estimates `x0 = target`, so the
/// sampler converges to `target` regardless of the starting point or step
/// list. Aimed at the true clean image it is the perfect (oracle) predictor.
#[derive(Clone, Debug)]
pub struct TargetPredictor {
    target: Raster,
    schedule: NoiseSchedule,
}

/// A [`TargetPredictor`] aimed at the true clean image.
pub type OraclePredictor = TargetPredictor;

impl TargetPredictor {
    pub fn new(target: Raster, schedule: NoiseSchedule) -> Self {
        Self { target, schedule }
    }

    pub fn target(&self) -> &Raster {
        &self.target
    }
}

impl NoisePredictor for TargetPredictor {
    fn predict(&self, x_t: &Raster, t: usize, _: Option<&StyleEmbedding>) -> Result<Raster, DiffusionError> {
        self.schedule.check_timestep(t)?;
        if !x_t.same_shape(&self.target) {
            return Err(DiffusionError::ShapeMismatch {
                expected: self.target.shape(),
                found: x_t.shape(),
            });
        }
        let ab = self.schedule.alpha_bar(t);
        let (sa, sn) = (ab.sqrt(), (1.0 - ab).sqrt());
        Ok(x_t.axpby(1.0 / sn, &self.target, -sa / sn))
    }
}

/// Wraps a predictor and adds Gaussian error of standard deviation
/// `stddev`, drawn from a stream keyed by `(seed, t)`.
#[derive(Clone, Debug)]
pub struct PerturbedPredictor<P> {
    pub inner: P,
    pub stddev: f64,
    pub seed: u64,
}

impl<P: NoisePredictor> NoisePredictor for PerturbedPredictor<P> {
    fn predict(&self, x_t: &Raster, t: usize, style: Option<&StyleEmbedding>) -> Result<Raster, DiffusionError> {
        let mut eps = self.inner.predict(x_t, t, style)?;
        if self.stddev > 0.0 {
            let mut rng = Rng::fork(self.seed, t as u64);
            for v in &mut eps.data {
                *v += self.stddev * rng.gaussian();
            }
        }
        Ok(eps)
    }
}
