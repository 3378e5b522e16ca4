use super::{DiffusionError, NoisePredictor, NoiseSchedule, StyleEmbedding};
use crate::imagecore::{Image, Raster, Rng};

fn same_shape(a: &Raster, b: &Raster) -> Result<(), DiffusionError> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(DiffusionError::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        })
    }
}

/// Forward noising `x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps` (unclamped).
pub fn q_sample(x0: &Raster, t: usize, eps: &Raster, sched: &NoiseSchedule) -> Result<Raster, DiffusionError> {
    sched.check_timestep(t)?;
    same_shape(x0, eps)?;
    let ab = sched.alpha_bar(t);
    Ok(x0.axpby(ab.sqrt(), eps, (1.0 - ab).sqrt()))
}

/// Deterministic (eta = 0) DDIM update from `t` to `t_prev`.
pub fn ddim_step(
    x_t: &Raster,
    eps_hat: &Raster,
    t: usize,
    t_prev: usize,
    sched: &NoiseSchedule,
) -> Result<Raster, DiffusionError> {
    sched.check_timestep(t)?;
    if t_prev >= t {
        return Err(DiffusionError::TimestepOrder { t, t_prev });
    }
    same_shape(x_t, eps_hat)?;
    let ab = sched.alpha_bar(t);
    let ab_prev = sched.alpha_bar(t_prev);
    let x0_hat = x_t.axpby(1.0 / ab.sqrt(), eps_hat, -(1.0 - ab).sqrt() / ab.sqrt());
    Ok(x0_hat.axpby(ab_prev.sqrt(), eps_hat, (1.0 - ab_prev).sqrt()))
}

/// Result of [`stochastic_inversion`].
#[derive(Clone, Debug)]
pub struct Inversion {
    /// Starting raster for synthesis, built from the predicted noise.
    pub x_init: Raster,
    pub eps_pred: Raster,
}

/// Noises `content` to `t_star` with a fresh Gaussian draw, asks the
/// predictor what noise it sees, and re-expresses the noisy state with that
/// predicted noise: `x_init = sqrt(ab) content + sqrt(1 - ab) eps_pred`.
pub fn stochastic_inversion<P: NoisePredictor + ?Sized>(
    content: &Image,
    t_star: usize,
    sched: &NoiseSchedule,
    predictor: &P,
    rng: &mut Rng,
) -> Result<Inversion, DiffusionError> {
    sched.check_timestep(t_star)?;
    let x0 = content.to_raster();
    let eps = Raster::from_parts(
        x0.width,
        x0.height,
        x0.channels,
        rng.gaussian_vec(x0.data.len()),
    )?;
    let x_t = q_sample(&x0, t_star, &eps, sched)?;
    let eps_pred = predictor.predict(&x_t, t_star, None)?;
    same_shape(&x_t, &eps_pred)?;
    let x_init = q_sample(&x0, t_star, &eps_pred, sched)?;
    Ok(Inversion { x_init, eps_pred })
}

fn check_steps(steps: &[usize], sched: &NoiseSchedule) -> Result<(), DiffusionError> {
    let malformed = |m: &str| Err(DiffusionError::MalformedSteps(format!("{m}: {steps:?}")));
    match (steps.first(), steps.last()) {
        (None, _) | (_, None) => return malformed("empty step list"),
        (Some(&first), Some(&last)) => {
            if last != 0 {
                return malformed("last step must be 0");
            }
            if first > sched.len() {
                return malformed("first step exceeds T");
            }
        }
    }
    if steps.windows(2).any(|w| w[1] >= w[0]) {
        return malformed("steps must be strictly decreasing");
    }
    Ok(())
}

/// Conditional synthesis: iterate DDIM steps along `steps` (descending,
/// ending at 0), querying the predictor with the style embedding at every
/// timestep, then clamp into an image.
pub fn synthesize<P: NoisePredictor + ?Sized>(
    x_init: &Raster,
    style: Option<&StyleEmbedding>,
    predictor: &P,
    sched: &NoiseSchedule,
    steps: &[usize],
) -> Result<Image, DiffusionError> {
    Ok(synthesize_raster(x_init, style, predictor, sched, steps)?.clamp_to_image()?)
}

/// Same as [`synthesize`] without the final clamp.
pub fn synthesize_raster<P: NoisePredictor + ?Sized>(
    x_init: &Raster,
    style: Option<&StyleEmbedding>,
    predictor: &P,
    sched: &NoiseSchedule,
    steps: &[usize],
) -> Result<Raster, DiffusionError> {
    check_steps(steps, sched)?;
    let mut x = x_init.clone();
    for pair in steps.windows(2) {
        let (t, t_prev) = (pair[0], pair[1]);
        let eps = predictor.predict(&x, t, style)?;
        x = ddim_step(&x, &eps, t, t_prev, sched)?;
    }
    Ok(x)
}
