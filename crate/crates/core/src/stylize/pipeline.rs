use serde::{Deserialize, Serialize};

use super::{cartoonize_with_palette, median_cut, require_rgb, style_embed, StylizeError};
use crate::denoise::{denoise_stage, DenoiseBackend, NlmParams, PostDenoise, TiledSettings};
use crate::diffusion::{evenly_spaced_steps, stochastic_inversion, synthesize, NoiseSchedule, ScheduleSpec, TargetPredictor};
use crate::imagecore::{Image, Rng};

/// Settings for [`inst_stylize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstConfig {
    /// Fraction of the schedule to noise the content to, in `[0, 1]`.
    pub strength: f64,
    /// Number of DDIM transitions from `t_star` down to 0.
    pub steps: usize,
    pub palette_size: usize,
    pub edge_strength: f64,
    pub post_denoise: PostDenoise,
    pub nlm: NlmParams,
    pub tiling: TiledSettings,
    pub schedule: ScheduleSpec,
}

impl Default for InstConfig {
    fn default() -> Self {
        Self {
            strength: 0.6,
            steps: 10,
            palette_size: 8,
            edge_strength: 0.5,
            post_denoise: PostDenoise::None,
            nlm: NlmParams::default(),
            tiling: TiledSettings::default(),
            schedule: ScheduleSpec::default(),
        }
    }
}

impl InstConfig {
    pub fn validate(&self) -> Result<(), StylizeError> {
        if !(0.0..=1.0).contains(&self.strength) {
            return Err(StylizeError::Config(format!("strength {} outside [0, 1]", self.strength)));
        }
        if self.steps == 0 {
            return Err(StylizeError::Config("steps must be at least 1".into()));
        }
        if !(1..=256).contains(&self.palette_size) {
            return Err(StylizeError::PaletteSize(self.palette_size));
        }
        if !(0.0..=1.0).contains(&self.edge_strength) {
            return Err(StylizeError::EdgeStrength(self.edge_strength));
        }
        self.nlm.validate()?;
        NoiseSchedule::try_from(self.schedule)?;
        Ok(())
    }

    pub fn denoise_backend(&self) -> DenoiseBackend {
        DenoiseBackend::from_choice(self.post_denoise, self.nlm, self.tiling)
    }
}

/// Full image pipeline: embed the style, build a cartoon target from the
/// content using the style's palette, noise the content to
/// `t_star = strength * T`, invert and synthesize toward the target with
/// the style embedding as conditioning, then run the post-denoise stage.
pub fn inst_stylize(content: &Image, style: &Image, cfg: &InstConfig, seed: u64) -> Result<Image, StylizeError> {
    cfg.validate()?;
    require_rgb(content)?;
    let embedding = style_embed(style)?;
    let palette = median_cut(style, cfg.palette_size)?;
    let target = cartoonize_with_palette(content, &palette, cfg.edge_strength)?;

    let sched = NoiseSchedule::try_from(cfg.schedule)?;
    let t_star = sched.strength_to_timestep(cfg.strength);
    let predictor = TargetPredictor::new(target.to_raster(), sched.clone());
    let mut rng = Rng::new(seed);
    let inv = stochastic_inversion(content, t_star, &sched, &predictor, &mut rng)?;
    let steps = evenly_spaced_steps(t_star, cfg.steps);
    let out = synthesize(&inv.x_init, Some(&embedding), &predictor, &sched, &steps)?;
    Ok(denoise_stage(&out, &cfg.denoise_backend())?)
}
