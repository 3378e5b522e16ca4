use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toonflow::denoise::{DenoiseBackend, NlmParams, PostDenoise, TiledSettings};
use toonflow::diffusion::ScheduleSpec;
use toonflow::stylize::InstConfig;
use toonflow::tiler::Window;
use toonflow::video::Smoothing;

/// Every tunable of every subcommand. Unknown keys are rejected so typos
/// in config files fail loudly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub strength: f64,
    pub steps: usize,
    pub palette_size: usize,
    pub edge_strength: f64,
    pub post_denoise: PostDenoise,
    pub nlm: NlmParams,
    pub tile: usize,
    pub overlap: usize,
    pub window: Window,
    pub resize: Option<usize>,
    pub seed: u64,
    pub schedule: ScheduleSpec,
    pub levels: usize,
    pub temperature: f64,
    pub smoothing: Smoothing,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let inst = InstConfig::default();
        Self {
            strength: inst.strength,
            steps: inst.steps,
            palette_size: inst.palette_size,
            edge_strength: inst.edge_strength,
            post_denoise: inst.post_denoise,
            nlm: inst.nlm,
            tile: inst.tiling.tile,
            overlap: inst.tiling.overlap,
            window: inst.tiling.window,
            resize: inst.tiling.resize,
            seed: 0,
            schedule: inst.schedule,
            levels: 3,
            temperature: 1.0,
            smoothing: Smoothing::None,
        }
    }
}

impl PipelineConfig {
    pub fn tiling(&self) -> TiledSettings {
        TiledSettings {
            tile: self.tile,
            overlap: self.overlap,
            window: self.window,
            resize: self.resize,
        }
    }

    pub fn inst(&self) -> InstConfig {
        InstConfig {
            strength: self.strength,
            steps: self.steps,
            palette_size: self.palette_size,
            edge_strength: self.edge_strength,
            post_denoise: self.post_denoise,
            nlm: self.nlm,
            tiling: self.tiling(),
            schedule: self.schedule,
        }
    }

    pub fn denoise_backend(&self) -> DenoiseBackend {
        DenoiseBackend::from_choice(self.post_denoise, self.nlm, self.tiling())
    }

    pub fn validate(&self) -> Result<(), String> {
        self.inst().validate().map_err(|e| e.to_string())?;
        if self.tile == 0 || self.overlap >= self.tile {
            return Err(format!("need tile >= 1 and overlap < tile, got tile {} overlap {}", self.tile, self.overlap));
        }
        if self.resize == Some(0) {
            return Err("resize must be positive".into());
        }
        if self.levels == 0 {
            return Err("levels must be at least 1".into());
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(format!("temperature must be positive and finite, got {}", self.temperature));
        }
        self.smoothing.validate().map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}
