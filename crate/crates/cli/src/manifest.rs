use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::PipelineConfig;

/// What a run read, wrote and with which settings; printed to stdout.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub subcommand: String,
    pub config: PipelineConfig,
    pub seed: u64,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Value>,
}

impl Manifest {
    pub fn new(subcommand: &str, config: &PipelineConfig) -> Self {
        Self {
            subcommand: subcommand.into(),
            config: config.clone(),
            seed: config.seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            config_hash: config.hash(),
            metrics: None,
        }
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.display().to_string());
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }
}
