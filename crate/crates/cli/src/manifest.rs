//! Run manifest: parameters, derivation contract and artifact digests.

use std::path::Path;

use impact_lattice::{EngineKind, ModelParams, ScalingKind, UpdateScheme};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Seed derivation documented as part of the manifest contract.
pub const SEED_DERIVATION: &str =
    "seed_r = splitmix64_finalize(master_seed XOR r * 0x9E3779B97F4A7C15)";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub created_at: String,
    pub command: String,
    pub engine: String,
    pub params: ParamsDoc,
    pub runs: u32,
    pub snapshot_schedule: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<SweepDoc>,
    pub seed_derivation: String,
    pub outputs: Vec<OutputDoc>,
}

/// Serialized model parameters; keys match the CLI flag names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsDoc {
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "K")]
    pub k: u32,
    pub alpha: f64,
    pub temperature: f64,
    pub steps: u32,
    pub seed: u64,
    pub update: String,
    pub scaling: String,
    pub self_support: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepDoc {
    pub alphas: Vec<f64>,
    pub temperatures: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDoc {
    pub kind: String,
    pub path: String,
    pub sha256: String,
}

impl From<&ModelParams> for ParamsDoc {
    fn from(p: &ModelParams) -> Self {
        ParamsDoc {
            l: p.side,
            k: p.opinion_count,
            alpha: p.alpha,
            temperature: p.temperature,
            steps: p.steps,
            seed: p.seed,
            update: p.update.as_str().to_string(),
            scaling: p.scaling.as_str().to_string(),
            self_support: p.self_support,
        }
    }
}

impl ParamsDoc {
    pub fn to_params(&self) -> Result<ModelParams, CliError> {
        let mut params = ModelParams::new(
            self.l,
            self.k,
            self.alpha,
            self.temperature,
            self.steps,
            self.seed,
        );
        params.update = match self.update.as_str() {
            "sync" => UpdateScheme::Synchronous,
            "async" => UpdateScheme::Asynchronous,
            other => {
                return Err(CliError::Usage(format!(
                    "manifest: unknown update scheme `{other}`"
                )))
            }
        };
        params.scaling = match self.scaling.as_str() {
            "(1+d)^a" => ScalingKind::PowShifted,
            "1+d^a" => ScalingKind::ShiftedPow,
            other => {
                return Err(CliError::Usage(format!(
                    "manifest: unknown scaling form `{other}`"
                )))
            }
        };
        params.self_support = self.self_support;
        params.validate().map_err(CliError::from)?;
        Ok(params)
    }
}

impl Manifest {
    pub fn new(command: &str, params: &ModelParams, engine: EngineKind, runs: u32) -> Self {
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_at: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            command: command.to_string(),
            engine: engine.as_str().to_string(),
            params: ParamsDoc::from(params),
            runs,
            snapshot_schedule: Vec::new(),
            sweep: None,
            seed_derivation: SEED_DERIVATION.to_string(),
            outputs: Vec::new(),
        }
    }

    pub fn engine_kind(&self) -> Result<EngineKind, CliError> {
        match self.engine.as_str() {
            "naive" => Ok(EngineKind::Naive),
            "kernel" => Ok(EngineKind::Kernel),
            other => Err(CliError::Usage(format!(
                "manifest: unknown engine `{other}`"
            ))),
        }
    }

    pub fn record_output(&mut self, kind: &str, path: &str, bytes: &[u8]) {
        self.outputs.push(OutputDoc {
            kind: kind.to_string(),
            path: path.to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Runtime(format!("serializing manifest: {e}")))?;
        json.push('\n');
        crate::emit::write_atomic(path, json.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("parsing manifest {}: {e}", path.display())))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
