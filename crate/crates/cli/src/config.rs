//! JSON run/scan configuration with CLI-flag overrides.

use crate::AppError;
use acidlab_core::model::ModelParams;
use acidlab_core::pde::InitialData;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub diffusion: f64,
    pub d1: f64,
    pub d2: f64,
    pub r: f64,
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig { diffusion: 1.0, d1: 0.5, d2: 0.5, r: 1.0, c: 1.0, a1: 0.5, a2: 0.5 }
    }
}

impl ParamsConfig {
    pub fn build(&self) -> Result<ModelParams, AppError> {
        ModelParams::new(self.diffusion, self.d1, self.d2, self.r, self.c, self.a1, self.a2)
            .map_err(|e| AppError::invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub length: f64,
    pub n_cells: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { length: 1.0, n_cells: 128 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    Constant,
    Cosine,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct InitConfig {
    pub kind: InitKind,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig { kind: InitKind::Cosine, u: 0.5, v: 0.5, w: 0.5, amplitude: 0.1, seed: 0 }
    }
}

impl InitConfig {
    pub fn build(&self) -> InitialData {
        match self.kind {
            InitKind::Constant => InitialData::Constant { u: self.u, v: self.v, w: self.w },
            InitKind::Cosine => InitialData::CosineSeries {
                u: self.u,
                v: self.v,
                w: self.w,
                amplitude: self.amplitude,
                seed: self.seed,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TargetSelector {
    /// Use the attractor predicted by the global classification.
    Auto,
    Heterogeneous,
    HomogeneousTumor,
    Healthy,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub grid: GridConfig,
    pub init: InitConfig,
    pub t_end: f64,
    pub sample_every: f64,
    /// Full-snapshot cadence; defaults to `sample_every` when a verification
    /// needing snapshots is enabled.
    pub snapshot_every: Option<f64>,
    pub target: TargetSelector,
    pub verify_lyapunov: bool,
    pub verify_sandwich: bool,
    pub output_dir: Option<String>,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ParamsConfig::default(),
            grid: GridConfig::default(),
            init: InitConfig::default(),
            t_end: 100.0,
            sample_every: 0.5,
            snapshot_every: None,
            target: TargetSelector::Auto,
            verify_lyapunov: false,
            verify_sandwich: false,
            output_dir: None,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn validate(&self, name: &str) -> Result<(), AppError> {
        if self.count < 2 {
            return Err(AppError::invalid(format!("{name}: count must be >= 2")));
        }
        if !(self.min > 0.0) || !(self.max > self.min) {
            return Err(AppError::invalid(format!(
                "{name}: need 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ScanAction {
    Classify,
    Certificate,
    Simulate,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub a1: f64,
    pub a2: f64,
    pub r: f64,
    pub c: f64,
    pub diffusion: f64,
    pub d1: RangeSpec,
    pub d2_over_r: RangeSpec,
    pub action: ScanAction,
    /// Final time for per-cell simulations when `action = simulate`.
    pub t_end: f64,
    pub output_dir: Option<String>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            a1: 0.5,
            a2: 0.5,
            r: 1.0,
            c: 1.0,
            diffusion: 1.0,
            d1: RangeSpec { min: 0.1, max: 5.0, count: 16 },
            d2_over_r: RangeSpec { min: 0.1, max: 5.0, count: 16 },
            action: ScanAction::Classify,
            t_end: 20.0,
            output_dir: None,
        }
    }
}

pub fn load_json<T: serde::de::DeserializeOwned + Default>(
    path: Option<&Path>,
) -> Result<T, AppError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| AppError::invalid(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| AppError::invalid(format!("bad config {}: {e}", p.display())))
        }
    }
}
