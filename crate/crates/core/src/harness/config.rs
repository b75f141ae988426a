use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coupled_tops::{CoupledTopParams, DEFAULT_ALPHA1, DEFAULT_ALPHA2, DEFAULT_K1, DEFAULT_K2};
use crate::rmt::{Coupling, EnsembleSpec, Symmetry};
use crate::spin::TopParams;
use crate::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 6000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Spacing,
    Entanglement,
    SchmidtDistribution,
    LambdaScan,
    OmegaDistribution,
    RmtValidation,
}

impl ExperimentKind {
    fn needs_tops(self) -> bool {
        matches!(self, Self::Spacing | Self::Entanglement | Self::SchmidtDistribution)
    }

    fn needs_ensemble(self) -> bool {
        matches!(self, Self::OmegaDistribution | Self::RmtValidation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopsSystem {
    pub j1: u32,
    pub j2: u32,
    #[serde(default = "default_k1")]
    pub k1: f64,
    #[serde(default = "default_k2")]
    pub k2: f64,
    #[serde(default = "default_alpha1")]
    pub alpha1: f64,
    #[serde(default = "default_alpha2")]
    pub alpha2: f64,
}

fn default_k1() -> f64 {
    DEFAULT_K1
}
fn default_k2() -> f64 {
    DEFAULT_K2
}
fn default_alpha1() -> f64 {
    DEFAULT_ALPHA1
}
fn default_alpha2() -> f64 {
    DEFAULT_ALPHA2
}

impl TopsSystem {
    pub fn new(j1: u32, j2: u32) -> Self {
        Self { j1, j2, k1: DEFAULT_K1, k2: DEFAULT_K2, alpha1: DEFAULT_ALPHA1, alpha2: DEFAULT_ALPHA2 }
    }

    pub fn params(&self, epsilon: f64) -> Result<CoupledTopParams> {
        CoupledTopParams::new(
            TopParams::new(self.j1, self.k1, self.alpha1)?,
            TopParams::new(self.j2, self.k2, self.alpha2)?,
            epsilon,
        )
    }

    pub fn dims(&self) -> (usize, usize) {
        (2 * self.j1 as usize + 1, 2 * self.j2 as usize + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSystem {
    pub symmetry: Symmetry,
    pub coupling: Coupling,
    pub n1: usize,
    pub n2: usize,
}

impl EnsembleSystem {
    pub fn spec(&self, epsilon: f64, realizations: usize, base_seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(self.symmetry, self.coupling, self.n1, self.n2, epsilon)
            .with_realizations(realizations, base_seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SystemConfig {
    Tops(TopsSystem),
    Ensemble(EnsembleSystem),
}

impl SystemConfig {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            SystemConfig::Tops(t) => t.dims(),
            SystemConfig::Ensemble(e) => (e.n1, e.n2),
        }
    }
}

/// Uniform histogram bins on [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<f64>>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<BinSpec>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    /// Off-diagonal pairs drawn per realization in omega experiments.
    #[serde(default = "default_pairs")]
    pub omega_pairs: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_alphas() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0]
}
fn default_realizations() -> usize {
    1
}
fn default_pairs() -> usize {
    1
}
fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, system: SystemConfig) -> Self {
        Self {
            kind,
            system,
            lambda_grid: None,
            epsilon_grid: None,
            alphas: default_alphas(),
            bins: None,
            base_seed: 0,
            realizations: 1,
            omega_pairs: 1,
            max_dim: DEFAULT_MAX_DIM,
            output: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fills in kind-specific defaults so that the echoed configuration is complete.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        if c.bins.is_none() {
            c.bins = match c.kind {
                ExperimentKind::Spacing | ExperimentKind::SchmidtDistribution => {
                    Some(BinSpec { lo: 0.0, hi: 5.0, count: 50 })
                }
                ExperimentKind::OmegaDistribution => Some(BinSpec { lo: 0.0, hi: 10.0, count: 50 }),
                _ => None,
            };
        }
        c
    }

    /// Grid values and whether they are Λ (true) or ε (false).
    pub fn grid(&self) -> Result<(&[f64], bool)> {
        match (&self.lambda_grid, &self.epsilon_grid) {
            (Some(l), None) => Ok((l, true)),
            (None, Some(e)) => Ok((e, false)),
            _ => Err(Error::Config("exactly one of lambda_grid and epsilon_grid must be given".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (grid, is_lambda) = self.grid()?;
        if grid.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if grid.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Config("grid values must be finite and non-negative".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("grid must be strictly ascending".into()));
        }
        if self.alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::Config("alphas must be positive".into()));
        }
        if self.realizations == 0 || self.omega_pairs == 0 {
            return Err(Error::Config("realizations and omega_pairs must be positive".into()));
        }
        if let Some(b) = self.bins {
            if b.count == 0 || !(b.hi > b.lo) {
                return Err(Error::Config(format!("bad bins {b:?}")));
            }
        }
        match self.system {
            SystemConfig::Tops(t) => {
                if self.kind.needs_ensemble() {
                    return Err(Error::Config(format!("{:?} needs an ensemble system", self.kind)));
                }
                t.params(0.0)?;
            }
            SystemConfig::Ensemble(e) => {
                if self.kind.needs_tops() {
                    return Err(Error::Config(format!("{:?} needs a kicked-top system", self.kind)));
                }
                if is_lambda {
                    return Err(Error::Config("ensemble systems take an epsilon_grid".into()));
                }
                e.spec(0.0, self.realizations, self.base_seed).validate()?;
            }
        }
        let (n1, n2) = self.system.dims();
        if n1 * n2 > self.max_dim {
            return Err(Error::Config(format!(
                "dimension {n1}x{n2} = {} exceeds max_dim = {}; raise max_dim to run it",
                n1 * n2,
                self.max_dim
            )));
        }
        Ok(())
    }
}
