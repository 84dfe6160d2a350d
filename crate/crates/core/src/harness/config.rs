use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::GridFamily;
use crate::instance::BanditInstance;
use crate::policies::PolicyKind;

pub const DEFAULT_HORIZON: u64 = 50_000;
pub const DEFAULT_ARMS: usize = 3;
pub const DEFAULT_BATCHES: usize = 3;
pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_OPTIMAL_MEAN: f64 = 0.6;
pub const DEFAULT_SUBOPTIMAL_MEAN: f64 = 0.5;
pub const DEFAULT_REPS: usize = 200;
pub const DEFAULT_SEED: u64 = 1234;

/// Arm means at a sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    /// Arm 1 has mean `optimal`, all others `suboptimal`; follows `K` when it is swept.
    TwoLevel { optimal: f64, suboptimal: f64 },
    /// Fixed means; `K` must equal their number.
    Explicit { means: Vec<f64> },
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec::TwoLevel {
            optimal: DEFAULT_OPTIMAL_MEAN,
            suboptimal: DEFAULT_SUBOPTIMAL_MEAN,
        }
    }
}

impl InstanceSpec {
    pub fn build(&self, arms: usize) -> Result<BanditInstance> {
        match self {
            InstanceSpec::TwoLevel { optimal, suboptimal } => {
                BanditInstance::two_level(arms, *optimal, *suboptimal)
            }
            InstanceSpec::Explicit { means } if means.len() == arms => {
                BanditInstance::new(means.clone())
            }
            InstanceSpec::Explicit { means } => Err(Error::Config(format!(
                "explicit instance has {} arms but K = {arms}",
                means.len()
            ))),
        }
    }
}

/// One curve: a policy run on one grid family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub policy: PolicyKind,
    pub grid: GridFamily,
}

impl Series {
    pub fn new(policy: PolicyKind, grid: GridFamily) -> Self {
        Self { policy, grid }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "axis", content = "values", rename_all = "lowercase")]
pub enum Sweep {
    #[default]
    None,
    #[serde(rename = "M")]
    Batches(Vec<usize>),
    #[serde(rename = "K")]
    Arms(Vec<usize>),
    #[serde(rename = "T")]
    Horizon(Vec<u64>),
}

impl Sweep {
    pub fn axis(&self) -> Option<&'static str> {
        match self {
            Sweep::None => None,
            Sweep::Batches(_) => Some("M"),
            Sweep::Arms(_) => Some("K"),
            Sweep::Horizon(_) => Some("T"),
        }
    }

    fn values(&self) -> Vec<u64> {
        match self {
            Sweep::None => Vec::new(),
            Sweep::Batches(v) | Sweep::Arms(v) => v.iter().map(|&x| x as u64).collect(),
            Sweep::Horizon(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub series: Vec<Series>,
    pub arms: usize,
    pub batches: usize,
    pub horizon: u64,
    pub gamma: f64,
    pub instance: InstanceSpec,
    pub reps: usize,
    pub base_seed: u64,
    pub sweep: Sweep,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment_id: "custom".into(),
            series: vec![Series::new(PolicyKind::Base, GridFamily::Minimax)],
            arms: DEFAULT_ARMS,
            batches: DEFAULT_BATCHES,
            horizon: DEFAULT_HORIZON,
            gamma: DEFAULT_GAMMA,
            instance: InstanceSpec::default(),
            reps: DEFAULT_REPS,
            base_seed: DEFAULT_SEED,
            sweep: Sweep::None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.series.is_empty() {
            return Err(Error::Config("no policy series configured".into()));
        }
        if self.experiment_id.is_empty() || self.experiment_id.contains([',', '"', '\n']) {
            return Err(Error::Config(format!(
                "experiment id `{}` must be nonempty and CSV-safe",
                self.experiment_id
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("γ must be positive, got {}", self.gamma)));
        }
        if self.arms < 2 || self.batches < 1 || self.horizon < 1 {
            return Err(Error::Config(format!(
                "need K ≥ 2, M ≥ 1, T ≥ 1 (K = {}, M = {}, T = {})",
                self.arms, self.batches, self.horizon
            )));
        }
        let values = self.sweep.values();
        if self.sweep != Sweep::None {
            if values.is_empty() || values.contains(&0) {
                return Err(Error::Config("sweep values must be positive".into()));
            }
            if values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("sweep values must be strictly increasing".into()));
            }
        }
        if matches!(self.sweep, Sweep::Arms(ref v) if v.contains(&1)) {
            return Err(Error::Config("K must be at least 2".into()));
        }
        if let InstanceSpec::Explicit { means } = &self.instance {
            if matches!(self.sweep, Sweep::Arms(_)) {
                return Err(Error::Config("an explicit instance cannot follow a K sweep".into()));
            }
            if means.len() != self.arms {
                return Err(Error::Config(format!(
                    "explicit instance has {} arms but K = {}",
                    means.len(),
                    self.arms
                )));
            }
        }
        Ok(())
    }
}

/// The four regret-curve experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
}

pub const HORIZON_SWEEP: [u64; 5] = [1_000, 3_000, 10_000, 30_000, 50_000];

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1a, Preset::Fig1b, Preset::Fig1c, Preset::Fig1d];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig1c => "fig1c",
            Preset::Fig1d => "fig1d",
        }
    }

    /// Preset configuration at the default instance and parameters.
    pub fn config(self, reps: usize, base_seed: u64) -> ExperimentConfig {
        let grids = [GridFamily::Minimax, GridFamily::Geometric, GridFamily::Arithmetic];
        let mut series: Vec<Series> = grids.iter().map(|&g| Series::new(PolicyKind::Base, g)).collect();
        series.push(Series::new(PolicyKind::Ucb1, GridFamily::Sequential));
        let base = ExperimentConfig {
            experiment_id: self.as_str().into(),
            series,
            reps,
            base_seed,
            ..ExperimentConfig::default()
        };
        match self {
            Preset::Fig1a => ExperimentConfig {
                sweep: Sweep::Batches(vec![2, 3, 4, 5, 6]),
                ..base
            },
            Preset::Fig1b => ExperimentConfig {
                sweep: Sweep::Arms((2..=10).collect()),
                ..base
            },
            Preset::Fig1c => ExperimentConfig {
                sweep: Sweep::Horizon(HORIZON_SWEEP.to_vec()),
                ..base
            },
            Preset::Fig1d => ExperimentConfig {
                series: vec![
                    Series::new(PolicyKind::Base, GridFamily::Minimax),
                    Series::new(PolicyKind::Etc, GridFamily::Minimax),
                ],
                arms: 2,
                sweep: Sweep::Horizon(HORIZON_SWEEP.to_vec()),
                ..base
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}`")))
    }
}
