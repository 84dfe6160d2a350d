//! Gaussian bandit instances.
//!
//! Arm `i` yields i.i.d. `N(μ_i, 1)` rewards. Arms are 0-based here and
//! 1-based in every user-facing output (CSV, JSON, CLI).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    means: Vec<f64>,
    optimal_mean: f64,
    optimal_arm: usize,
}

impl BanditInstance {
    /// Builds an instance from arm means. Requires `K ≥ 2` finite means.
    pub fn new(means: Vec<f64>) -> Result<Self> {
        if means.len() < 2 {
            return Err(Error::DegenerateInstance(format!(
                "need at least 2 arms, got {}",
                means.len()
            )));
        }
        if let Some(i) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::DegenerateInstance(format!(
                "mean of arm {} is not finite",
                i + 1
            )));
        }
        // Lowest index wins ties.
        let (optimal_arm, optimal_mean) = means
            .iter()
            .copied()
            .enumerate()
            .fold((0, means[0]), |best, (i, m)| if m > best.1 { (i, m) } else { best });
        Ok(Self {
            means,
            optimal_mean,
            optimal_arm,
        })
    }

    /// `K` arms; arm 0 has mean `optimal`, all others `suboptimal`.
    pub fn two_level(k: usize, optimal: f64, suboptimal: f64) -> Result<Self> {
        let mut means = vec![suboptimal; k];
        if let Some(first) = means.first_mut() {
            *first = optimal;
        }
        Self::new(means)
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    pub fn optimal_mean(&self) -> f64 {
        self.optimal_mean
    }

    /// Lowest-indexed arm attaining `μ*`.
    pub fn optimal_arm(&self) -> usize {
        self.optimal_arm
    }

    pub fn gap(&self, arm: usize) -> f64 {
        self.optimal_mean - self.means[arm]
    }

    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.means.iter().map(move |m| self.optimal_mean - m)
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps().fold(0.0, f64::max)
    }

    /// True when `arm` is the only arm attaining `μ*`.
    pub fn is_unique_optimum(&self) -> bool {
        self.means.iter().filter(|&&m| m == self.optimal_mean).count() == 1
    }
}

/// Checks `K ≥ 2` and, when `enforce_gap_cap` is set, `max_i Δ_i ≤ √K`.
pub fn validate_instance(instance: &BanditInstance, enforce_gap_cap: bool) -> Result<()> {
    let k = instance.num_arms();
    if k < 2 {
        return Err(Error::DegenerateInstance(format!("need at least 2 arms, got {k}")));
    }
    if enforce_gap_cap {
        let cap = (k as f64).sqrt();
        let max_gap = instance.max_gap();
        if max_gap > cap {
            return Err(Error::Constraint(format!(
                "max gap {max_gap} exceeds sqrt(K) = {cap}"
            )));
        }
    }
    Ok(())
}
