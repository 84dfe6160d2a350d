//! Seeded Gaussian environment and the batch execution loop.

mod episode;
pub mod normal;
pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::Grid;
use crate::instance::BanditInstance;
use crate::policies::PolicySpec;

pub use episode::{run_episode, run_episode_with, GaussianRewards, RewardSource, TraceDetail};
pub use normal::SAMPLER_ID;

/// Sample mean and standard error of realized regrets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub reps: usize,
    /// Per-replication regrets in replication order.
    pub regrets: Vec<f64>,
}

impl RegretEstimate {
    /// Sums in index order. With a single replication the standard error is 0.
    pub fn from_regrets(regrets: Vec<f64>) -> Self {
        let reps = regrets.len();
        let n = reps as f64;
        let mean = regrets.iter().sum::<f64>() / n;
        let stderr = if reps < 2 {
            0.0
        } else {
            let ss: f64 = regrets.iter().map(|r| (r - mean) * (r - mean)).sum();
            (ss / (n - 1.0)).sqrt() / n.sqrt()
        };
        Self {
            mean,
            stderr,
            reps,
            regrets,
        }
    }
}

/// How replications are scheduled. Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Fan out on the current rayon pool.
    #[default]
    Parallel,
}

/// Seed of replication `rep` under `base_seed`.
pub fn replication_seed(base_seed: u64, rep: usize) -> u64 {
    rng::derive_seed(base_seed, &[rep as u64])
}

/// Runs `reps` independent episodes; replication `r` uses [`replication_seed`]`(base_seed, r)`.
pub fn mean_regret(
    spec: &PolicySpec,
    grid: &Grid,
    instance: &BanditInstance,
    reps: usize,
    base_seed: u64,
    execution: Execution,
) -> Result<RegretEstimate> {
    if reps == 0 {
        return Err(Error::Config("at least one replication is required".into()));
    }
    let arms = instance.num_arms();
    let horizon = grid.horizon();
    // Fail fast on an unbuildable policy before fanning out.
    spec.build(arms, horizon)?;

    let one = |rep: usize| -> Result<f64> {
        let mut policy = spec.build(arms, horizon)?;
        let seed = replication_seed(base_seed, rep);
        let trace = run_episode(policy.as_mut(), grid, instance, seed, TraceDetail::Summary)?;
        Ok(trace.realized_regret)
    };
    let regrets: Result<Vec<f64>> = match execution {
        Execution::Sequential => (0..reps).map(one).collect(),
        Execution::Parallel => (0..reps).into_par_iter().map(one).collect(),
    };
    Ok(RegretEstimate::from_regrets(regrets?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{make_arithmetic_grid, make_minimax_grid};
    use crate::policies::PolicyKind;

    #[test]
    fn estimate_statistics() {
        let e = RegretEstimate::from_regrets(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        // sd = √(5/3), se = sd / 2
        assert!((e.stderr - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
        let single = RegretEstimate::from_regrets(vec![7.5]);
        assert_eq!((single.mean, single.stderr), (7.5, 0.0));
    }

    #[test]
    fn uniform_has_zero_stderr() {
        let inst = BanditInstance::new(vec![0.6, 0.5, 0.5]).unwrap();
        let grid = make_arithmetic_grid(300, 3, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Uniform, 1.0);
        let e = mean_regret(&spec, &grid, &inst, 20, 3, Execution::Parallel).unwrap();
        assert_eq!(e.stderr, 0.0);
        assert!((e.mean - 20.0).abs() < 1e-9);
    }

    #[test]
    fn zero_gap_instance_has_zero_regret() {
        let inst = BanditInstance::new(vec![0.5, 0.5, 0.5]).unwrap();
        let grid = make_minimax_grid(1000, 3, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Base, 1.0);
        let e = mean_regret(&spec, &grid, &inst, 10, 3, Execution::Parallel).unwrap();
        assert_eq!(e.mean, 0.0);
    }

    #[test]
    fn execution_mode_does_not_matter() {
        let inst = BanditInstance::new(vec![0.6, 0.5, 0.5]).unwrap();
        let grid = make_minimax_grid(5000, 3, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Base, 1.0);
        let a = mean_regret(&spec, &grid, &inst, 32, 11, Execution::Sequential).unwrap();
        let b = mean_regret(&spec, &grid, &inst, 32, 11, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unsupported_policy_fails_fast() {
        let inst = BanditInstance::new(vec![0.6, 0.5, 0.5]).unwrap();
        let grid = make_minimax_grid(100, 2, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Etc, 1.0);
        assert!(matches!(
            mean_regret(&spec, &grid, &inst, 4, 0, Execution::Parallel),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn zero_reps_rejected() {
        let inst = BanditInstance::new(vec![0.6, 0.5]).unwrap();
        let grid = make_minimax_grid(100, 2, 2).unwrap();
        let spec = PolicySpec::new(PolicyKind::Base, 1.0);
        assert!(mean_regret(&spec, &grid, &inst, 0, 0, Execution::Parallel).is_err());
    }
}
