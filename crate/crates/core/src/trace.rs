//! Per-replication records and regret accounting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::BanditInstance;

/// An arm leaving the active set at the end of a batch (both 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub arm: usize,
    pub batch: usize,
}

/// Policy state observed at the end of one batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySnapshot {
    pub batch: usize,
    /// Pulls of each arm inside this batch.
    pub batch_pulls: Vec<u64>,
    pub active: Vec<usize>,
    pub counted_pulls: Vec<u64>,
    pub total_pulls: Vec<u64>,
    pub committed: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub seed: u64,
    pub horizon: u64,
    /// Batch endpoints `t_1 < … < t_M = T`.
    pub grid_times: Vec<u64>,
    /// Arm pulled at each time step. Empty for summary-only traces.
    pub arm_pulled: Vec<usize>,
    /// Total pulls per arm over the horizon.
    pub pull_counts: Vec<u64>,
    pub eliminations: Vec<Elimination>,
    /// Empty for summary-only traces.
    pub boundaries: Vec<BoundarySnapshot>,
    pub realized_regret: f64,
}

impl RunTrace {
    /// 0-based batch index containing 1-based time `t`.
    pub fn batch_of(&self, t: u64) -> Option<usize> {
        if t == 0 || t > self.horizon {
            return None;
        }
        Some(self.grid_times.partition_point(|&end| end < t))
    }

    pub fn has_pulls(&self) -> bool {
        !self.arm_pulled.is_empty()
    }
}

/// `Σ_i n_i Δ_i` from per-arm pull counts.
pub fn regret_from_counts(counts: &[u64], instance: &BanditInstance) -> Result<f64> {
    if counts.len() != instance.num_arms() {
        return Err(Error::InvalidTrace(format!(
            "{} pull counts for a {}-armed instance",
            counts.len(),
            instance.num_arms()
        )));
    }
    Ok(counts
        .iter()
        .enumerate()
        .map(|(arm, &n)| n as f64 * instance.gap(arm))
        .sum())
}

/// Regret of an explicit pull sequence.
pub fn pulls_regret(arms: &[usize], instance: &BanditInstance) -> Result<f64> {
    let k = instance.num_arms();
    let mut counts = vec![0u64; k];
    for (t, &arm) in arms.iter().enumerate() {
        if arm >= k {
            return Err(Error::InvalidTrace(format!(
                "arm index {} at t = {} is outside [1, {k}]",
                arm + 1,
                t + 1
            )));
        }
        counts[arm] += 1;
    }
    regret_from_counts(&counts, instance)
}

/// `R_T = Σ_{t=1}^T (μ* − μ_{π_t})` recomputed from the trace's pulls.
pub fn compute_regret(trace: &RunTrace, instance: &BanditInstance) -> Result<f64> {
    if trace.arm_pulled.len() as u64 != trace.horizon {
        return Err(Error::InvalidTrace(format!(
            "trace holds {} pulls but the horizon is {}",
            trace.arm_pulled.len(),
            trace.horizon
        )));
    }
    pulls_regret(&trace.arm_pulled, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn trace_of(arms: Vec<usize>) -> RunTrace {
        let horizon = arms.len() as u64;
        RunTrace {
            seed: 0,
            horizon,
            grid_times: vec![horizon],
            arm_pulled: arms,
            pull_counts: vec![],
            eliminations: vec![],
            boundaries: vec![],
            realized_regret: 0.0,
        }
    }

    fn naive(arms: &[usize], inst: &BanditInstance) -> f64 {
        arms.iter().map(|&a| inst.optimal_mean() - inst.mean(a)).sum()
    }

    #[test]
    fn all_optimal_is_zero() {
        let inst = BanditInstance::new(vec![0.6, 0.5]).unwrap();
        assert_eq!(compute_regret(&trace_of(vec![0; 50]), &inst).unwrap(), 0.0);
    }

    #[test]
    fn ten_suboptimal_pulls() {
        let inst = BanditInstance::new(vec![0.6, 0.5]).unwrap();
        let mut arms = vec![1; 10];
        arms.extend(vec![0; 40]);
        assert_relative_eq!(compute_regret(&trace_of(arms), &inst).unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn uniform_three_arms() {
        let inst = BanditInstance::new(vec![0.6, 0.5, 0.5]).unwrap();
        let arms: Vec<usize> = (0..30).map(|t| t % 3).collect();
        let r = compute_regret(&trace_of(arms.clone()), &inst).unwrap();
        assert_relative_eq!(r, naive(&arms, &inst), max_relative = 1e-9);
        assert_relative_eq!(r, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn out_of_range_arm() {
        let inst = BanditInstance::new(vec![0.6, 0.5]).unwrap();
        assert!(matches!(
            compute_regret(&trace_of(vec![0, 2]), &inst),
            Err(Error::InvalidTrace(_))
        ));
    }

    #[test]
    fn length_mismatch() {
        let inst = BanditInstance::new(vec![0.6, 0.5]).unwrap();
        let mut t = trace_of(vec![0, 1]);
        t.horizon = 3;
        assert!(compute_regret(&t, &inst).is_err());
    }

    #[test]
    fn batch_lookup() {
        let mut t = trace_of(vec![0; 100]);
        t.grid_times = vec![21, 100];
        assert_eq!(t.batch_of(1), Some(0));
        assert_eq!(t.batch_of(21), Some(0));
        assert_eq!(t.batch_of(22), Some(1));
        assert_eq!(t.batch_of(100), Some(1));
        assert_eq!(t.batch_of(101), None);
    }

    fn instance_and_pulls() -> impl Strategy<Value = (Vec<f64>, Vec<usize>, Vec<usize>)> {
        (2usize..6).prop_flat_map(|k| {
            (
                prop::collection::vec(-2.0f64..2.0, k),
                prop::collection::vec(0..k, 0..60),
                prop::collection::vec(0..k, 0..60),
            )
        })
    }

    proptest! {
        #[test]
        fn regret_properties((means, a, b) in instance_and_pulls()) {
            let inst = BanditInstance::new(means).unwrap();
            let ra = pulls_regret(&a, &inst).unwrap();
            let rb = pulls_regret(&b, &inst).unwrap();
            let joined: Vec<usize> = a.iter().chain(&b).copied().collect();
            let rab = pulls_regret(&joined, &inst).unwrap();

            prop_assert!((rab - (ra + rb)).abs() <= 1e-9 * rab.abs().max(1.0));
            prop_assert!((ra - naive(&a, &inst)).abs() <= 1e-9 * ra.abs().max(1.0));
            prop_assert!(ra >= 0.0);
            prop_assert!(ra <= a.len() as f64 * inst.max_gap() + 1e-9);
            let all_zero_gap = a.iter().all(|&arm| inst.gap(arm) == 0.0);
            prop_assert_eq!(ra == 0.0, all_zero_gap);
        }
    }
}
