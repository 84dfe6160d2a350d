use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::Observation;

/// Mutable per-episode bookkeeping shared by the batch policies.
///
/// `counted_pulls`/`reward_sums` only see pulls flagged as counted; extra
/// rounding pulls land in `total_pulls` alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    active: Vec<usize>,
    counted_pulls: Vec<u64>,
    reward_sums: Vec<f64>,
    total_pulls: Vec<u64>,
    committed: Option<usize>,
}

impl PolicyState {
    pub fn new(arms: usize) -> Self {
        Self {
            active: (0..arms).collect(),
            counted_pulls: vec![0; arms],
            reward_sums: vec![0.0; arms],
            total_pulls: vec![0; arms],
            committed: None,
        }
    }

    /// Builds a state from raw statistics. Every arm is active.
    pub fn from_stats(counted_pulls: Vec<u64>, reward_sums: Vec<f64>) -> Self {
        let arms = counted_pulls.len();
        assert_eq!(arms, reward_sums.len());
        Self {
            active: (0..arms).collect(),
            total_pulls: counted_pulls.clone(),
            counted_pulls,
            reward_sums,
            committed: None,
        }
    }

    pub fn reset(&mut self) {
        *self = Self::new(self.num_arms());
    }

    pub fn num_arms(&self) -> usize {
        self.counted_pulls.len()
    }

    /// Active arms in increasing index order; never empty.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn set_active(&mut self, active: Vec<usize>) -> Result<()> {
        if active.is_empty() {
            return Err(Error::Invariant("active set would become empty".into()));
        }
        debug_assert!(active.windows(2).all(|w| w[0] < w[1]));
        self.active = active;
        Ok(())
    }

    pub fn counted_pulls(&self) -> &[u64] {
        &self.counted_pulls
    }

    pub fn total_pulls(&self) -> &[u64] {
        &self.total_pulls
    }

    pub fn reward_sums(&self) -> &[f64] {
        &self.reward_sums
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }

    pub fn commit(&mut self, arm: usize) {
        self.committed = Some(arm);
    }

    /// `Ȳ^i`, defined only once the arm has counted pulls.
    pub fn mean(&self, arm: usize) -> Option<f64> {
        match self.counted_pulls[arm] {
            0 => None,
            n => Some(self.reward_sums[arm] / n as f64),
        }
    }

    pub fn record(&mut self, obs: &[Observation]) {
        for o in obs {
            self.total_pulls[o.arm] += 1;
            if o.counted {
                self.counted_pulls[o.arm] += 1;
                self.reward_sums[o.arm] += o.reward;
            }
        }
    }

    /// The counted-pull total `τ` shared by every active arm.
    pub fn common_counted(&self) -> Result<u64> {
        let tau = self.counted_pulls[self.active[0]];
        match self.active.iter().find(|&&a| self.counted_pulls[a] != tau) {
            None => Ok(tau),
            Some(&a) => Err(Error::Invariant(format!(
                "active arms have unequal counted pulls ({} for arm {} vs {} for arm {})",
                tau,
                self.active[0] + 1,
                self.counted_pulls[a],
                a + 1
            ))),
        }
    }

    /// Active arm with the largest empirical mean, lowest index on ties.
    /// Falls back to the lowest active index when no active arm has data.
    pub fn best_active(&self) -> usize {
        let mut best = self.active[0];
        let mut best_mean = f64::NEG_INFINITY;
        for &arm in &self.active {
            if let Some(m) = self.mean(arm) {
                if m > best_mean {
                    best = arm;
                    best_mean = m;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(arm: usize, reward: f64, counted: bool) -> Observation {
        Observation { arm, reward, counted }
    }

    #[test]
    fn records_counted_and_uncounted() {
        let mut s = PolicyState::new(2);
        s.record(&[obs(0, 1.0, true), obs(0, 5.0, false), obs(1, 2.0, true)]);
        assert_eq!(s.counted_pulls(), &[1, 1]);
        assert_eq!(s.total_pulls(), &[2, 1]);
        assert_eq!(s.mean(0), Some(1.0));
        assert_eq!(s.common_counted().unwrap(), 1);
    }

    #[test]
    fn mean_undefined_without_pulls() {
        let s = PolicyState::new(3);
        assert_eq!(s.mean(1), None);
        assert_eq!(s.best_active(), 0);
    }

    #[test]
    fn unequal_counts_flagged() {
        let s = PolicyState::from_stats(vec![2, 3], vec![0.0, 0.0]);
        assert!(matches!(s.common_counted(), Err(Error::Invariant(_))));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let s = PolicyState::from_stats(vec![2, 2, 2], vec![1.0, 1.2, 1.2]);
        assert_eq!(s.best_active(), 1);
    }

    #[test]
    fn active_set_cannot_empty() {
        let mut s = PolicyState::new(2);
        assert!(s.set_active(vec![]).is_err());
        assert_eq!(s.active(), &[0, 1]);
    }
}
