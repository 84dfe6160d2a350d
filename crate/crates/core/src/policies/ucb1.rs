//! UCB1 reference policy.
//!
//! On the sequential grid `{K, K+1, …, T}` this is exactly centralized UCB1:
//! the first batch is the `t ≤ K` round-robin and every later batch is one
//! step. On coarser grids the index is evaluated per step with means frozen
//! at the last batch boundary and pull counts including pulls already planned
//! in the current batch.

use crate::error::Result;
use crate::policies::{BatchContext, BatchPlan, BatchPolicy, Observation, PolicyState};

fn index_argmax(t: u64, counts: impl Iterator<Item = u64>, sums: &[f64], observed: &[u64]) -> usize {
    let log_t = (t as f64).ln();
    let mut best = 0;
    let mut best_index = f64::NEG_INFINITY;
    for (arm, n) in counts.enumerate() {
        let index = sums[arm] / observed[arm] as f64 + (2.0 * log_t / n as f64).sqrt();
        if index > best_index {
            best = arm;
            best_index = index;
        }
    }
    best
}

/// Arm (0-based) UCB1 pulls at 1-based time `t`: arm `t` during the initial
/// round-robin, then `argmax_i Ȳ^i + √(2·ln t / n_i)` with ties to the lowest index.
pub fn ucb1_step(t: u64, counts: &[u64], sums: &[f64]) -> usize {
    let arms = counts.len();
    if t <= arms as u64 {
        return (t - 1) as usize;
    }
    if let Some(unseen) = counts.iter().position(|&n| n == 0) {
        return unseen;
    }
    index_argmax(t, counts.iter().copied(), sums, counts)
}

#[derive(Debug, Clone)]
pub struct Ucb1Policy {
    state: PolicyState,
    planned: Vec<u64>,
}

impl Ucb1Policy {
    pub fn new(arms: usize) -> Self {
        Self {
            state: PolicyState::new(arms),
            planned: vec![0; arms],
        }
    }
}

impl BatchPolicy for Ucb1Policy {
    fn name(&self) -> &'static str {
        "ucb1"
    }

    fn reset(&mut self) {
        self.state.reset();
    }

    fn plan_batch(&mut self, ctx: &BatchContext, plan: &mut BatchPlan) -> Result<()> {
        let arms = self.state.num_arms();
        let counts = self.state.counted_pulls();
        let sums = self.state.reward_sums();
        if ctx.len == 1 {
            plan.push(ucb1_step(ctx.start + 1, counts, sums), 1, 0);
            return Ok(());
        }
        let all_seen = counts.iter().all(|&n| n > 0);
        self.planned.iter_mut().for_each(|p| *p = 0);
        for t in ctx.start + 1..=ctx.start + ctx.len {
            let arm = if t <= arms as u64 || !all_seen {
                ((t - 1) % arms as u64) as usize
            } else {
                let planned = &self.planned;
                index_argmax(t, counts.iter().zip(planned).map(|(n, p)| n + p), sums, counts)
            };
            self.planned[arm] += 1;
            plan.push(arm, 1, 0);
        }
        Ok(())
    }

    fn observe_batch(&mut self, _ctx: &BatchContext, observations: &[Observation]) -> Result<()> {
        self.state.record(observations);
        Ok(())
    }

    fn state(&self) -> Option<&PolicyState> {
        Some(&self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_robin_start() {
        assert_eq!(ucb1_step(2, &[1, 0, 0], &[0.3, 0.0, 0.0]), 1);
        assert_eq!(ucb1_step(1, &[0, 0, 0], &[0.0; 3]), 0);
    }

    #[test]
    fn equal_bonus_picks_higher_mean() {
        // 0.6 + √(2 ln 20 / 10) vs 0.5 + the same bonus
        assert_eq!(ucb1_step(20, &[10, 10], &[6.0, 5.0]), 0);
    }

    #[test]
    fn under_explored_arm_wins() {
        // 0.6 + 0.304 vs 0.5 + 3.038
        assert_eq!(ucb1_step(101, &[100, 1], &[60.0, 0.5]), 1);
    }

    #[test]
    fn ties_lowest_index() {
        assert_eq!(ucb1_step(10, &[3, 3, 3], &[1.0, 1.0, 1.0]), 0);
    }

    #[test]
    fn long_batch_spreads_pulls() {
        let mut p = Ucb1Policy::new(3);
        let ctx = BatchContext {
            index: 0,
            start: 0,
            len: 10,
            num_batches: 2,
            horizon: 100,
        };
        let mut plan = BatchPlan::new();
        p.plan_batch(&ctx, &mut plan).unwrap();
        assert_eq!(plan.total(), 10);
        assert_eq!(plan.per_arm(3), vec![4, 3, 3]);
    }
}
