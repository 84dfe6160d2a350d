use crate::error::{Error, Result};
use crate::grids::Grid;
use crate::instance::BanditInstance;
use crate::policies::{BatchContext, BatchPlan, BatchPolicy, Observation};
use crate::simulator::normal::inverse_normal_cdf;
use crate::simulator::rng::{counter_uniform, stream_key};
use crate::trace::{regret_from_counts, BoundarySnapshot, Elimination, RunTrace};

/// Where rewards come from. The environment asks for a reward only after
/// the batch containing that pull has been fully planned.
pub trait RewardSource {
    /// Reward of the `pull`-th (0-based) pull of `arm`, which falls in 0-based `batch`.
    fn reward(&mut self, arm: usize, pull: u64, batch: usize) -> f64;
}

/// `N(μ_i, 1)` rewards; the `n`-th reward of arm `i` depends only on `(seed, i, n)`.
#[derive(Debug, Clone)]
pub struct GaussianRewards {
    means: Vec<f64>,
    keys: Vec<u64>,
}

impl GaussianRewards {
    pub fn new(instance: &BanditInstance, seed: u64) -> Self {
        Self {
            means: instance.means().to_vec(),
            keys: (0..instance.num_arms()).map(|arm| stream_key(seed, arm)).collect(),
        }
    }

    pub fn sample(&self, arm: usize, pull: u64) -> f64 {
        self.means[arm] + inverse_normal_cdf(counter_uniform(self.keys[arm], pull))
    }
}

impl RewardSource for GaussianRewards {
    #[inline]
    fn reward(&mut self, arm: usize, pull: u64, _batch: usize) -> f64 {
        self.sample(arm, pull)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceDetail {
    /// Regret, pull counts and eliminations only.
    #[default]
    Summary,
    /// Also the full pull sequence and a policy-state snapshot per batch.
    Full,
}

pub fn run_episode(
    policy: &mut dyn BatchPolicy,
    grid: &Grid,
    instance: &BanditInstance,
    seed: u64,
    detail: TraceDetail,
) -> Result<RunTrace> {
    let mut rewards = GaussianRewards::new(instance, seed);
    run_episode_with(policy, grid, instance, &mut rewards, seed, detail)
}

/// Batch loop: plan → sample → observe, for every batch of `grid` in order.
pub fn run_episode_with(
    policy: &mut dyn BatchPolicy,
    grid: &Grid,
    instance: &BanditInstance,
    rewards: &mut dyn RewardSource,
    seed: u64,
    detail: TraceDetail,
) -> Result<RunTrace> {
    let arms = instance.num_arms();
    let horizon = grid.horizon();
    let full = detail == TraceDetail::Full;

    policy.reset();
    let mut pulls = vec![0u64; arms];
    let mut plan = BatchPlan::new();
    let mut observations: Vec<Observation> = Vec::new();
    let mut arm_pulled = Vec::with_capacity(if full { horizon as usize } else { 0 });
    let mut boundaries = Vec::new();
    let mut eliminations = Vec::new();
    let mut active: Vec<usize> = policy.state().map(|s| s.active().to_vec()).unwrap_or_default();

    for m in 0..grid.num_batches() {
        let (start, end) = grid.batch_bounds(m);
        let ctx = BatchContext {
            index: m,
            start,
            len: end - start,
            num_batches: grid.num_batches(),
            horizon,
        };
        plan.clear();
        policy.plan_batch(&ctx, &mut plan)?;
        if plan.total() != ctx.len {
            return Err(Error::PolicyContract(format!(
                "{} planned {} pulls for batch {} of length {}",
                policy.name(),
                plan.total(),
                m + 1,
                ctx.len
            )));
        }

        let before = if full { pulls.clone() } else { Vec::new() };
        observations.clear();
        for entry in plan.entries() {
            if entry.arm >= arms {
                return Err(Error::PolicyContract(format!(
                    "{} planned arm {} of a {arms}-armed instance",
                    policy.name(),
                    entry.arm + 1
                )));
            }
            for i in 0..entry.total() {
                let reward = rewards.reward(entry.arm, pulls[entry.arm], m);
                pulls[entry.arm] += 1;
                observations.push(Observation {
                    arm: entry.arm,
                    reward,
                    counted: i < entry.counted,
                });
            }
            if full {
                arm_pulled.extend(std::iter::repeat_n(entry.arm, entry.total() as usize));
            }
        }
        policy.observe_batch(&ctx, &observations)?;

        if let Some(state) = policy.state() {
            if state.active().len() != active.len() {
                eliminations.extend(
                    active
                        .iter()
                        .filter(|a| !state.active().contains(a))
                        .map(|&arm| Elimination { arm, batch: m }),
                );
                active.clear();
                active.extend_from_slice(state.active());
            }
            if full {
                boundaries.push(BoundarySnapshot {
                    batch: m,
                    batch_pulls: pulls.iter().zip(&before).map(|(a, b)| a - b).collect(),
                    active: state.active().to_vec(),
                    counted_pulls: state.counted_pulls().to_vec(),
                    total_pulls: state.total_pulls().to_vec(),
                    committed: state.committed(),
                });
            }
        }
    }

    Ok(RunTrace {
        seed,
        horizon,
        grid_times: grid.times().to_vec(),
        realized_regret: regret_from_counts(&pulls, instance)?,
        arm_pulled,
        pull_counts: pulls,
        eliminations,
        boundaries,
    })
}
