//! Batched successive elimination.
//!
//! Batches `1..M−1` pull every active arm equally often and, at each batch
//! end, drop every arm whose mean trails the best active mean by at least
//! `√(γ·ln(TK)/τ)`. Batch `M` commits to the best surviving arm.

use crate::error::{Error, Result};
use crate::policies::{equal_split, BatchContext, BatchPlan, BatchPolicy, Observation, PolicyState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseConfig {
    pub gamma: f64,
}

impl BaseConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be a positive real, got {gamma}")));
        }
        Ok(Self { gamma })
    }
}

/// `√(γ·ln(TK)/τ)`.
pub fn elimination_threshold(gamma: f64, horizon: u64, arms: usize, tau: u64) -> f64 {
    (gamma * (horizon as f64 * arms as f64).ln() / tau as f64).sqrt()
}

/// Plans one batch. Exploration batches split the batch evenly over the
/// active set; the last batch goes entirely to the best active arm (lowest
/// index on ties, arm 1 when nothing has been observed).
pub fn base_plan_batch(ctx: &BatchContext, state: &mut PolicyState, plan: &mut BatchPlan) {
    if ctx.is_last() {
        let arm = state.committed().unwrap_or_else(|| state.best_active());
        state.commit(arm);
        plan.push(arm, ctx.len, 0);
    } else {
        equal_split(state.active(), ctx.len, plan);
    }
}

/// Simultaneous elimination against a single `Ȳ^max`. Returns removed arms.
pub fn base_eliminate(
    state: &mut PolicyState,
    cfg: &BaseConfig,
    horizon: u64,
) -> Result<Vec<usize>> {
    let tau = state.common_counted()?;
    if tau == 0 {
        return Err(Error::Invariant(
            "elimination requested before any counted pull".into(),
        ));
    }
    let threshold = elimination_threshold(cfg.gamma, horizon, state.num_arms(), tau);
    let means: Vec<f64> = state
        .active()
        .iter()
        .map(|&a| state.mean(a).expect("tau > 0"))
        .collect();
    let y_max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let (mut keep, mut removed) = (Vec::new(), Vec::new());
    for (&arm, y) in state.active().iter().zip(means) {
        if y_max - y < threshold {
            keep.push(arm);
        } else {
            removed.push(arm);
        }
    }
    state.set_active(keep)?;
    Ok(removed)
}

#[derive(Debug, Clone)]
pub struct BasePolicy {
    cfg: BaseConfig,
    horizon: u64,
    state: PolicyState,
}

impl BasePolicy {
    pub fn new(arms: usize, horizon: u64, cfg: BaseConfig) -> Self {
        Self {
            cfg,
            horizon,
            state: PolicyState::new(arms),
        }
    }
}

impl BatchPolicy for BasePolicy {
    fn name(&self) -> &'static str {
        "base"
    }

    fn reset(&mut self) {
        self.state.reset();
    }

    fn plan_batch(&mut self, ctx: &BatchContext, plan: &mut BatchPlan) -> Result<()> {
        base_plan_batch(ctx, &mut self.state, plan);
        Ok(())
    }

    fn observe_batch(&mut self, ctx: &BatchContext, observations: &[Observation]) -> Result<()> {
        self.state.record(observations);
        if !ctx.is_last() && self.state.active().len() > 1 {
            base_eliminate(&mut self.state, &self.cfg, self.horizon)?;
        }
        Ok(())
    }

    fn state(&self) -> Option<&PolicyState> {
        Some(&self.state)
    }
}
