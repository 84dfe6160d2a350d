//! Two-armed batched explore-then-commit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::{
    elimination_threshold, equal_split, BatchContext, BatchPlan, BatchPolicy, Observation,
    PolicyState,
};

/// Commitment test applied at each exploration batch end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EtcThreshold {
    /// `√(4·ln(T/τ)/τ)`.
    Batched,
    /// `√(γ·ln(2T)/τ)`, the BaSE elimination threshold at `K = 2`.
    Elimination { gamma: f64 },
}

impl EtcThreshold {
    pub fn value(&self, horizon: u64, tau: u64) -> f64 {
        match *self {
            EtcThreshold::Batched => {
                let tau_f = tau as f64;
                (4.0 * (horizon as f64 / tau_f).ln() / tau_f).sqrt()
            }
            EtcThreshold::Elimination { gamma } => elimination_threshold(gamma, horizon, 2, tau),
        }
    }
}

/// Returns the arm to commit to, if any, given both empirical means after
/// `tau` counted pulls each. `forced` commits to the empirical leader
/// (arm 1 on ties) regardless of the threshold.
pub fn etc_decision(
    means: [f64; 2],
    tau: u64,
    horizon: u64,
    threshold: &EtcThreshold,
    forced: bool,
) -> Option<usize> {
    let leader = usize::from(means[1] > means[0]);
    if forced || (means[0] - means[1]).abs() >= threshold.value(horizon, tau) {
        Some(leader)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct EtcPolicy {
    threshold: EtcThreshold,
    horizon: u64,
    state: PolicyState,
}

impl EtcPolicy {
    pub fn new(arms: usize, horizon: u64, threshold: EtcThreshold) -> Result<Self> {
        if arms != 2 {
            return Err(Error::Unsupported(format!(
                "ETC is defined for two arms only, got K = {arms}"
            )));
        }
        Ok(Self {
            threshold,
            horizon,
            state: PolicyState::new(2),
        })
    }
}

impl BatchPolicy for EtcPolicy {
    fn name(&self) -> &'static str {
        "etc"
    }

    fn reset(&mut self) {
        self.state.reset();
    }

    fn plan_batch(&mut self, ctx: &BatchContext, plan: &mut BatchPlan) -> Result<()> {
        if self.state.committed().is_none() && ctx.is_last() {
            // Only reachable with a single batch: nothing observed.
            let arm = self.state.best_active();
            self.state.commit(arm);
            self.state.set_active(vec![arm])?;
        }
        match self.state.committed() {
            Some(arm) => plan.push(arm, ctx.len, 0),
            None => equal_split(self.state.active(), ctx.len, plan),
        }
        Ok(())
    }

    fn observe_batch(&mut self, ctx: &BatchContext, observations: &[Observation]) -> Result<()> {
        self.state.record(observations);
        if self.state.committed().is_some() || ctx.is_last() {
            return Ok(());
        }
        let tau = self.state.common_counted()?;
        if tau == 0 {
            return Err(Error::Invariant("ETC batch produced no counted pulls".into()));
        }
        let means = [
            self.state.mean(0).expect("tau > 0"),
            self.state.mean(1).expect("tau > 0"),
        ];
        let forced = ctx.index + 2 == ctx.num_batches;
        if let Some(arm) = etc_decision(means, tau, self.horizon, &self.threshold, forced) {
            self.state.commit(arm);
            self.state.set_active(vec![arm])?;
        }
        Ok(())
    }

    fn state(&self) -> Option<&PolicyState> {
        Some(&self.state)
    }
}
