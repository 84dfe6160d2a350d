use crate::error::Result;
use crate::policies::{BatchContext, BatchPlan, BatchPolicy, Observation, PolicyState};

/// Round-robin over all arms for the whole horizon: arm `(t − 1) mod K` at time `t`.
#[derive(Debug, Clone)]
pub struct UniformPolicy {
    state: PolicyState,
}

impl UniformPolicy {
    pub fn new(arms: usize) -> Self {
        Self {
            state: PolicyState::new(arms),
        }
    }
}

impl BatchPolicy for UniformPolicy {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn reset(&mut self) {
        self.state.reset();
    }

    fn plan_batch(&mut self, ctx: &BatchContext, plan: &mut BatchPlan) -> Result<()> {
        let arms = self.state.num_arms() as u64;
        for t in ctx.start..ctx.start + ctx.len {
            plan.push((t % arms) as usize, 1, 0);
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
