//! Batch-constrained sampling policies.
//!
//! A policy sees the world one batch at a time: the simulator asks for a
//! plan covering `(t_{m−1}, t_m]`, draws every reward of that plan, and only
//! then hands the rewards back through [`BatchPolicy::observe_batch`]. The
//! plan for batch `m` can therefore depend only on batches `1..m−1`.

mod base;
mod etc;
mod state;
mod ucb1;
mod uniform;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use base::{base_eliminate, base_plan_batch, elimination_threshold, BaseConfig, BasePolicy};
pub use etc::{etc_decision, EtcPolicy, EtcThreshold};
pub use state::PolicyState;
pub use ucb1::{ucb1_step, Ucb1Policy};
pub use uniform::UniformPolicy;

/// Pulls of one arm inside a batch plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub arm: usize,
    /// Pulls whose rewards enter the arm's running average.
    pub counted: u64,
    /// Rounding pulls whose rewards are ignored by the average.
    pub uncounted: u64,
}

impl PlanEntry {
    pub fn total(&self) -> u64 {
        self.counted + self.uncounted
    }
}

/// Ordered pulls filling one batch. Entries are executed in order, counted
/// pulls of an entry before its uncounted ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BatchPlan {
    entries: Vec<PlanEntry>,
}

impl BatchPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Appends pulls, merging with the previous entry when the arm repeats
    /// and the previous entry has no uncounted tail.
    pub fn push(&mut self, arm: usize, counted: u64, uncounted: u64) {
        if counted + uncounted == 0 {
            return;
        }
        if let Some(last) = self.entries.last_mut() {
            if last.arm == arm && last.uncounted == 0 {
                last.counted += counted;
                last.uncounted = uncounted;
                return;
            }
        }
        self.entries.push(PlanEntry {
            arm,
            counted,
            uncounted,
        });
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(PlanEntry::total).sum()
    }

    /// Total pulls per arm.
    pub fn per_arm(&self, arms: usize) -> Vec<u64> {
        let mut out = vec![0; arms];
        for e in &self.entries {
            out[e.arm] += e.total();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub arm: usize,
    pub reward: f64,
    pub counted: bool,
}

/// Position of the batch being planned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchContext {
    /// 0-based batch index `m − 1`.
    pub index: usize,
    /// `t_{m−1}`; the batch covers times `start + 1 ..= start + len`.
    pub start: u64,
    pub len: u64,
    pub num_batches: usize,
    pub horizon: u64,
}

impl BatchContext {
    pub fn is_last(&self) -> bool {
        self.index + 1 == self.num_batches
    }
}

pub trait BatchPolicy: Send {
    fn name(&self) -> &'static str;

    /// Returns the policy to its start-of-episode state.
    fn reset(&mut self);

    /// Fills `plan` (cleared by the caller) with exactly `ctx.len` pulls.
    fn plan_batch(&mut self, ctx: &BatchContext, plan: &mut BatchPlan) -> Result<()>;

    /// Receives the rewards of the batch just planned, in plan order.
    fn observe_batch(&mut self, ctx: &BatchContext, observations: &[Observation]) -> Result<()>;

    fn state(&self) -> Option<&PolicyState> {
        None
    }
}

/// Splits `len` pulls evenly over `arms`: `⌊len/n⌋` counted pulls each and
/// one uncounted extra for each of the `len mod n` lowest-indexed arms.
pub(crate) fn equal_split(arms: &[usize], len: u64, plan: &mut BatchPlan) {
    let n = arms.len() as u64;
    let q = len / n;
    let r = len % n;
    for (i, &arm) in arms.iter().enumerate() {
        plan.push(arm, q, u64::from((i as u64) < r));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Base,
    Ucb1,
    Etc,
    Uniform,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Base,
        PolicyKind::Ucb1,
        PolicyKind::Etc,
        PolicyKind::Uniform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Base => "base",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Etc => "etc",
            PolicyKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(PolicyKind::Base),
            "ucb1" => Ok(PolicyKind::Ucb1),
            "etc" => Ok(PolicyKind::Etc),
            "uniform" => Ok(PolicyKind::Uniform),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }
}

/// Everything needed to instantiate a fresh policy for one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub gamma: f64,
    pub etc_threshold: EtcThreshold,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, gamma: f64) -> Self {
        Self {
            kind,
            gamma,
            etc_threshold: EtcThreshold::Batched,
        }
    }

    pub fn build(&self, arms: usize, horizon: u64) -> Result<Box<dyn BatchPolicy>> {
        Ok(match self.kind {
            PolicyKind::Base => Box::new(BasePolicy::new(arms, horizon, BaseConfig::new(self.gamma)?)),
            PolicyKind::Ucb1 => Box::new(Ucb1Policy::new(arms)),
            PolicyKind::Etc => Box::new(EtcPolicy::new(arms, horizon, self.etc_threshold)?),
            PolicyKind::Uniform => Box::new(UniformPolicy::new(arms)),
        })
    }
}
