use serde::{Deserialize, Serialize};

use crate::bounds::suites::{run_inequality_suites, Checkers, SuiteReport};
use crate::bounds::{make_static_star_family, regret_floor_check, FloorReport};
use crate::error::{Error, Result};
use crate::grids::validate_grid;
use crate::policies::{PolicyKind, PolicySpec};
use crate::simulator::rng::derive_seed;
use crate::simulator::{Execution, SAMPLER_ID};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsSuiteConfig {
    /// Random trials per inequality suite.
    pub trials: usize,
    pub seed: u64,
    /// Replications per instance in each regret floor check.
    pub floor_reps: usize,
    pub floor_delta: f64,
    pub floor_grid: Vec<u64>,
    pub gamma: f64,
}

impl BoundsSuiteConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            floor_reps: 2000,
            floor_delta: 0.1,
            floor_grid: vec![10, 100],
            gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub sampler: String,
    pub version: String,
    pub config: BoundsSuiteConfig,
    pub suites: Vec<SuiteReport>,
    pub floors: Vec<FloorReport>,
    pub pass: bool,
}

/// Inequality suites with the real checkers plus a regret floor check per policy.
pub fn run_bounds_suite(trials: usize, seed: u64) -> Result<BoundsReport> {
    run_bounds_suite_with(&BoundsSuiteConfig::new(trials, seed), &Checkers::default())
}

/// Every policy is checked on the three-armed star family, except ETC, which
/// only exists for two arms and runs on the two-armed family.
pub fn run_bounds_suite_with(cfg: &BoundsSuiteConfig, checkers: &Checkers) -> Result<BoundsReport> {
    if cfg.trials == 0 {
        return Err(Error::Config("bounds suite needs at least one trial".into()));
    }
    if cfg.floor_reps == 0 {
        return Err(Error::Config("regret floor check needs at least one replication".into()));
    }
    let suites = run_inequality_suites(cfg.trials, cfg.seed, checkers);

    let horizon = *cfg
        .floor_grid
        .last()
        .ok_or_else(|| Error::Config("empty regret floor grid".into()))?;
    let mut floors = Vec::new();
    for (i, kind) in PolicyKind::ALL.into_iter().enumerate() {
        let arms = if kind == PolicyKind::Etc { 2 } else { 3 };
        let family = make_static_star_family(arms, cfg.floor_delta)?;
        let grid = validate_grid(&cfg.floor_grid, horizon, arms)?;
        let spec = PolicySpec::new(kind, cfg.gamma);
        let seed = derive_seed(cfg.seed, &[0xF1, i as u64]);
        floors.push(regret_floor_check(&spec, &family, &grid, cfg.floor_reps, seed, Execution::Parallel)?);
    }

    let pass = suites.iter().all(|s| s.pass) && floors.iter().all(FloorReport::pass);
    Ok(BoundsReport {
        sampler: SAMPLER_ID.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        suites,
        floors,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{check_tree_testing_bound, FiniteTestProblem, Relation, Witness};

    fn quick(trials: usize) -> BoundsSuiteConfig {
        BoundsSuiteConfig {
            floor_reps: 200,
            ..BoundsSuiteConfig::new(trials, 9)
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(matches!(run_bounds_suite(0, 1), Err(Error::Config(_))));
    }

    #[test]
    fn passes_with_real_checkers() {
        let r = run_bounds_suite_with(&quick(500), &Checkers::default()).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.suites.len(), 3);
        let names: Vec<_> = r.floors.iter().map(|f| (f.policy.as_str(), f.arms)).collect();
        assert_eq!(names, vec![("base", 3), ("ucb1", 3), ("etc", 2), ("uniform", 3)]);
    }

    #[test]
    fn corrupted_checker_is_reported() {
        // Claims Bayes error ≤ the bound minus one: false for every input.
        fn corrupted(p: &FiniteTestProblem) -> Result<Witness> {
            let w = check_tree_testing_bound(p)?;
            Ok(Witness::new(w.lemma, w.inputs_digest, w.lhs, None, w.rhs - 1.0, Relation::Le, w.slack))
        }
        let checkers = Checkers {
            tree_testing: corrupted,
            ..Checkers::default()
        };
        let r = run_bounds_suite_with(&quick(20), &checkers).unwrap();
        assert!(!r.pass);
        let bad = &r.suites[2];
        assert!(!bad.pass);
        assert_eq!(bad.violations, 20);
        let w = &bad.first_violation.as_ref().unwrap().witness;
        assert_eq!(w.inputs_digest.len(), 16);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"pass\":false"));
        assert!(r.suites[..2].iter().all(|s| s.pass));
    }
}
