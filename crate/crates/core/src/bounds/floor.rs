use serde::{Deserialize, Serialize};

use super::checks::{digest, Lemma, Relation, Witness};
use super::families::{FamilyKind, HardInstanceFamily};
use super::static_lb_value;
use crate::error::{Error, Result};
use crate::grids::Grid;
use crate::policies::PolicySpec;
use crate::simulator::rng::derive_seed;
use crate::simulator::{mean_regret, Execution, RegretEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorReport {
    pub policy: String,
    pub arms: usize,
    pub delta: f64,
    pub grid: Vec<u64>,
    pub reps: usize,
    /// Mean regret and standard error under each `P_i`.
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub bound: f64,
    /// `lhs = max_i mean_i`, `rhs = bound − 3·max_i stderr_i`.
    pub witness: Witness,
}

impl FloorReport {
    pub fn pass(&self) -> bool {
        self.witness.pass
    }
}

/// Runs `spec` on every member of a static star family and checks that the
/// worst member's mean regret clears the static lower bound, allowing three
/// standard errors of Monte-Carlo slack. Member `i` uses base seed
/// `derive_seed(base_seed, [i])`.
pub fn regret_floor_check(
    spec: &PolicySpec,
    family: &HardInstanceFamily,
    grid: &Grid,
    reps: usize,
    base_seed: u64,
    execution: Execution,
) -> Result<FloorReport> {
    let FamilyKind::StaticStar { delta } = family.kind else {
        return Err(Error::Config("regret floor check needs a static star family".into()));
    };
    let arms = family.arms;
    let bound = static_lb_value(grid, delta, arms)?;
    let estimates: Vec<RegretEstimate> = family
        .instances()
        .enumerate()
        .map(|(i, inst)| {
            mean_regret(spec, grid, inst, reps, derive_seed(base_seed, &[i as u64]), execution)
        })
        .collect::<Result<_>>()?;
    let means: Vec<f64> = estimates.iter().map(|e| e.mean).collect();
    let stderrs: Vec<f64> = estimates.iter().map(|e| e.stderr).collect();
    let worst = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_se = stderrs.iter().copied().fold(0.0, f64::max);

    let times: Vec<f64> = grid.times().iter().map(|&t| t as f64).collect();
    let witness = Witness::new(
        Lemma::RegretFloor,
        digest([times.as_slice(), &[delta, arms as f64, reps as f64, base_seed as f64]], &[]),
        worst,
        None,
        bound - 3.0 * max_se,
        Relation::Ge,
        0.0,
    );
    Ok(FloorReport {
        policy: spec.kind.to_string(),
        arms,
        delta,
        grid: grid.times().to_vec(),
        reps,
        means,
        stderrs,
        bound,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{make_adaptive_family, make_static_star_family};
    use crate::grids::validate_grid;
    use crate::policies::PolicyKind;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_closed_form() {
        let fam = make_static_star_family(3, 0.1).unwrap();
        let grid = validate_grid(&[10, 100], 100, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Uniform, 1.0);
        let r = regret_floor_check(&spec, &fam, &grid, 5, 0, Execution::Sequential).unwrap();
        // Round-robin: 34 pulls of arm 1, 33 each of arms 2 and 3.
        assert_relative_eq!(r.means[0], 66.0 * 0.1, max_relative = 1e-12);
        assert_relative_eq!(r.means[1], 34.0 * 0.1 + 33.0 * 0.2, max_relative = 1e-12);
        assert_relative_eq!(r.means[2], 34.0 * 0.1 + 33.0 * 0.2, max_relative = 1e-12);
        assert!(r.stderrs.iter().all(|&s| s < 1e-12));
        assert_relative_eq!(r.bound, 0.1 * (2.5 + 22.5 * (-0.1f64).exp()), max_relative = 1e-14);
        assert!(r.pass());
    }

    #[test]
    fn base_clears_floor() {
        let fam = make_static_star_family(3, 0.1).unwrap();
        let grid = validate_grid(&[10, 100], 100, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Base, 1.0);
        let r = regret_floor_check(&spec, &fam, &grid, 400, 1, Execution::Parallel).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn adaptive_family_rejected() {
        let fam = make_adaptive_family(3, 2, 100).unwrap();
        let grid = validate_grid(&[10, 100], 100, 3).unwrap();
        let spec = PolicySpec::new(PolicyKind::Base, 1.0);
        assert!(matches!(
            regret_floor_check(&spec, &fam, &grid, 4, 0, Execution::Sequential),
            Err(Error::Config(_))
        ));
    }
}
