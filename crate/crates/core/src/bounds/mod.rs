//! Lower bounds for static grids, hard-instance families and numeric
//! checkers for the inequalities used in the lower-bound arguments.

mod checks;
mod divergence;
mod families;
mod floor;
pub mod suites;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::Grid;

pub use checks::{
    check_majorization, check_tree_testing_bound, check_tv_kl, validate_tree, FiniteTestProblem,
    Lemma, Relation, Witness, CHECK_SLACK,
};
pub use divergence::{kl_divergence, tv_distance, validate_distribution};
pub use families::{
    make_adaptive_family, make_static_star_family, FamilyKind, FamilyMember, HardInstanceFamily,
    MemberKind,
};
pub use floor::{regret_floor_check, FloorReport};

/// `Δ · Σ_j (t_j − t_{j−1})/4 · exp(−2 t_{j−1} Δ² / (K − 1))` with `t_0 = 0`.
///
/// Minimax lower bound on the worst-case regret of any policy on `grid`
/// over the static star family with gap `Δ ∈ (0, √K]`.
pub fn static_lb_value(grid: &Grid, delta: f64, arms: usize) -> Result<f64> {
    if arms < 2 {
        return Err(Error::Domain(format!("need K ≥ 2, got {arms}")));
    }
    let cap = (arms as f64).sqrt();
    if !(delta > 0.0 && delta <= cap) {
        return Err(Error::Domain(format!("Δ = {delta} outside (0, √K = {cap}]")));
    }
    Ok(lb_terms(grid.times(), delta, arms))
}

fn lb_terms(times: &[u64], delta: f64, arms: usize) -> f64 {
    let rate = 2.0 * delta * delta / (arms - 1) as f64;
    let mut prev = 0u64;
    let mut sum = 0.0;
    for &t in times {
        sum += (t - prev) as f64 / 4.0 * (-(prev as f64) * rate).exp();
        prev = t;
    }
    delta * sum
}

/// Result of [`static_lb_optimized`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizedBound {
    /// `max_j LB(Δ_j)`.
    pub minimax: f64,
    /// `max_j Δ_j · LB(Δ_j)`: the bound rescaled to gaps of order `Δ_j`.
    pub prodep: f64,
    /// Probed gaps `Δ_j = min(√((K−1)/(t_{j−1}+1)), √K)`, one per batch.
    pub deltas: Vec<f64>,
    /// `LB(Δ_j)` for each probed gap.
    pub values: Vec<f64>,
}

/// Evaluates [`static_lb_value`] at the per-batch gaps `Δ_j` and keeps the best.
pub fn static_lb_optimized(grid: &Grid, arms: usize) -> Result<OptimizedBound> {
    if arms < 2 {
        return Err(Error::Domain(format!("need K ≥ 2, got {arms}")));
    }
    let k1 = (arms - 1) as f64;
    let cap = (arms as f64).sqrt();
    let mut prev = 0u64;
    let mut deltas = Vec::with_capacity(grid.num_batches());
    for &t in grid.times() {
        deltas.push((k1 / (prev as f64 + 1.0)).sqrt().min(cap));
        prev = t;
    }
    let values: Vec<f64> = deltas.iter().map(|&d| lb_terms(grid.times(), d, arms)).collect();
    let minimax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let prodep = deltas
        .iter()
        .zip(&values)
        .map(|(d, v)| d * v)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(OptimizedBound {
        minimax,
        prodep,
        deltas,
        values,
    })
}
