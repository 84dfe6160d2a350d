//! Randomized property suites for the inequality checkers.
//!
//! Trial `i` of a suite draws its inputs from a generator seeded with
//! `derive_seed(seed, [suite, i])`, so any failing trial can be replayed alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_majorization, check_tree_testing_bound, check_tv_kl, FiniteTestProblem, Lemma, Witness,
};
use crate::error::Result;
use crate::simulator::rng::derive_seed;

pub type TvKlChecker = fn(&[f64], &[f64]) -> Result<Witness>;
pub type MajorizationChecker = fn(&[f64], &[(usize, usize)]) -> Result<Witness>;
pub type TreeTestingChecker = fn(&FiniteTestProblem) -> Result<Witness>;

/// The checkers a suite run exercises. Tests swap in broken ones to make
/// sure failures surface.
#[derive(Debug, Clone, Copy)]
pub struct Checkers {
    pub tv_kl: TvKlChecker,
    pub majorization: MajorizationChecker,
    pub tree_testing: TreeTestingChecker,
}

impl Default for Checkers {
    fn default() -> Self {
        Self {
            tv_kl: check_tv_kl,
            majorization: check_majorization,
            tree_testing: check_tree_testing_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub lemma: Lemma,
    pub trials: usize,
    pub violations: usize,
    /// Trials whose inputs the checker rejected.
    pub errors: usize,
    /// Smallest margin seen over all trials.
    pub worst_margin: f64,
    /// First violating trial, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_violation: Option<TrialWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialWitness {
    pub trial: usize,
    pub witness: Witness,
}

fn trial_rng(seed: u64, lemma: Lemma, trial: usize) -> ChaCha8Rng {
    let tag = match lemma {
        Lemma::TvKl => 1,
        Lemma::Majorization => 2,
        Lemma::TreeTesting => 3,
        Lemma::RegretFloor => 4,
    };
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[tag, trial as u64]))
}

/// Random point of the simplex. Weights are powers of exponentials so some
/// draws are close to a vertex; with `zeros` some coordinates are exactly 0.
pub fn random_simplex<R: Rng>(rng: &mut R, dim: usize, zeros: bool) -> Vec<f64> {
    let power = [1.0, 2.0, 4.0][rng.gen_range(0..3)];
    let mut w: Vec<f64> = (0..dim)
        .map(|_| (-(1.0 - rng.gen::<f64>()).ln()).powf(power))
        .collect();
    if zeros {
        for x in w.iter_mut() {
            if rng.gen_bool(0.2) {
                *x = 0.0;
            }
        }
    }
    if w.iter().all(|&x| x <= 0.0) {
        let i = rng.gen_range(0..dim);
        w[i] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Uniformly labelled random tree on `0..n` built by random attachment,
/// with each edge's orientation chosen at random.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (1..n)
        .map(|i| {
            let parent = perm[rng.gen_range(0..i)];
            if rng.gen_bool(0.5) {
                (perm[i], parent)
            } else {
                (parent, perm[i])
            }
        })
        .collect()
}

fn run_suite<F>(lemma: Lemma, trials: usize, seed: u64, mut trial: F) -> SuiteReport
where
    F: FnMut(&mut ChaCha8Rng) -> Result<Witness>,
{
    let mut report = SuiteReport {
        lemma,
        trials,
        violations: 0,
        errors: 0,
        worst_margin: f64::INFINITY,
        first_violation: None,
        first_error: None,
        pass: true,
    };
    for i in 0..trials {
        let mut rng = trial_rng(seed, lemma, i);
        match trial(&mut rng) {
            Ok(w) => {
                report.worst_margin = report.worst_margin.min(w.margin);
                if !w.pass {
                    report.violations += 1;
                    report.first_violation.get_or_insert(TrialWitness { trial: i, witness: w });
                }
            }
            Err(e) => {
                report.errors += 1;
                report.first_error.get_or_insert_with(|| format!("trial {i}: {e}"));
            }
        }
    }
    report.pass = report.violations == 0 && report.errors == 0;
    report
}

/// Pairs on 2 to 8 points; `Q` strictly positive, `P` may have zeros.
pub fn tv_kl_suite(trials: usize, seed: u64, check: TvKlChecker) -> SuiteReport {
    run_suite(Lemma::TvKl, trials, seed, |rng| {
        let dim = rng.gen_range(2..=8);
        let p = random_simplex(rng, dim, true);
        let q = random_simplex(rng, dim, false);
        check(&p, &q)
    })
}

/// Random trees on 2 to 8 vertices with positive weights; a third of the
/// trials round weights to one decimal so ties (and equality cases) occur.
pub fn majorization_suite(trials: usize, seed: u64, check: MajorizationChecker) -> SuiteReport {
    run_suite(Lemma::Majorization, trials, seed, |rng| {
        let n = rng.gen_range(2..=8);
        let coarse = rng.gen_bool(1.0 / 3.0);
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(0.0..10.0);
                if coarse {
                    (v * 10.0).round() / 10.0 + 0.1
                } else {
                    v + f64::MIN_POSITIVE
                }
            })
            .collect();
        let edges = random_tree(rng, n);
        check(&x, &edges)
    })
}

/// 2 to 8 strictly positive distributions on 2 to 8 outcomes, random trees.
pub fn tree_testing_suite(trials: usize, seed: u64, check: TreeTestingChecker) -> SuiteReport {
    run_suite(Lemma::TreeTesting, trials, seed, |rng| {
        let n = rng.gen_range(2..=8);
        let outcomes = rng.gen_range(2..=8);
        let dists = (0..n).map(|_| random_simplex(rng, outcomes, false)).collect();
        let edges = random_tree(rng, n);
        check(&FiniteTestProblem::new(dists, edges)?)
    })
}

/// All three suites in a fixed order.
pub fn run_inequality_suites(trials: usize, seed: u64, checkers: &Checkers) -> Vec<SuiteReport> {
    vec![
        tv_kl_suite(trials, seed, checkers.tv_kl),
        majorization_suite(trials, seed, checkers.majorization),
        tree_testing_suite(trials, seed, checkers.tree_testing),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{validate_distribution, validate_tree, Relation};

    #[test]
    fn generators_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let n = rng.gen_range(1..=9);
            validate_distribution(&random_simplex(&mut rng, n, true)).unwrap();
            let q = random_simplex(&mut rng, n, false);
            assert!(q.iter().all(|&x| x > 0.0));
            validate_tree(n, &random_tree(&mut rng, n)).unwrap();
        }
    }

    #[test]
    fn suites_pass() {
        for r in run_inequality_suites(2000, 17, &Checkers::default()) {
            assert!(r.pass, "{r:?}");
            assert_eq!(r.trials, 2000);
            assert!(r.worst_margin >= -1e-12);
        }
    }

    #[test]
    fn suites_are_reproducible() {
        let a = run_inequality_suites(200, 3, &Checkers::default());
        let b = run_inequality_suites(200, 3, &Checkers::default());
        assert_eq!(a, b);
    }

    #[test]
    fn negated_checker_is_caught() {
        fn flipped(x: &[f64], e: &[(usize, usize)]) -> Result<Witness> {
            // Asserts lhs ≤ rhs − 1, the opposite of the true direction.
            let w = check_majorization(x, e)?;
            Ok(Witness::new(w.lemma, w.inputs_digest, w.lhs, None, w.rhs - 1.0, Relation::Le, w.slack))
        }
        let r = majorization_suite(50, 1, flipped);
        assert!(!r.pass);
        assert_eq!(r.violations, 50);
        assert_eq!(r.first_violation.unwrap().trial, 0);
    }
}
