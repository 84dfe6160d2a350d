//! Exact numeric checks of the inequalities behind the lower bounds.
//!
//! Each checker evaluates both sides and returns a [`Witness`]; a failed
//! inequality is reported in the witness rather than as an error. Errors are
//! reserved for inputs outside the inequality's hypotheses.

use serde::{Deserialize, Serialize};

use super::divergence::{kl_divergence, tv_distance, validate_distribution};
use crate::error::{Error, Result};
use crate::simulator::rng::fnv1a_bytes;

/// Absolute tolerance for every inequality check.
pub const CHECK_SLACK: f64 = 1e-12;

/// Largest sample space the tree-testing check will enumerate.
const MAX_OUTCOMES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// `TV ≤ √(1 − e^{−KL}) ≤ 1 − e^{−KL}/2`.
    TvKl,
    /// `Σx − max x ≥ Σ_{(i,j)∈E} min(x_i, x_j)` on a tree.
    Majorization,
    /// Bayes error of an `n`-ary test against the tree sum of `e^{−KL}`.
    TreeTesting,
    /// Empirical worst-case regret against the static lower bound.
    RegretFloor,
}

impl Lemma {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma::TvKl => "tv-kl",
            Lemma::Majorization => "majorization",
            Lemma::TreeTesting => "tree-testing",
            Lemma::RegretFloor => "regret-floor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// One evaluated inequality `lhs (≤ middle) ≤ rhs` or `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub lemma: Lemma,
    /// FNV-1a of the inputs' bit patterns, hex.
    pub inputs_digest: String,
    pub lhs: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub middle: Option<f64>,
    pub rhs: f64,
    pub relation: Relation,
    pub slack: f64,
    /// Smallest signed amount by which each link holds; negative means violated.
    pub margin: f64,
    pub pass: bool,
}

impl Witness {
    pub(crate) fn new(
        lemma: Lemma,
        inputs_digest: String,
        lhs: f64,
        middle: Option<f64>,
        rhs: f64,
        relation: Relation,
        slack: f64,
    ) -> Self {
        let link = |lo: f64, hi: f64| match relation {
            Relation::Le => hi - lo,
            Relation::Ge => lo - hi,
        };
        let margin = match middle {
            Some(m) => link(lhs, m).min(link(m, rhs)),
            None => link(lhs, rhs),
        };
        Self {
            lemma,
            inputs_digest,
            lhs,
            middle,
            rhs,
            relation,
            slack,
            margin,
            pass: margin >= -slack,
        }
    }
}

pub(crate) fn digest<'a>(parts: impl IntoIterator<Item = &'a [f64]>, edges: &[(usize, usize)]) -> String {
    let mut bytes = Vec::new();
    for part in parts {
        bytes.extend_from_slice(&(part.len() as u64).to_le_bytes());
        for x in part {
            bytes.extend_from_slice(&x.to_bits().to_le_bytes());
        }
    }
    for &(i, j) in edges {
        bytes.extend_from_slice(&(i as u64).to_le_bytes());
        bytes.extend_from_slice(&(j as u64).to_le_bytes());
    }
    format!("{:016x}", fnv1a_bytes(&bytes))
}

/// TV–KL chain for two distributions on the same finite space.
pub fn check_tv_kl(p: &[f64], q: &[f64]) -> Result<Witness> {
    let tv = tv_distance(p, q)?;
    let kl = kl_divergence(p, q)?;
    let e = (-kl).exp();
    Ok(Witness::new(
        Lemma::TvKl,
        digest([p, q], &[]),
        tv,
        Some((1.0 - e).sqrt()),
        1.0 - e / 2.0,
        Relation::Le,
        CHECK_SLACK,
    ))
}

/// Checks that `edges` (0-based, as ordered pairs) form a spanning tree on `0..n`.
pub fn validate_tree(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("a tree needs at least one vertex".into()));
    }
    if edges.len() != n - 1 {
        return Err(Error::Domain(format!(
            "a tree on {n} vertices has {} edges, got {}",
            n - 1,
            edges.len()
        )));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::Domain(format!("edge ({i}, {j}) leaves the vertex set 0..{n}")));
        }
        let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
        if ri == rj {
            return Err(Error::Domain(format!("edge ({i}, {j}) closes a cycle")));
        }
        parent[ri] = rj;
    }
    // n − 1 edges without a cycle are connected.
    Ok(())
}

/// `Σx − max x ≥ Σ_{(i,j)∈E} min(x_i, x_j)` for a tree `E` on the indices of `x`.
pub fn check_majorization(x: &[f64], edges: &[(usize, usize)]) -> Result<Witness> {
    validate_tree(x.len(), edges)?;
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("x[{i}] is not finite")));
    }
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lhs = x.iter().sum::<f64>() - max;
    let rhs: f64 = edges.iter().map(|&(i, j)| x[i].min(x[j])).sum();
    Ok(Witness::new(
        Lemma::Majorization,
        digest([x], edges),
        lhs,
        None,
        rhs,
        Relation::Ge,
        CHECK_SLACK,
    ))
}

/// `n` distributions on a common finite sample space plus a tree on `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTestProblem {
    dists: Vec<Vec<f64>>,
    edges: Vec<(usize, usize)>,
}

impl FiniteTestProblem {
    pub fn new(dists: Vec<Vec<f64>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let Some(first) = dists.first() else {
            return Err(Error::Domain("no distributions".into()));
        };
        let outcomes = first.len();
        if outcomes > MAX_OUTCOMES {
            return Err(Error::Domain(format!(
                "{outcomes} outcomes exceeds the enumeration limit {MAX_OUTCOMES}"
            )));
        }
        for (i, q) in dists.iter().enumerate() {
            if q.len() != outcomes {
                return Err(Error::Domain(format!(
                    "distribution {i} has {} outcomes, expected {outcomes}",
                    q.len()
                )));
            }
            validate_distribution(q)?;
        }
        validate_tree(dists.len(), &edges)?;
        Ok(Self { dists, edges })
    }

    /// Star tree with edges `(0, i)`.
    pub fn star(dists: Vec<Vec<f64>>) -> Result<Self> {
        let edges = (1..dists.len()).map(|i| (0, i)).collect();
        Self::new(dists, edges)
    }

    pub fn dists(&self) -> &[Vec<f64>] {
        &self.dists
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Average error `(1/n) Σ_i Q_i(Ψ* ≠ i)` of the MAP test `Ψ*(ω) = argmax_i Q_i(ω)`,
    /// ties to the lowest index. No test has smaller average error.
    pub fn bayes_error(&self) -> f64 {
        let n = self.dists.len();
        let outcomes = self.dists[0].len();
        let mut err = 0.0;
        for w in 0..outcomes {
            let mut best = 0;
            for i in 1..n {
                if self.dists[i][w] > self.dists[best][w] {
                    best = i;
                }
            }
            for (i, q) in self.dists.iter().enumerate() {
                if i != best {
                    err += q[w];
                }
            }
        }
        err / n as f64
    }
}

/// Bayes error of the MAP test against `Σ_{(i,j)∈E} exp(−KL(Q_i‖Q_j)) / (2n)`.
pub fn check_tree_testing_bound(problem: &FiniteTestProblem) -> Result<Witness> {
    let n = problem.dists.len();
    let mut rhs = 0.0;
    for &(i, j) in &problem.edges {
        let kl = kl_divergence(&problem.dists[i], &problem.dists[j])?;
        if !kl.is_finite() {
            return Err(Error::Domain(format!("KL(Q_{}‖Q_{}) is infinite", i + 1, j + 1)));
        }
        rhs += (-kl).exp();
    }
    rhs /= 2.0 * n as f64;
    Ok(Witness::new(
        Lemma::TreeTesting,
        digest(problem.dists.iter().map(Vec::as_slice), &problem.edges),
        problem.bayes_error(),
        None,
        rhs,
        Relation::Ge,
        CHECK_SLACK,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tv_kl_identical() {
        let w = check_tv_kl(&[0.3, 0.7], &[0.3, 0.7]).unwrap();
        assert_eq!((w.lhs, w.middle, w.rhs), (0.0, Some(0.0), 0.5));
        assert!(w.pass);
    }

    #[test]
    fn tv_kl_reference() {
        let w = check_tv_kl(&[0.5, 0.5], &[0.75, 0.25]).unwrap();
        assert_relative_eq!(w.lhs, 0.25);
        // mpmath
        assert_relative_eq!(w.middle.unwrap(), 0.366_025_403_784_438_65, max_relative = 1e-13);
        assert_relative_eq!(w.rhs, 0.566_987_298_107_780_7, max_relative = 1e-13);
        assert!(w.pass);
        assert_eq!(w.relation, Relation::Le);
    }

    #[test]
    fn tv_kl_infinite_divergence() {
        let w = check_tv_kl(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!((w.middle, w.rhs), (Some(1.0), 1.0));
        assert!(w.pass);
    }

    #[test]
    fn majorization_path_is_tight() {
        let w = check_majorization(&[1.0, 2.0, 3.0], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!((w.lhs, w.rhs), (3.0, 3.0));
        assert!(w.pass);
        assert_eq!(w.margin, 0.0);
    }

    #[test]
    fn majorization_star() {
        let w = check_majorization(&[1.0, 2.0, 3.0], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!((w.lhs, w.rhs), (3.0, 2.0));
        assert!(w.pass);
    }

    #[test]
    fn majorization_constant() {
        let w = check_majorization(&[0.7; 5], &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_relative_eq!(w.lhs, 2.8, max_relative = 1e-15);
        assert_relative_eq!(w.rhs, 2.8, max_relative = 1e-15);
        assert!(w.pass);
    }

    #[test]
    fn tree_validation() {
        assert!(validate_tree(1, &[]).is_ok());
        assert!(validate_tree(3, &[(2, 0), (1, 2)]).is_ok());
        assert!(validate_tree(3, &[(0, 1)]).is_err());
        assert!(validate_tree(3, &[(0, 1), (1, 0)]).is_err());
        assert!(validate_tree(3, &[(0, 0), (1, 2)]).is_err());
        assert!(validate_tree(3, &[(0, 1), (1, 3)]).is_err());
        assert!(validate_tree(4, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(matches!(check_majorization(&[1.0, 2.0], &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn tree_testing_identical_pair() {
        let p = FiniteTestProblem::new(vec![vec![0.4, 0.6]; 2], vec![(0, 1)]).unwrap();
        let w = check_tree_testing_bound(&p).unwrap();
        assert_eq!((w.lhs, w.rhs), (0.5, 0.25));
        assert!(w.pass);
    }

    #[test]
    fn tree_testing_reference() {
        let p = FiniteTestProblem::new(vec![vec![0.5, 0.5], vec![0.75, 0.25]], vec![(0, 1)]).unwrap();
        let w = check_tree_testing_bound(&p).unwrap();
        // MAP picks Q_2 on outcome 1 and Q_1 (tie to lowest) on outcome 2.
        assert_relative_eq!(w.lhs, 0.375, max_relative = 1e-15);
        assert_relative_eq!(w.rhs, 0.216_506_350_946_109_66, max_relative = 1e-13);
        assert!(w.pass);
    }

    #[test]
    fn bayes_error_beats_every_deterministic_test() {
        let dists = vec![vec![0.1, 0.2, 0.7], vec![0.3, 0.3, 0.4], vec![0.5, 0.25, 0.25]];
        let p = FiniteTestProblem::star(dists.clone()).unwrap();
        let best = p.bayes_error();
        // All 3^3 deterministic tests.
        for code in 0..27usize {
            let psi = [code % 3, code / 3 % 3, code / 9];
            let err: f64 = (0..3)
                .map(|i| (0..3).filter(|&w| psi[w] != i).map(|w| dists[i][w]).sum::<f64>())
                .sum::<f64>()
                / 3.0;
            assert!(best <= err + 1e-15);
        }
    }

    #[test]
    fn tree_testing_infinite_kl_rejected() {
        let p = FiniteTestProblem::new(vec![vec![0.5, 0.5], vec![1.0, 0.0]], vec![(0, 1)]).unwrap();
        assert!(matches!(check_tree_testing_bound(&p), Err(Error::Domain(_))));
        // Orientation matters: KL(Q_2‖Q_1) is finite.
        let p = FiniteTestProblem::new(vec![vec![0.5, 0.5], vec![1.0, 0.0]], vec![(1, 0)]).unwrap();
        assert!(check_tree_testing_bound(&p).unwrap().pass);
    }

    #[test]
    fn problem_validation() {
        assert!(FiniteTestProblem::new(vec![vec![0.5, 0.5], vec![1.0]], vec![(0, 1)]).is_err());
        assert!(FiniteTestProblem::new(vec![vec![0.5, 0.6], vec![0.5, 0.5]], vec![(0, 1)]).is_err());
        assert!(FiniteTestProblem::new(vec![vec![0.5, 0.5]; 3], vec![(0, 1)]).is_err());
        assert!(FiniteTestProblem::new(vec![], vec![]).is_err());
    }

    #[test]
    fn witness_flags_violation() {
        let w = Witness::new(Lemma::Majorization, String::new(), 1.0, None, 2.0, Relation::Ge, CHECK_SLACK);
        assert!(!w.pass);
        assert_eq!(w.margin, -1.0);
        let w = Witness::new(Lemma::TvKl, String::new(), 0.1, Some(0.3), 0.2, Relation::Le, CHECK_SLACK);
        assert!(!w.pass);
        assert_relative_eq!(w.margin, -0.1, max_relative = 1e-12);
    }

    #[test]
    fn digest_depends_on_inputs() {
        let a = check_tv_kl(&[0.5, 0.5], &[0.75, 0.25]).unwrap();
        let b = check_tv_kl(&[0.75, 0.25], &[0.5, 0.5]).unwrap();
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest.len(), 16);
    }
}
