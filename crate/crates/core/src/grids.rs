//! Batch grids `t_1 < t_2 < … < t_M = T`.
//!
//! The minimax and geometric families follow the recursions
//! `u_1 = a, u_m = a·√u_{m−1}` and `u'_1 = b, u'_m = b·u'_{m−1}` with the
//! constants fixed so that `u_M = T` exactly:
//! `a = T^{1/(2−2^{1−M})}`, `b = T^{1/M}`. That gives the closed forms
//! `t_j = ⌊T^{(2−2^{1−j})/(2−2^{1−M})}⌋` and `t'_j = ⌊T^{j/M}⌋`.
//!
//! Every constructor post-processes the raw endpoints: the first batch is
//! raised to at least `K` (every arm must be pulled once in batch 1) with the
//! raise cascading forward, and endpoints that collide after flooring are
//! merged. The number of batches actually produced can therefore be smaller
//! than requested; both are recorded on the [`Grid`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFamily {
    Minimax,
    Geometric,
    Arithmetic,
    Explicit,
    /// `{K, K+1, …, T}`: one round-robin batch, then one batch per step.
    Sequential,
}

impl GridFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            GridFamily::Minimax => "minimax",
            GridFamily::Geometric => "geometric",
            GridFamily::Arithmetic => "arithmetic",
            GridFamily::Explicit => "explicit",
            GridFamily::Sequential => "sequential",
        }
    }
}

impl fmt::Display for GridFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GridFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimax" => Ok(GridFamily::Minimax),
            "geometric" => Ok(GridFamily::Geometric),
            "arithmetic" => Ok(GridFamily::Arithmetic),
            "explicit" => Ok(GridFamily::Explicit),
            "sequential" => Ok(GridFamily::Sequential),
            other => Err(Error::Config(format!("unknown grid family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    times: Vec<u64>,
    family: GridFamily,
    requested_batches: usize,
}

impl Grid {
    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn horizon(&self) -> u64 {
        *self.times.last().expect("grid is never empty")
    }

    /// Effective `M` after merging collisions.
    pub fn num_batches(&self) -> usize {
        self.times.len()
    }

    pub fn requested_batches(&self) -> usize {
        self.requested_batches
    }

    pub fn family(&self) -> GridFamily {
        self.family
    }

    /// `(t_{m−1}, t_m]` for 0-based batch `m`, returned as `(t_{m−1}, t_m)` with `t_{−1} = 0`.
    pub fn batch_bounds(&self, m: usize) -> (u64, u64) {
        let start = if m == 0 { 0 } else { self.times[m - 1] };
        (start, self.times[m])
    }

    pub fn batch_len(&self, m: usize) -> u64 {
        let (start, end) = self.batch_bounds(m);
        end - start
    }

    pub fn is_last_batch(&self, m: usize) -> bool {
        m + 1 == self.times.len()
    }
}

/// `a = T^{1/(2−2^{1−M})}`.
pub fn minimax_constant(horizon: u64, batches: usize) -> f64 {
    (horizon as f64).powf(1.0 / (2.0 - 2f64.powi(1 - batches as i32)))
}

/// `b = T^{1/M}`.
pub fn geometric_constant(horizon: u64, batches: usize) -> f64 {
    (horizon as f64).powf(1.0 / batches as f64)
}

/// `⌊x⌋`, snapping to the nearest integer first when `x` is within rounding
/// error of it (so `1000^{1/3}` floors to 10, not 9).
pub(crate) fn snapped_floor(x: f64) -> u64 {
    let nearest = x.round();
    let tol = 1e-9_f64.max(x.abs() * 8.0 * f64::EPSILON);
    if (x - nearest).abs() <= tol {
        nearest as u64
    } else {
        x.floor() as u64
    }
}

fn check_request(horizon: u64, batches: usize, arms: usize) -> Result<()> {
    if horizon == 0 || batches == 0 || arms == 0 {
        return Err(Error::InfeasibleGrid(format!(
            "T, M and K must be positive (T = {horizon}, M = {batches}, K = {arms})"
        )));
    }
    if batches as u64 > horizon {
        return Err(Error::InfeasibleGrid(format!("M = {batches} exceeds T = {horizon}")));
    }
    if (arms as u64) > horizon {
        return Err(Error::InfeasibleGrid(format!(
            "T = {horizon} is smaller than K = {arms}; the first batch cannot pull every arm"
        )));
    }
    Ok(())
}

/// Forces `t_M = T`, raises every endpoint to at least `K`, then merges duplicates.
fn finish(mut raw: Vec<u64>, horizon: u64, arms: usize, family: GridFamily) -> Grid {
    let requested_batches = raw.len();
    *raw.last_mut().expect("at least one batch") = horizon;
    let mut times: Vec<u64> = Vec::with_capacity(raw.len());
    let mut floor = arms as u64;
    for t in raw {
        let t = t.clamp(floor, horizon);
        floor = t;
        if times.last() != Some(&t) {
            times.push(t);
        }
    }
    Grid {
        times,
        family,
        requested_batches,
    }
}

pub fn make_minimax_grid(horizon: u64, batches: usize, arms: usize) -> Result<Grid> {
    check_request(horizon, batches, arms)?;
    let t = horizon as f64;
    let denom = 2.0 - 2f64.powi(1 - batches as i32);
    let raw = (1..=batches)
        .map(|j| snapped_floor(t.powf((2.0 - 2f64.powi(1 - j as i32)) / denom)))
        .collect();
    Ok(finish(raw, horizon, arms, GridFamily::Minimax))
}

pub fn make_geometric_grid(horizon: u64, batches: usize, arms: usize) -> Result<Grid> {
    check_request(horizon, batches, arms)?;
    let t = horizon as f64;
    let raw = (1..=batches)
        .map(|j| snapped_floor(t.powf(j as f64 / batches as f64)))
        .collect();
    Ok(finish(raw, horizon, arms, GridFamily::Geometric))
}

pub fn make_arithmetic_grid(horizon: u64, batches: usize, arms: usize) -> Result<Grid> {
    check_request(horizon, batches, arms)?;
    let raw = (1..=batches as u128)
        .map(|j| (j * horizon as u128 / batches as u128) as u64)
        .collect();
    Ok(finish(raw, horizon, arms, GridFamily::Arithmetic))
}

pub fn make_grid(family: GridFamily, horizon: u64, batches: usize, arms: usize) -> Result<Grid> {
    match family {
        GridFamily::Minimax => make_minimax_grid(horizon, batches, arms),
        GridFamily::Geometric => make_geometric_grid(horizon, batches, arms),
        GridFamily::Arithmetic => make_arithmetic_grid(horizon, batches, arms),
        GridFamily::Sequential => make_sequential_grid(horizon, arms),
        GridFamily::Explicit => Err(Error::Config(
            "explicit grids are built with validate_grid".into(),
        )),
    }
}

/// `{K, K+1, …, T}`. Running a policy on this grid is fully sequential
/// after the first (round-robin) batch.
pub fn make_sequential_grid(horizon: u64, arms: usize) -> Result<Grid> {
    check_request(horizon, 1, arms)?;
    let times: Vec<u64> = (arms as u64..=horizon).collect();
    let requested_batches = times.len();
    Ok(Grid {
        times,
        family: GridFamily::Sequential,
        requested_batches,
    })
}

/// Accepts an explicit grid iff it is strictly increasing, ends at `T` and `t_1 ≥ K`.
pub fn validate_grid(times: &[u64], horizon: u64, arms: usize) -> Result<Grid> {
    let Some(&first) = times.first() else {
        return Err(Error::InvalidGrid {
            index: 0,
            reason: "grid is empty".into(),
        });
    };
    if first < arms as u64 {
        return Err(Error::InvalidGrid {
            index: 0,
            reason: format!("t_1 = {first} is smaller than K = {arms}"),
        });
    }
    if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid {
            index: i + 1,
            reason: format!("{} does not exceed the previous endpoint {}", times[i + 1], times[i]),
        });
    }
    let last = times.len() - 1;
    if times[last] != horizon {
        return Err(Error::InvalidGrid {
            index: last,
            reason: format!("last endpoint {} differs from T = {horizon}", times[last]),
        });
    }
    Ok(Grid {
        times: times.to_vec(),
        family: GridFamily::Explicit,
        requested_batches: times.len(),
    })
}
