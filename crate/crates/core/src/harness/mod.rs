//! Experiment presets, Monte-Carlo orchestration and CSV/JSON output.
//!
//! Seeds: every sweep point gets `derive_seed(base_seed, [fnv1a(experiment_id), K, M, T])`
//! and replication `r` at that point uses `replication_seed(point_seed, r)`.
//! Series at the same point share replication seeds (common random numbers),
//! and adding sweep points never changes existing rows.

mod bounds_suite;
mod config;
mod output;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{make_grid, Grid, GridFamily};
use crate::instance::validate_instance;
use crate::policies::PolicySpec;
use crate::simulator::rng::{derive_seed, fnv1a};
use crate::simulator::{mean_regret, replication_seed, Execution, SAMPLER_ID};

pub use bounds_suite::{run_bounds_suite, run_bounds_suite_with, BoundsReport, BoundsSuiteConfig};
pub use config::{
    ExperimentConfig, InstanceSpec, Preset, Series, Sweep, DEFAULT_ARMS, DEFAULT_BATCHES,
    DEFAULT_GAMMA, DEFAULT_HORIZON, DEFAULT_OPTIMAL_MEAN, DEFAULT_REPS, DEFAULT_SEED,
    DEFAULT_SUBOPTIMAL_MEAN, HORIZON_SWEEP,
};
pub use output::{emit_csv, emit_summary_json, summary_path, write_csv, CSV_HEADER};

/// One replication at one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment_id: String,
    pub policy: String,
    pub grid: String,
    #[serde(rename = "K")]
    pub arms: usize,
    /// Requested number of batches; `T` for the sequential grid.
    #[serde(rename = "M")]
    pub batches: u64,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub gamma: f64,
    /// 0-based replication index.
    pub rep: usize,
    pub seed: u64,
    pub regret: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Ok,
    Skipped,
}

/// Aggregate over the replications at one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub policy: String,
    pub grid: String,
    #[serde(rename = "K")]
    pub arms: usize,
    #[serde(rename = "M")]
    pub batches: u64,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub gamma: f64,
    pub status: PointStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub seed: u64,
    #[serde(rename = "R")]
    pub reps: usize,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    /// Grid endpoints actually used (after clamping and merging).
    pub grid_times: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub experiment_id: String,
    pub sampler: String,
    pub version: String,
    pub base_seed: u64,
    pub reps: usize,
    pub sweep: Sweep,
    pub instance: InstanceSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub metadata: Metadata,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: ExperimentSummary,
}

/// A configuration to simulate: one series at one sweep value.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    series: Series,
    arms: usize,
    batches: usize,
    horizon: u64,
}

impl Point {
    /// Value written to the `M` column.
    fn m_column(&self) -> u64 {
        if self.series.grid == GridFamily::Sequential {
            self.horizon
        } else {
            self.batches as u64
        }
    }
}

/// Sweep points in output order: series-major, then sweep values. A
/// sequential-grid series has no batch count, so an M sweep runs it once.
fn points(cfg: &ExperimentConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for &series in &cfg.series {
        let at = |arms, batches, horizon| Point {
            series,
            arms,
            batches,
            horizon,
        };
        match &cfg.sweep {
            Sweep::None => out.push(at(cfg.arms, cfg.batches, cfg.horizon)),
            Sweep::Batches(_) if series.grid == GridFamily::Sequential => {
                out.push(at(cfg.arms, cfg.batches, cfg.horizon))
            }
            Sweep::Batches(v) => out.extend(v.iter().map(|&m| at(cfg.arms, m, cfg.horizon))),
            Sweep::Arms(v) => out.extend(v.iter().map(|&k| at(k, cfg.batches, cfg.horizon))),
            Sweep::Horizon(v) => out.extend(v.iter().map(|&t| at(cfg.arms, cfg.batches, t))),
        }
    }
    out
}

fn point_seed(cfg: &ExperimentConfig, p: &Point) -> u64 {
    derive_seed(
        cfg.base_seed,
        &[fnv1a(&cfg.experiment_id), p.arms as u64, p.m_column(), p.horizon],
    )
}

fn build_grid(p: &Point) -> Result<Grid> {
    make_grid(p.series.grid, p.horizon, p.batches, p.arms)
}

/// Errors that make a sweep point unrunnable without invalidating the experiment.
fn is_skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::InfeasibleGrid(_) | Error::Unsupported(_) | Error::Constraint(_)
    )
}

/// Runs every configuration of `cfg`. Points run in parallel on the current
/// rayon pool; output order and content do not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_experiment_with(cfg, Execution::Parallel)
}

pub fn run_experiment_with(cfg: &ExperimentConfig, execution: Execution) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let points = points(cfg);
    let run = |p: &Point| run_point(cfg, p, execution);
    let results: Vec<(PointSummary, Vec<ResultRow>)> = match execution {
        Execution::Sequential => points.iter().map(run).collect::<Result<_>>()?,
        Execution::Parallel => points.par_iter().map(run).collect::<Result<_>>()?,
    };
    let mut rows = Vec::with_capacity(results.iter().map(|r| r.1.len()).sum());
    let mut summaries = Vec::with_capacity(results.len());
    for (s, r) in results {
        summaries.push(s);
        rows.extend(r);
    }
    Ok(ExperimentOutput {
        rows,
        summary: ExperimentSummary {
            metadata: Metadata {
                experiment_id: cfg.experiment_id.clone(),
                sampler: SAMPLER_ID.into(),
                version: env!("CARGO_PKG_VERSION").into(),
                base_seed: cfg.base_seed,
                reps: cfg.reps,
                sweep: cfg.sweep.clone(),
                instance: cfg.instance.clone(),
            },
            points: summaries,
        },
    })
}

fn run_point(cfg: &ExperimentConfig, p: &Point, execution: Execution) -> Result<(PointSummary, Vec<ResultRow>)> {
    let seed = point_seed(cfg, p);
    let mut summary = PointSummary {
        policy: p.series.policy.to_string(),
        grid: p.series.grid.to_string(),
        arms: p.arms,
        batches: p.m_column(),
        horizon: p.horizon,
        gamma: cfg.gamma,
        status: PointStatus::Ok,
        reason: None,
        seed,
        reps: cfg.reps,
        mean: None,
        stderr: None,
        grid_times: None,
    };
    let prepared = cfg.instance.build(p.arms).and_then(|inst| {
        validate_instance(&inst, true)?;
        let grid = build_grid(p)?;
        // Surfaces policy/instance mismatches (ETC with K ≠ 2) as a skip.
        PolicySpec::new(p.series.policy, cfg.gamma).build(p.arms, p.horizon)?;
        Ok((inst, grid))
    });
    let (inst, grid) = match prepared {
        Ok(v) => v,
        Err(e) if is_skippable(&e) => {
            summary.status = PointStatus::Skipped;
            summary.reason = Some(e.to_string());
            summary.reps = 0;
            return Ok((summary, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let spec = PolicySpec::new(p.series.policy, cfg.gamma);
    let est = mean_regret(&spec, &grid, &inst, cfg.reps, seed, execution)?;
    let rows = est
        .regrets
        .iter()
        .enumerate()
        .map(|(rep, &regret)| ResultRow {
            experiment_id: cfg.experiment_id.clone(),
            policy: summary.policy.clone(),
            grid: summary.grid.clone(),
            arms: p.arms,
            batches: summary.batches,
            horizon: p.horizon,
            gamma: cfg.gamma,
            rep,
            seed: replication_seed(seed, rep),
            regret,
        })
        .collect();
    summary.mean = Some(est.mean);
    summary.stderr = Some(est.stderr);
    if grid.family() != GridFamily::Sequential {
        summary.grid_times = Some(grid.times().to_vec());
    }
    Ok((summary, rows))
}
