use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use batched_bandits::error::Result;
use batched_bandits::grids::GridFamily;
use batched_bandits::harness::{
    emit_csv, emit_summary_json, run_bounds_suite, run_experiment, summary_path, ExperimentConfig,
    Preset, Series, DEFAULT_REPS, DEFAULT_SEED,
};
use batched_bandits::policies::PolicyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Bounds,
}

/// Batched bandit simulator: regret experiments and lower-bound checks.
#[derive(Debug, Parser)]
#[command(name = "bbsim", version)]
struct Cli {
    /// base | ucb1 | etc | uniform
    #[arg(long, default_value = "base")]
    policy: PolicyKind,

    /// minimax | geometric | arithmetic | sequential (default: sequential for ucb1, minimax otherwise)
    #[arg(long)]
    grid: Option<GridFamily>,

    /// Number of arms.
    #[arg(long = "K", default_value_t = 3)]
    arms: usize,

    /// Number of batches.
    #[arg(long = "M", default_value_t = 3)]
    batches: usize,

    /// Horizon.
    #[arg(long = "T", default_value_t = 50_000)]
    horizon: u64,

    /// Elimination constant.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,

    /// Replications per configuration.
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Run a named experiment instead of a single configuration.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,

    /// CSV output (the summary goes next to it as <stem>.summary.json).
    /// For `--preset bounds` this is the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,

    /// Random trials per inequality suite (bounds preset only).
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bbsim: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("bbsim: {e}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every check passed.
fn run(cli: &Cli) -> Result<bool> {
    let preset = match cli.preset {
        Some(PresetArg::Bounds) => return run_bounds(cli),
        Some(PresetArg::Fig1a) => Some(Preset::Fig1a),
        Some(PresetArg::Fig1b) => Some(Preset::Fig1b),
        Some(PresetArg::Fig1c) => Some(Preset::Fig1c),
        Some(PresetArg::Fig1d) => Some(Preset::Fig1d),
        None => None,
    };
    let cfg = match preset {
        Some(p) => p.config(cli.reps, cli.seed),
        None => {
            let grid = cli.grid.unwrap_or(if cli.policy == PolicyKind::Ucb1 {
                GridFamily::Sequential
            } else {
                GridFamily::Minimax
            });
            ExperimentConfig {
                series: vec![Series::new(cli.policy, grid)],
                arms: cli.arms,
                batches: cli.batches,
                horizon: cli.horizon,
                gamma: cli.gamma,
                reps: cli.reps,
                base_seed: cli.seed,
                ..ExperimentConfig::default()
            }
        }
    };
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.experiment_id)));
    let result = run_experiment(&cfg)?;
    emit_csv(&result.rows, &out)?;
    let summary = summary_path(&out);
    emit_summary_json(&result.summary, &summary)?;

    for p in &result.summary.points {
        match (p.mean, p.stderr) {
            (Some(mean), Some(se)) => println!(
                "{:<8} {:<10} K={:<3} M={:<6} T={:<7} regret {:>10.3} ± {:.3}",
                p.policy, p.grid, p.arms, p.batches, p.horizon, mean, se
            ),
            _ => println!(
                "{:<8} {:<10} K={:<3} M={:<6} T={:<7} skipped: {}",
                p.policy,
                p.grid,
                p.arms,
                p.batches,
                p.horizon,
                p.reason.as_deref().unwrap_or("")
            ),
        }
    }
    println!("wrote {} and {}", out.display(), summary.display());
    Ok(true)
}

fn run_bounds(cli: &Cli) -> Result<bool> {
    let report = run_bounds_suite(cli.trials, cli.seed)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("bounds.json"));
    emit_summary_json(&report, Path::new(&out))?;
    for s in &report.suites {
        println!(
            "{:<4} {:<14} trials={} violations={} errors={} worst margin {:.3e}",
            verdict(s.pass),
            s.lemma.as_str(),
            s.trials,
            s.violations,
            s.errors,
            s.worst_margin
        );
    }
    for f in &report.floors {
        println!(
            "{:<4} regret-floor   {:<8} K={} max mean {:.4} ≥ {:.4} − 3·{:.4}",
            verdict(f.pass()),
            f.policy,
            f.arms,
            f.witness.lhs,
            f.bound,
            f.stderrs.iter().copied().fold(0.0, f64::max)
        );
    }
    println!("wrote {}", out.display());
    Ok(report.pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
