//! Repeated seeded runs, aggregation and report files.
//!
//! Every run derives its seed from the base seed and its index alone, so a
//! campaign gives the same records whatever the worker count or schedule.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algo::{self, AlgorithmConfig, AlgorithmKind};
use crate::error::{Error, Result};
use crate::presets::{ProblemSetup, Presets, Termination};
use crate::problem::RunRecord;
use crate::problems::ProblemKind;
use crate::rng::{run_seed, RngStream};

pub const DEFAULT_RUNS: usize = 100;
pub const REPORT_HEADER: &str = "problem,algorithm,dim,runs,successes,avg_calls,base_seed";
pub const RUNS_HEADER: &str = "run_index,seed,success,calls,best_value";
/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "EVOBENCH_WORKERS";

/// One (algorithm, problem) campaign, fully resolved.
#[derive(Clone)]
pub struct BenchmarkSpec {
    pub problem: ProblemKind,
    pub algorithm: AlgorithmKind,
    pub config: AlgorithmConfig,
    pub setup: ProblemSetup,
    pub runs: usize,
    pub base_seed: u64,
}

impl BenchmarkSpec {
    pub fn from_presets(
        presets: &Presets,
        problem: ProblemKind,
        algorithm: AlgorithmKind,
        dim: usize,
        runs: usize,
        base_seed: u64,
    ) -> Result<Self> {
        if runs == 0 {
            return Err(Error::ConfigInvalid("run count must be at least 1".into()));
        }
        let setup = presets.problem_setup(problem, dim)?;
        let config = presets.algorithm(algorithm, problem, setup.dim)?;
        config.validate()?;
        Ok(Self {
            problem,
            algorithm,
            config,
            setup,
            runs,
            base_seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.setup.dim
    }

    pub fn termination(&self) -> Termination {
        self.setup.termination
    }

    pub fn with_termination(mut self, threshold: f64, max_calls: u64) -> Self {
        self.setup.termination = Termination { threshold, max_calls };
        self
    }

    pub fn seed_of(&self, index: usize) -> u64 {
        run_seed(self.base_seed, index as u64)
    }

    /// Executes run `index`. A run that errors counts as a failure with no
    /// evaluations rather than aborting the campaign.
    pub fn run_one(&self, index: usize) -> RunRecord {
        let seed = self.seed_of(index);
        let mut rng = RngStream::new(seed);
        let term = self.termination();
        let outcome = self
            .setup
            .instance(&mut rng)
            .and_then(|p| algo::run(p.as_ref(), &self.config, term.max_calls, term.threshold, &mut rng));
        outcome.unwrap_or_else(|_| RunRecord {
            seed,
            success: false,
            calls_at_success: None,
            calls_used: 0,
            best_value: f64::INFINITY,
            best_chromosome: None,
            trace: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub problem: ProblemKind,
    pub algorithm: AlgorithmKind,
    pub dim: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub successes: usize,
    /// Mean calls over successful runs; `None` when nothing succeeded.
    pub avg_calls: Option<f64>,
    pub records: Vec<RunRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl BenchmarkReport {
    pub fn from_records(spec: &BenchmarkSpec, records: Vec<RunRecord>, wall_time: Duration) -> Self {
        let (successes, avg_calls) = aggregate(&records);
        Self {
            problem: spec.problem,
            algorithm: spec.algorithm,
            dim: spec.dim(),
            runs: records.len(),
            base_seed: spec.base_seed,
            successes,
            avg_calls,
            records,
            wall_time,
        }
    }

    pub fn avg_calls_text(&self) -> String {
        format_avg(self.avg_calls)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.problem,
            self.algorithm,
            self.dim,
            self.runs,
            self.successes,
            self.avg_calls_text(),
            self.base_seed
        )
    }

    pub fn runs_csv(&self) -> String {
        let mut out = String::from(RUNS_HEADER);
        out.push('\n');
        for (i, r) in self.records.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{},{},{}", r.seed, r.success, r.calls(), r.best_value);
        }
        out
    }
}

/// Success count and mean calls of the successful runs.
pub fn aggregate(records: &[RunRecord]) -> (usize, Option<f64>) {
    let calls: Vec<u64> = records.iter().filter(|r| r.success).map(RunRecord::calls).collect();
    let avg = (!calls.is_empty()).then(|| calls.iter().sum::<u64>() as f64 / calls.len() as f64);
    (calls.len(), avg)
}

pub fn format_avg(avg: Option<f64>) -> String {
    match avg {
        Some(a) => format!("{a:.1}"),
        None => "N/A".to_string(),
    }
}

pub fn report_csv(reports: &[BenchmarkReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn report_json(reports: &[BenchmarkReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// Worker count from the environment, defaulting to all available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[cfg(feature = "parallel")]
fn execute(spec: &BenchmarkSpec, workers: usize) -> Result<Vec<RunRecord>> {
    use rayon::prelude::*;
    if workers <= 1 {
        return Ok((0..spec.runs).map(|i| spec.run_one(i)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;
    Ok(pool.install(|| (0..spec.runs).into_par_iter().map(|i| spec.run_one(i)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn execute(spec: &BenchmarkSpec, _workers: usize) -> Result<Vec<RunRecord>> {
    Ok((0..spec.runs).map(|i| spec.run_one(i)).collect())
}

/// Runs the campaign on up to `workers` threads.
pub fn run_benchmark(spec: &BenchmarkSpec, workers: usize) -> Result<BenchmarkReport> {
    let start = Instant::now();
    let records = execute(spec, workers.max(1))?;
    Ok(BenchmarkReport::from_records(spec, records, start.elapsed()))
}

/// Type-0 campaigns over `dims`, one report per dimension.
pub fn scaling_study(
    presets: &Presets,
    algorithm: AlgorithmKind,
    dims: &[usize],
    runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<Vec<BenchmarkReport>> {
    if dims.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::ConfigInvalid("dimensions must be sorted ascending".into()));
    }
    dims.iter()
        .map(|&d| {
            let spec = BenchmarkSpec::from_presets(presets, ProblemKind::Type0, algorithm, d, runs, base_seed)?;
            run_benchmark(&spec, workers)
        })
        .collect()
}

/// Whitespace-separated `dim avg_calls` lines.
pub fn plot_data(reports: &[BenchmarkReport]) -> String {
    let mut out = String::from("# dim avg_calls\n");
    for r in reports {
        let _ = writeln!(out, "{} {}", r.dim, r.avg_calls_text());
    }
    out
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `report.csv`, `runs.csv` (one block per campaign) and `report.json` into `dir`.
pub fn write_reports(dir: &Path, reports: &[BenchmarkReport]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    write(&dir.join("report.csv"), &report_csv(reports))?;
    let runs = if reports.len() == 1 {
        reports[0].runs_csv()
    } else {
        reports
            .iter()
            .map(|r| format!("# {} {} dim={}\n{}", r.problem, r.algorithm, r.dim, r.runs_csv()))
            .collect()
    };
    write(&dir.join("runs.csv"), &runs)?;
    write(&dir.join("report.json"), &report_json(reports))
}

pub fn write_plot_data(path: &Path, reports: &[BenchmarkReport]) -> Result<()> {
    write(path, &plot_data(reports))
}
