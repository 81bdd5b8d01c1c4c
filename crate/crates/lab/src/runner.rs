//! Runs experiments in a worker pool and assembles the run report.

use std::time::Instant;

use rayon::prelude::*;

use crate::cache::SpectrumCache;
use crate::config::{ExperimentConfig, RunConfig, SuiteEntry};
use crate::error::{LabError, Result};
use crate::evaluate::{evaluate, Evaluator};
use crate::model::{acquire_spectrum, build_model};
use crate::report::{
    convergence_audit, CheckRecord, ExperimentReport, ExperimentStatus, ExperimentTiming, RunReport, SpectrumSummary,
    Timings,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Worker count; `None` uses one per core.
    pub jobs: Option<usize>,
    pub cache: Option<SpectrumCache>,
}

impl RunOptions {
    pub fn seed_for(&self, cfg: &RunConfig) -> u64 {
        self.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED)
    }
}

/// Solves and evaluates one experiment. Failures are recorded in the
/// returned report rather than propagated.
pub fn run_experiment(
    e: &ExperimentConfig,
    seed: u64,
    cache: Option<&SpectrumCache>,
) -> (ExperimentReport, ExperimentTiming) {
    let mut timing = ExperimentTiming { id: e.id.clone(), ..ExperimentTiming::default() };
    let start = Instant::now();
    let acquired = build_model(e).and_then(|model| acquire_spectrum(e, &model, seed, cache).map(|a| (model, a)));
    timing.acquire_seconds = start.elapsed().as_secs_f64();
    let (model, acquired) = match acquired {
        Ok(v) => v,
        Err(err) => return (ExperimentReport::failed(&e.id, err.to_string()), timing),
    };
    timing.cache_hit = acquired.cache_hit;
    let s = acquired.spectrum;

    let start = Instant::now();
    let mut report = ExperimentReport {
        id: e.id.clone(),
        status: ExperimentStatus::Completed,
        failure: None,
        spectrum: Some(SpectrumSummary::new(&s, e.k_max)),
        checks: Vec::new(),
        evaluator_errors: Vec::new(),
        notes: Vec::new(),
        convergence: convergence_audit(&s, e.k_max + 1),
    };
    for entry in &e.suite {
        if entry.name() == Evaluator::Conjecture.name() && s.is_closed() {
            report.notes.push("conjecture skipped: it concerns Dirichlet spectra only".into());
            continue;
        }
        match evaluate(entry, &s, &model, e.k_max) {
            Ok(checks) => report.checks.extend(checks.iter().map(CheckRecord::from)),
            Err(err) => report.evaluator_errors.push((entry.name().to_string(), err.to_string())),
        }
    }
    timing.evaluate_seconds = start.elapsed().as_secs_f64();
    (report, timing)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(format!("cannot start worker pool: {e}")))
}

/// Runs every experiment of `cfg`; reports keep config order.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<(RunReport, Timings)> {
    run_selected(cfg, &cfg.experiments, opts)
}

pub fn run_selected(
    cfg: &RunConfig,
    experiments: &[ExperimentConfig],
    opts: &RunOptions,
) -> Result<(RunReport, Timings)> {
    let seed = opts.seed_for(cfg);
    let pool = pool(opts.jobs)?;
    let start = Instant::now();
    let results: Vec<(ExperimentReport, ExperimentTiming)> =
        pool.install(|| experiments.par_iter().map(|e| run_experiment(e, seed, opts.cache.as_ref())).collect());
    let (reports, timings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let timings = Timings {
        total_seconds: start.elapsed().as_secs_f64(),
        jobs: pool.current_num_threads(),
        experiments: timings,
    };
    Ok((RunReport::new(seed, reports), timings))
}

/// The experiment `id` reduced to a conjecture report up to `k_max`.
pub fn conjecture_experiment(cfg: &RunConfig, id: &str, k_max: usize) -> Result<ExperimentConfig> {
    let mut e = cfg.experiment(id)?.clone();
    e.k_max = k_max;
    e.suite = vec![SuiteEntry::Name(Evaluator::Conjecture.name().to_string())];
    e.validate()?;
    Ok(e)
}
