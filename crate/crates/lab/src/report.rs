//! Run reports and their on-disk forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use driftlap_core::bounds::BoundCheck;
use driftlap_core::eigensolve::SpectrumWarning;
use driftlap_core::{Spectrum, Verdict};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::evaluate::is_asserted;

pub const CHECKS_FILE: &str = "checks.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "plot_data.csv";
pub const TIMINGS_FILE: &str = "timings.json";

pub const CSV_HEADER: &str = "experiment_id,check_name,k,lhs,rhs,slack,uncertainty,verdict";
pub const PLOT_HEADER: &str = "experiment_id,check_name,k,gap,bound";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub uncertainty: f64,
    pub verdict: Verdict,
    pub asserted: bool,
}

impl From<&BoundCheck> for CheckRecord {
    fn from(c: &BoundCheck) -> Self {
        Self {
            name: c.name.to_string(),
            k: c.k,
            lhs: c.lhs,
            rhs: c.rhs,
            slack: c.slack,
            uncertainty: c.uncertainty,
            verdict: c.verdict,
            asserted: is_asserted(c.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub index_base: usize,
    pub eigenvalues: Vec<f64>,
    pub uncertainties: Vec<f64>,
    pub levels: usize,
    pub finest_grid: Vec<usize>,
    pub warnings: Vec<SpectrumWarning>,
}

impl SpectrumSummary {
    /// First `k_max + 1` entries of `s`.
    pub fn new(s: &Spectrum, k_max: usize) -> Self {
        let len = (k_max + 1).min(s.len());
        Self {
            index_base: s.index_base,
            eigenvalues: s.eigenvalues[..len].to_vec(),
            uncertainties: s.uncertainties[..len].to_vec(),
            levels: s.raw_levels.len(),
            finest_grid: s.raw_levels.last().map(|l| l.points_per_axis.clone()).unwrap_or_default(),
            warnings: s.warnings.clone(),
        }
    }
}

/// Observed convergence order of one raw-level eigenvalue sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    /// Position in the per-level eigenvalue lists.
    pub position: usize,
    /// `log₂` of the ratio of the last two level differences; `None` when
    /// the differences vanish or change sign.
    pub observed_order: Option<f64>,
}

pub fn convergence_audit(s: &Spectrum, count: usize) -> Vec<ConvergenceEntry> {
    let levels = &s.raw_levels;
    if levels.len() < 3 {
        return Vec::new();
    }
    let tail = &levels[levels.len() - 3..];
    let available = tail.iter().map(|l| l.eigenvalues.len()).min().unwrap_or(0);
    (0..count.min(available))
        .map(|j| {
            let d1 = tail[1].eigenvalues[j] - tail[0].eigenvalues[j];
            let d2 = tail[2].eigenvalues[j] - tail[1].eigenvalues[j];
            let ratio = d1 / d2;
            let observed_order = (ratio.is_finite() && ratio > 0.0).then(|| ratio.log2());
            ConvergenceEntry { position: j, observed_order }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentStatus {
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub status: ExperimentStatus,
    /// Why the spectrum could not be produced.
    pub failure: Option<String>,
    pub spectrum: Option<SpectrumSummary>,
    pub checks: Vec<CheckRecord>,
    /// Evaluators that could not run, with the reason.
    pub evaluator_errors: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub convergence: Vec<ConvergenceEntry>,
}

impl ExperimentReport {
    pub fn failed(id: &str, reason: String) -> Self {
        Self {
            id: id.to_string(),
            status: ExperimentStatus::Failed,
            failure: Some(reason),
            spectrum: None,
            checks: Vec::new(),
            evaluator_errors: Vec::new(),
            notes: Vec::new(),
            convergence: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub holds_strictly: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::HoldsStrictly => self.holds_strictly += 1,
            Verdict::Holds => self.holds += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiments: usize,
    pub failed_experiments: usize,
    pub evaluator_errors: usize,
    /// Asserted checks only.
    pub asserted: VerdictCounts,
    pub reported_only: VerdictCounts,
    pub min_slack: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub experiments: Vec<ExperimentReport>,
    pub summary: Summary,
}

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AllHold,
    Violation,
    SolverFailure,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::AllHold => 0,
            Outcome::Violation => 2,
            Outcome::SolverFailure => 3,
        }
    }
}

impl RunReport {
    pub fn new(seed: u64, experiments: Vec<ExperimentReport>) -> Self {
        let mut summary = Summary { experiments: experiments.len(), ..Summary::default() };
        for e in &experiments {
            if e.status == ExperimentStatus::Failed {
                summary.failed_experiments += 1;
            }
            summary.evaluator_errors += e.evaluator_errors.len();
            for c in &e.checks {
                if c.asserted {
                    summary.asserted.add(c.verdict);
                } else {
                    summary.reported_only.add(c.verdict);
                }
                let slot = summary.min_slack.entry(c.name.clone()).or_insert(f64::INFINITY);
                // NaN slack leaves the minimum untouched
                if c.slack < *slot {
                    *slot = c.slack;
                }
            }
        }
        Self { seed, experiments, summary }
    }

    /// Failures outrank violations.
    pub fn outcome(&self) -> Outcome {
        let s = &self.summary;
        if s.failed_experiments > 0 || s.evaluator_errors > 0 || s.asserted.inconclusive > 0 {
            Outcome::SolverFailure
        } else if s.asserted.violated > 0 {
            Outcome::Violation
        } else {
            Outcome::AllHold
        }
    }

    pub fn checks_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.experiments {
            for c in &e.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    e.id,
                    c.name,
                    c.k,
                    c.lhs,
                    c.rhs,
                    c.slack,
                    c.uncertainty,
                    c.verdict.as_str()
                );
            }
        }
        out
    }

    /// Gap checks as `k, gap, bound` rows for plotting.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from(PLOT_HEADER);
        out.push('\n');
        for e in &self.experiments {
            for c in e.checks.iter().filter(|c| c.name.ends_with("_gap")) {
                let _ = writeln!(out, "{},{},{},{},{}", e.id, c.name, c.k, c.lhs, c.rhs);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        // render everything first so a serialization error leaves no files
        let files = [(CHECKS_FILE, self.checks_csv()), (REPORT_FILE, self.to_json()?), (PLOT_FILE, self.plot_csv())];
        files.iter().map(|(name, body)| write_atomic(&dir.join(name), body.as_bytes())).collect()
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(REPORT_FILE);
        let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Human-readable digest for the terminal.
    pub fn digest(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} experiments, {} failed, {} evaluator errors",
            s.experiments, s.failed_experiments, s.evaluator_errors
        );
        let a = &s.asserted;
        let _ = writeln!(
            out,
            "asserted: {} holds_strictly, {} holds, {} violated, {} inconclusive",
            a.holds_strictly, a.holds, a.violated, a.inconclusive
        );
        let r = &s.reported_only;
        if r != &VerdictCounts::default() {
            let _ = writeln!(
                out,
                "reported only: {} holds_strictly, {} holds, {} violated, {} inconclusive",
                r.holds_strictly, r.holds, r.violated, r.inconclusive
            );
        }
        for (name, slack) in &s.min_slack {
            let _ = writeln!(out, "  min slack {name:<20} {slack:.6e}");
        }
        for e in &self.experiments {
            if let Some(f) = &e.failure {
                let _ = writeln!(out, "  {} failed: {f}", e.id);
            }
            for (name, why) in &e.evaluator_errors {
                let _ = writeln!(out, "  {} {name}: {why}", e.id);
            }
            for c in e.checks.iter().filter(|c| c.asserted && c.verdict == Verdict::Violated) {
                let _ = writeln!(out, "  {} {} k={} violated: lhs={} rhs={}", e.id, c.name, c.k, c.lhs, c.rhs);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTiming {
    pub id: String,
    pub acquire_seconds: f64,
    pub evaluate_seconds: f64,
    pub cache_hit: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub jobs: usize,
    pub experiments: Vec<ExperimentTiming>,
}

impl Timings {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        write_atomic(&dir.join(TIMINGS_FILE), body.as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<PathBuf> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| LabError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| LabError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| LabError::io(path, e.error))?;
    Ok(path.to_path_buf())
}
