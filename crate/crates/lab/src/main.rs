use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use driftlap::cache::SpectrumCache;
use driftlap::config::{OracleSpec, RunConfig};
use driftlap::model::{acquire_spectrum, build_model, oracle_spectrum};
use driftlap::report::{Outcome, RunReport};
use driftlap::runner::{conjecture_experiment, run, run_selected, RunOptions};
use driftlap::{LabError, Result};
use serde_json::{json, Value};

/// Exit status for usage, configuration and I/O errors.
const EXIT_USAGE: u8 = 1;

#[derive(Parser)]
#[command(name = "driftlap", version, about = "Drift-Laplacian spectra and eigenvalue inequality checks")]
struct Cli {
    /// Seed for the iterative eigensolver (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Spectrum cache directory; falls back to $DRIFTLAP_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Number of experiments run in parallel.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one experiment and print its spectrum as JSON.
    Spectrum { config: PathBuf, id: String },
    /// Print a closed-form spectrum, e.g. `oracle sphere '{"m":2,"radius":1}' --k 10`.
    Oracle {
        name: String,
        #[arg(default_value = "{}")]
        params: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Run every experiment and write the reports.
    Verify {
        config: PathBuf,
        /// Output directory (default: the config's `output_dir`, else `runs/<config stem>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the gap conjecture for one experiment; never fails on its verdicts.
    Conjecture {
        config: PathBuf,
        id: String,
        #[arg(long, default_value_t = 20)]
        kmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize an existing run directory.
    Report { run_dir: PathBuf },
}

fn options(cli: &Cli) -> Result<RunOptions> {
    Ok(RunOptions { seed: cli.seed, jobs: cli.jobs, cache: SpectrumCache::resolve(cli.cache_dir.as_deref())? })
}

fn default_out(config: &Path, cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.clone().unwrap_or_else(|| {
        let stem = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
        Path::new("runs").join(stem)
    })
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn finish(report: &RunReport, dir: &Path) -> u8 {
    eprint!("{}", report.digest());
    eprintln!("reports written to {}", dir.display());
    report.outcome().code() as u8
}

fn execute(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Spectrum { config, id } => {
            let cfg = RunConfig::load(config)?;
            let opts = options(cli)?;
            let e = cfg.experiment(id)?;
            let acquired =
                build_model(e).and_then(|m| acquire_spectrum(e, &m, opts.seed_for(&cfg), opts.cache.as_ref()));
            match acquired {
                Ok(a) => {
                    print_json(&json!({
                        "id": e.id,
                        "cache_hit": a.cache_hit,
                        "cache_key": a.cache_key,
                        "spectrum": a.spectrum,
                    }))?;
                    Ok(0)
                }
                Err(err @ LabError::Core(_)) => {
                    eprintln!("error: {err}");
                    Ok(Outcome::SolverFailure.code() as u8)
                }
                Err(err) => Err(err),
            }
        }
        Command::Oracle { name, params, k } => {
            let mut params_json: Value = serde_json::from_str(params)?;
            let obj = params_json
                .as_object_mut()
                .ok_or_else(|| LabError::Config("oracle parameters must be a JSON object".into()))?;
            obj.insert("name".into(), Value::String(name.clone()));
            let oracle: OracleSpec = serde_json::from_value(params_json)?;
            let s = oracle_spectrum(&oracle, *k)?;
            print_json(&json!({ "index_base": s.index_base, "eigenvalues": s.eigenvalues }))?;
            Ok(0)
        }
        Command::Verify { config, out } => {
            let cfg = RunConfig::load(config)?;
            let (report, timings) = run(&cfg, &options(cli)?)?;
            let dir = out.clone().unwrap_or_else(|| default_out(config, &cfg));
            report.write(&dir)?;
            timings.write(&dir)?;
            Ok(finish(&report, &dir))
        }
        Command::Conjecture { config, id, kmax, out } => {
            let cfg = RunConfig::load(config)?;
            let e = conjecture_experiment(&cfg, id, *kmax)?;
            let (report, timings) = run_selected(&cfg, std::slice::from_ref(&e), &options(cli)?)?;
            for c in report.experiments.iter().flat_map(|x| &x.checks) {
                println!("k={:<4} lhs={:<14.8} rhs={:<14.8} {}", c.k, c.lhs, c.rhs, c.verdict.as_str());
            }
            for note in report.experiments.iter().flat_map(|x| &x.notes) {
                eprintln!("{note}");
            }
            let dir = out.clone().unwrap_or_else(|| default_out(config, &cfg).join(format!("conjecture-{id}")));
            report.write(&dir)?;
            timings.write(&dir)?;
            Ok(finish(&report, &dir))
        }
        Command::Report { run_dir } => {
            let report = RunReport::load(run_dir)?;
            print!("{}", report.digest());
            Ok(report.outcome().code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
