use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};
use weaklab::report::{write_curve_file, write_json, ClaimOutcome, Outcome};
use weaklab::{builtins, run_regularity, run_scenario, run_suite, ConfigError, Scenario, Suite};

#[derive(Parser)]
#[command(name = "weaklab", version, about = "Level-set mass experiments on metric measure spaces")]
struct Cli {
    /// Worker threads for sampling; never changes results.
    #[arg(long, global = true, env = "WEAKLAB_WORKERS")]
    workers: Option<usize>,
    /// Record wall time in the report (makes reports differ between runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep λ, fit the limit and check the bound claims of one scenario.
    Run {
        /// Scenario file, or `builtin:<name>`.
        #[arg(long)]
        scenario: String,
        /// Report path; defaults to the scenario's `output.report`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Curve CSV path; defaults to the scenario's `output.csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run every builtin scenario of a suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the regularity constants of a scenario's space.
    Regularity {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin scenarios.
    List,
}

/// Failure classes mapped to exit codes 1 and 2.
enum Failure {
    Verdict,
    Config(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn load(spec: &str) -> Result<Scenario, ConfigError> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtins::get(name),
        None => Scenario::from_file(Path::new(spec)),
    }
}

fn print_claims(claims: &[ClaimOutcome]) {
    for c in claims {
        let tag = if c.met { "ok" } else { "MISMATCH" };
        let status = serde_json::to_value(c.verdict.status).unwrap_or_default();
        let status = status.as_str().unwrap_or("?");
        println!("  {:<28} {:<17} {tag}", c.verdict.claim, status);
    }
}

fn finish(outcome: Outcome) -> Result<(), Failure> {
    if outcome.is_pass() {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
    match cli.command {
        Command::Run { scenario, out, csv } => {
            let s = load(&scenario)?;
            let out = out
                .or_else(|| s.output.report.clone())
                .ok_or_else(|| anyhow!("no report path: pass --out or set output.report"))?;
            let csv = csv.or_else(|| s.output.csv.clone());
            let report = run_scenario(&s, workers, cli.timing)?;
            write_json(&out, &report)?;
            if let Some(path) = csv {
                write_curve_file(&path, &report.estimates)?;
            }
            match report.limit.value {
                Some(v) => println!("{}: limit {v:.6} ± {:.2e}", s.name, report.limit.std_err),
                None => println!("{}: no limit ({})", s.name, report.limit.reason),
            }
            print_claims(&report.verdicts);
            finish(report.outcome)
        }
        Command::Verify { suite, out } => {
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let report = run_suite(suite, workers, cli.timing, |e| {
                let tag = if e.outcome.is_pass() { "PASS" } else { "FAIL" };
                println!("[{tag}] {}", e.name);
            })?;
            if let Some(out) = out {
                write_json(&out, &report)?;
            }
            finish(report.outcome)
        }
        Command::Regularity { scenario, out } => {
            let s = load(&scenario)?;
            let out = out
                .or_else(|| s.output.report.clone())
                .ok_or_else(|| anyhow!("no report path: pass --out or set output.report"))?;
            let report = run_regularity(&s, workers, cli.timing)?;
            write_json(&out, &report)?;
            let r = &report.regularity;
            println!(
                "{}: C_a {:.6}  C_A {:.6}  C_d {:.6}  AVR {:.6}",
                s.name, r.ahlfors.c_lower, r.ahlfors.c_upper, r.doubling.c_d, r.avr.value
            );
            print_claims(&report.verdicts);
            finish(report.outcome)
        }
        Command::List => {
            for s in builtins::all()? {
                let suites: Vec<_> = s.suites.iter().map(|t| t.name()).collect();
                println!("{:<32} [{}] {}", s.name, suites.join(","), s.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
