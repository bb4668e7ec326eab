//! Report files and curve CSVs.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use weaklab_core::asymptotics::BoundConstants;
use weaklab_core::{LevelSetEstimate, LimitEstimate, RegularityReport, SymmetryDiagnostic, Verdict, WeakNorm};

use crate::scenario::{Expectation, Scenario};

/// Bumped whenever a field changes meaning or disappears.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Outcome::Pass
    }
}

/// A verdict together with the outcome the scenario asserted for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// `None` means "anything but fail".
    pub asserted: Option<Expectation>,
    pub met: bool,
}

/// Wall-clock data; only written on request since it breaks byte equality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub scenario_echo: Scenario,
    pub seed: u64,
    pub p: f64,
    pub lp_norm_p: f64,
    pub estimates: Vec<LevelSetEstimate>,
    pub weak_norm_p: WeakNorm,
    pub limit: LimitEstimate,
    pub constants: BoundConstants,
    pub verdicts: Vec<ClaimOutcome>,
    pub symmetry: Option<SymmetryDiagnostic>,
    pub regularity: Option<RegularityReport>,
    pub outcome: Outcome,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityRunReport {
    pub version: u32,
    pub scenario_echo: Scenario,
    pub regularity: RegularityReport,
    pub verdicts: Vec<ClaimOutcome>,
    pub outcome: Outcome,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub outcome: Outcome,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub suite: String,
    pub scenarios: Vec<SuiteEntry>,
    pub outcome: Outcome,
    pub timing: Option<Timing>,
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Serialize)]
struct CurveRow<'a> {
    lambda: f64,
    #[serde(rename = "D_value")]
    d_value: f64,
    std_err: f64,
    mass: f64,
    method: &'a str,
    n_samples: u64,
}

/// One row per grid point: `lambda, D_value, std_err, mass, method, n_samples`.
pub fn write_curve<W: Write>(out: W, estimates: &[LevelSetEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in estimates {
        w.serialize(CurveRow {
            lambda: e.lambda,
            d_value: e.value,
            std_err: e.std_err,
            mass: e.mass,
            method: e.method.as_str(),
            n_samples: e.n_samples,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_file(path: &Path, estimates: &[LevelSetEstimate]) -> Result<()> {
    let f = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_curve(f, estimates)
}
