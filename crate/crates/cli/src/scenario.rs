//! Scenario files: one declarative JSON document per experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use weaklab_core::levelset::MIN_BUDGET;
use weaklab_core::regularity::ProbePlan;
use weaklab_core::{
    GrowthFunction, LambdaGrid, LevelSetQuery, Method, MethodPolicy, SpaceDescriptor, SpaceKind, TestFunction,
    TheoremSelector, VerdictStatus,
};

pub const SCENARIO_VERSION: u32 = 1;

/// Claims a scenario may attach an expectation to.
pub const CLAIMS: &[&str] = &[
    "upper_bound",
    "lower_bound",
    "limit",
    "limit_band",
    "symmetry",
    "regularity.ahlfors_upper",
    "regularity.ahlfors_lower",
    "regularity.doubling",
    "regularity.avr",
];

/// A scenario that could not be loaded or is inconsistent.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() || self.field == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        }
    }
}

/// Asserted outcome of a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    Fail,
    ExpectedFailure,
    NotApplicable,
    Any,
}

impl Expectation {
    pub fn accepts(self, status: VerdictStatus) -> bool {
        match self {
            Expectation::Any => true,
            Expectation::Pass => status == VerdictStatus::Pass,
            Expectation::Fail => status == VerdictStatus::Fail,
            Expectation::ExpectedFailure => status == VerdictStatus::ExpectedFailure,
            Expectation::NotApplicable => status == VerdictStatus::NotApplicable,
        }
    }
}

fn default_limit_rel() -> f64 {
    0.005
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of the limit claims on top of 3 standard errors.
    #[serde(default = "default_limit_rel")]
    pub limit_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { limit_rel: default_limit_rel() }
    }
}

/// Compare `E`-mass with twice the half-set mass at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpec {
    pub lambda: f64,
    /// Samples per mass estimate; ignored by exact methods.
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    pub centers: usize,
    pub offsets: (f64, f64),
    pub radii_count: usize,
    pub radii: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

/// Ball-volume probes; every field falls back to a per-space default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularitySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avr_schedule: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bishop_gromov_dim: Option<f64>,
}

impl RegularitySpec {
    pub fn probe_plan(&self, space: &SpaceDescriptor) -> ProbePlan<f64> {
        match self.plan {
            Some(p) => ProbePlan::geometric(space, p.centers, p.offsets, p.radii_count, p.radii),
            // cosh overflows long before r = 1e3.
            None if matches!(space.kind(), SpaceKind::HyperbolicHalfPlane) => {
                ProbePlan::geometric(space, 16, (0.1, 10.0), 24, (1e-3, 30.0))
            }
            None => ProbePlan::standard(space),
        }
    }

    pub fn schedule(&self, space: &SpaceDescriptor) -> Vec<f64> {
        let s = self.avr_schedule.unwrap_or(match space.kind() {
            SpaceKind::HyperbolicHalfPlane => ScheduleSpec { r_min: 1.0, r_max: 30.0, count: 8 },
            _ => ScheduleSpec { r_min: 1e2, r_max: 1e6, count: 9 },
        });
        weaklab_core::regularity::geometric(s.r_min, s.r_max, s.count)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

/// Exact line evaluation when the space allows it and the policy does not
/// force sampling; Monte Carlo otherwise.
pub fn symmetry_method(policy: MethodPolicy, space: &SpaceDescriptor) -> Method {
    if policy != MethodPolicy::MonteCarlo && space.is_line() {
        Method::Exact1d
    } else {
        Method::MonteCarlo
    }
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

/// One experiment: a space, a function, an exponent and what to check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<Suite>,
    pub space: SpaceDescriptor,
    pub function: TestFunction,
    pub p: f64,
    /// Overrides the growth function declared by the space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthFunction>,
    pub theorem: TheoremSelector,
    pub grid: LambdaGrid,
    #[serde(default)]
    pub policy: MethodPolicy,
    pub budget: u64,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularitySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, Expectation>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputPaths,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            bad(field, e.into_inner().to_string())
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| bad("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The space with the scenario's growth override applied.
    pub fn effective_space(&self) -> Result<SpaceDescriptor, ConfigError> {
        match &self.growth {
            Some(g) => self.space.clone().with_growth(g.clone()).map_err(|e| bad("growth", e.to_string())),
            None => Ok(self.space.clone()),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != SCENARIO_VERSION {
            return Err(bad("version", format!("unsupported version {}, expected {SCENARIO_VERSION}", self.version)));
        }
        if self.name.is_empty() {
            return Err(bad("name", "must not be empty"));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(bad("p", format!("must be finite and at least 1, got {}", self.p)));
        }
        self.grid.validate().map_err(|e| bad("grid", e.to_string()))?;
        if self.policy == MethodPolicy::MonteCarlo && self.budget < MIN_BUDGET {
            return Err(bad("budget", format!("Monte Carlo needs a budget of at least {MIN_BUDGET}")));
        }
        if !(self.tolerances.limit_rel >= 0.0 && self.tolerances.limit_rel < 1.0) {
            return Err(bad("tolerances.limit_rel", "must lie in [0, 1)"));
        }
        let space = self.effective_space()?;
        let q = LevelSetQuery::new(&space, &self.function, self.p, 1.0);
        q.validate().map_err(|e| bad("function", e.to_string()))?;
        if let Some(sym) = &self.symmetry {
            if !(sym.lambda > 0.0 && sym.lambda.is_finite()) {
                return Err(bad("symmetry.lambda", "must be positive and finite"));
            }
            if symmetry_method(self.policy, &space) == Method::MonteCarlo && sym.budget < MIN_BUDGET {
                return Err(bad("symmetry.budget", format!("Monte Carlo needs a budget of at least {MIN_BUDGET}")));
            }
        }
        if let Some(reg) = &self.regularity {
            if let Some(s) = reg.avr_schedule {
                if !(s.r_min > 0.0 && s.r_min < s.r_max && s.r_max.is_finite()) {
                    return Err(bad("regularity.avr_schedule", "needs 0 < r_min < r_max < inf"));
                }
            }
        }
        for key in self.expect.keys() {
            if !CLAIMS.contains(&key.as_str()) {
                return Err(bad(
                    format!("expect.{key}"),
                    format!("unknown claim; known claims: {}", CLAIMS.join(", ")),
                ));
            }
        }
        Ok(())
    }
}
