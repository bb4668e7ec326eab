//! Scenario execution.

use std::time::Instant;

use weaklab_core::regularity::regularity_report;
use weaklab_core::rng::derive_seed;
use weaklab_core::{
    check_bounds, limit_at_zero, sweep, symmetry_check, weak_norm_p, BoundTolerances, LevelSetQuery, RegularityReport,
    SweepConfig, Verdict, VerdictStatus,
};

use crate::builtins;
use crate::report::{
    ClaimOutcome, Outcome, RegularityRunReport, RunReport, SuiteEntry, SuiteReport, Timing, REPORT_VERSION,
};
use crate::scenario::{symmetry_method, ConfigError, Scenario, Suite};

/// Seed tag of the symmetry diagnostic; grid points use their index.
const SYMMETRY_TAG: u64 = u64::MAX;

fn core_err(e: weaklab_core::Error) -> ConfigError {
    ConfigError { field: String::new(), message: e.to_string() }
}

fn judge(scenario: &Scenario, verdict: Verdict) -> ClaimOutcome {
    let asserted = scenario.expect.get(&verdict.claim).copied();
    let met = match asserted {
        Some(e) => e.accepts(verdict.status),
        None => verdict.status != VerdictStatus::Fail,
    };
    ClaimOutcome { verdict, asserted, met }
}

fn status(ok: bool) -> VerdictStatus {
    if ok {
        VerdictStatus::Pass
    } else {
        VerdictStatus::Fail
    }
}

fn regularity_verdicts(rep: &RegularityReport) -> Vec<Verdict> {
    rep.checks
        .iter()
        .map(|c| Verdict {
            claim: format!("regularity.{}", c.constant),
            status: if c.declared.is_none() { VerdictStatus::NotApplicable } else { status(c.consistent) },
            margin: None,
            expected: c.declared,
            observed: Some(c.estimated),
            note: c.note.clone(),
        })
        .collect()
}

fn timing(start: Instant, workers: usize, record: bool) -> Option<Timing> {
    record.then(|| Timing { wall_seconds: start.elapsed().as_secs_f64(), workers })
}

/// Sweep, limit, bound verdicts and the optional diagnostics of one scenario.
///
/// The report depends only on the scenario; `workers` changes wall time only.
pub fn run_scenario(scenario: &Scenario, workers: usize, record_timing: bool) -> Result<RunReport, ConfigError> {
    let start = Instant::now();
    scenario.validate()?;
    let space = scenario.effective_space()?;
    let query = LevelSetQuery::new(&space, &scenario.function, scenario.p, scenario.grid.lambda_min);
    let cfg = SweepConfig { policy: scenario.policy, budget: scenario.budget, seed: scenario.seed, workers };
    let sweep_report = sweep(&query, &scenario.grid, &cfg).map_err(core_err)?;
    let weak = weak_norm_p(&sweep_report).map_err(core_err)?;
    let limit = limit_at_zero(&sweep_report).map_err(core_err)?;
    let tol = BoundTolerances { limit_rel: scenario.tolerances.limit_rel };
    let bounds = check_bounds(&sweep_report, &limit, space.profile(), scenario.theorem, &tol).map_err(core_err)?;
    let mut verdicts: Vec<ClaimOutcome> = bounds.verdicts.into_iter().map(|v| judge(scenario, v)).collect();

    let symmetry = match &scenario.symmetry {
        Some(sym) => {
            let method = symmetry_method(scenario.policy, &space);
            let seed = derive_seed(scenario.seed, &[SYMMETRY_TAG]);
            let d = symmetry_check(&query.at(sym.lambda), method, sym.budget, seed, workers).map_err(core_err)?;
            verdicts.push(judge(
                scenario,
                Verdict {
                    claim: "symmetry".into(),
                    status: status(d.ok),
                    margin: Some(if method.is_exact() {
                        1e-9 * d.full_mass - d.gap
                    } else {
                        3.0 * d.combined_se - d.gap
                    }),
                    expected: Some(d.full_mass),
                    observed: Some(2.0 * d.half_mass),
                    note: if method.is_exact() {
                        "|E − 2H| within 1e-9 relative".into()
                    } else {
                        "|E − 2H| within 3 combined SE".into()
                    },
                },
            ));
            Some(d)
        }
        None => None,
    };

    let regularity = match &scenario.regularity {
        Some(spec) => {
            let plan = spec.probe_plan(&space);
            let rep = regularity_report(&space, space.growth(), &plan, &spec.schedule(&space), spec.bishop_gromov_dim)
                .map_err(core_err)?;
            verdicts.extend(regularity_verdicts(&rep).into_iter().map(|v| judge(scenario, v)));
            Some(rep)
        }
        None => None,
    };

    let outcome = Outcome::from_ok(verdicts.iter().all(|v| v.met));
    Ok(RunReport {
        version: REPORT_VERSION,
        scenario_echo: scenario.clone(),
        seed: scenario.seed,
        p: scenario.p,
        lp_norm_p: sweep_report.lp_norm_p,
        estimates: sweep_report.estimates,
        weak_norm_p: weak,
        limit,
        constants: bounds.constants,
        verdicts,
        symmetry,
        regularity,
        outcome,
        timing: timing(start, workers, record_timing),
    })
}

/// Ball-volume probes only, with the scenario's regularity settings or defaults.
pub fn run_regularity(
    scenario: &Scenario,
    workers: usize,
    record_timing: bool,
) -> Result<RegularityRunReport, ConfigError> {
    let start = Instant::now();
    scenario.validate()?;
    let space = scenario.effective_space()?;
    let spec = scenario.regularity.unwrap_or_default();
    let plan = spec.probe_plan(&space);
    let rep = regularity_report(&space, space.growth(), &plan, &spec.schedule(&space), spec.bishop_gromov_dim)
        .map_err(core_err)?;
    let verdicts: Vec<ClaimOutcome> = regularity_verdicts(&rep).into_iter().map(|v| judge(scenario, v)).collect();
    let outcome = Outcome::from_ok(verdicts.iter().all(|v| v.met));
    Ok(RegularityRunReport {
        version: REPORT_VERSION,
        scenario_echo: scenario.clone(),
        regularity: rep,
        verdicts,
        outcome,
        timing: timing(start, workers, record_timing),
    })
}

/// Runs every builtin scenario tagged for `suite`, in name order.
pub fn run_suite(
    suite: Suite,
    workers: usize,
    record_timing: bool,
    mut progress: impl FnMut(&SuiteEntry),
) -> Result<SuiteReport, ConfigError> {
    let start = Instant::now();
    let mut scenarios = Vec::new();
    for scenario in builtins::for_suite(suite)? {
        let report = run_scenario(&scenario, workers, record_timing)?;
        let entry = SuiteEntry { name: scenario.name.clone(), outcome: report.outcome, report };
        progress(&entry);
        scenarios.push(entry);
    }
    let outcome = Outcome::from_ok(scenarios.iter().all(|s| s.outcome.is_pass()));
    Ok(SuiteReport {
        version: REPORT_VERSION,
        suite: suite.name().into(),
        scenarios,
        outcome,
        timing: timing(start, workers, record_timing),
    })
}
