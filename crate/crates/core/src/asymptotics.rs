//! λ-sweeps, the weak-norm and λ→0 estimates, and bound verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{config, input, Result};
use crate::levelset::{
    exact_half_mass_1d, exact_mass_1d, exact_mass_indicator, half_set_mass, mc_mass, supports_exact_1d,
    supports_exact_indicator, LevelSetEstimate, LevelSetQuery, Method, MIN_BUDGET,
};
use crate::real::Real;
use crate::rng::derive_seed;

/// Smallest number of grid points accepted.
pub const MIN_GRID_POINTS: usize = 8;
/// Relative residual of the λ→0 fit above which no limit is reported.
pub const FIT_RESIDUAL_TOL: f64 = 0.05;
/// Relative spread of detrended decade means above which no limit is reported.
pub const OSCILLATION_TOL: f64 = 0.05;

/// Geometric grid of λ values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct LambdaGrid<T> {
    pub lambda_min: T,
    pub lambda_max: T,
    pub count: usize,
}

impl<T: Real> LambdaGrid<T> {
    pub fn new(lambda_min: T, lambda_max: T, count: usize) -> Result<Self> {
        let g = Self { lambda_min, lambda_max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min > T::zero() && self.lambda_min < self.lambda_max && self.lambda_max.is_finite()) {
            return input("lambda grid needs 0 < lambda_min < lambda_max < inf");
        }
        if self.count < MIN_GRID_POINTS {
            return input(format!("lambda grid needs at least {MIN_GRID_POINTS} points, got {}", self.count));
        }
        Ok(())
    }

    /// Ascending grid values; the end points are exact.
    pub fn values(&self) -> Vec<T> {
        crate::regularity::geometric(self.lambda_min, self.lambda_max, self.count)
    }
}

/// Which estimator a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodPolicy {
    /// Exact line evaluation, else exact indicator quadrature, else Monte Carlo.
    #[default]
    Auto,
    #[serde(rename = "exact_1d")]
    Exact1d,
    ExactIndicator,
    MonteCarlo,
}

/// Sampling controls shared by all grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub policy: MethodPolicy,
    /// Total Monte Carlo budget, split evenly over the grid.
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Grid maximum of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WeakNorm<T> {
    pub value: T,
    pub std_err: T,
    pub lambda_at_max: T,
    /// The maximum sits at `lambda_min`, so the supremum may only be
    /// approached as `λ → 0`.
    pub at_lower_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    Converged,
    NotApplicable,
}

/// Extrapolated `lim_{λ→0} D(λ)` with fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LimitEstimate<T> {
    pub status: LimitStatus,
    /// Intercept `c` of `D ≈ c + a λ^p` over the smallest decade.
    pub value: Option<T>,
    pub std_err: T,
    pub slope: T,
    /// RMS fit residual relative to the mean of `D` over the fitted points.
    pub rel_residual: T,
    pub points_used: usize,
    /// Detrended means of `D` over the three smallest full decades, smallest first.
    pub decade_means: Vec<T>,
    pub decade_spread: Option<T>,
    /// Smallest and largest `D` over the smallest decade.
    pub decade_min: T,
    pub decade_max: T,
    pub reason: String,
}

/// One λ-sweep of a query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SweepReport<T> {
    pub p: T,
    pub lp_norm_p: T,
    pub finite_measure: bool,
    pub grid: LambdaGrid<T>,
    pub estimates: Vec<LevelSetEstimate<T>>,
}

fn pick_method<T: Real>(q: &LevelSetQuery<'_, T>, policy: MethodPolicy) -> Method {
    match policy {
        MethodPolicy::Exact1d => Method::Exact1d,
        MethodPolicy::ExactIndicator => Method::ExactIndicator,
        MethodPolicy::MonteCarlo => Method::MonteCarlo,
        MethodPolicy::Auto if supports_exact_1d(q) => Method::Exact1d,
        MethodPolicy::Auto if supports_exact_indicator(q) => Method::ExactIndicator,
        MethodPolicy::Auto => Method::MonteCarlo,
    }
}

/// Evaluates one query with the given method.
pub fn evaluate<T: Real>(
    q: &LevelSetQuery<'_, T>,
    method: Method,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<LevelSetEstimate<T>> {
    match method {
        Method::Exact1d => exact_mass_1d(q),
        Method::ExactIndicator => exact_mass_indicator(q),
        Method::MonteCarlo => mc_mass(q, budget, seed, workers),
    }
}

/// Evaluates `D` at every grid point. `query.lambda` is ignored.
pub fn sweep<T: Real>(query: &LevelSetQuery<'_, T>, grid: &LambdaGrid<T>, cfg: &SweepConfig) -> Result<SweepReport<T>> {
    grid.validate()?;
    let method = pick_method(query, cfg.policy);
    let per_point = cfg.budget / grid.count as u64;
    if method == Method::MonteCarlo && per_point < MIN_BUDGET {
        return input(format!(
            "budget {} gives {per_point} samples per grid point; at least {MIN_BUDGET} are needed",
            cfg.budget
        ));
    }
    let mut estimates = Vec::with_capacity(grid.count);
    for (i, lambda) in grid.values().into_iter().enumerate() {
        let q = query.at(lambda);
        let seed = derive_seed(cfg.seed, &[i as u64]);
        estimates.push(evaluate(&q, method, per_point, seed, cfg.workers)?);
    }
    Ok(SweepReport {
        p: query.p,
        lp_norm_p: query.u.lp_norm_p(query.space, query.p)?,
        finite_measure: query.space.total_mass_finite(),
        grid: *grid,
        estimates,
    })
}

/// Maximum of `D` over the grid.
pub fn weak_norm_p<T: Real>(report: &SweepReport<T>) -> Result<WeakNorm<T>> {
    let Some((k, best)) =
        report.estimates.iter().enumerate().fold(None::<(usize, &LevelSetEstimate<T>)>, |acc, (i, e)| match acc {
            Some((_, b)) if b.value >= e.value => acc,
            _ => Some((i, e)),
        })
    else {
        return input("sweep report has no estimates");
    };
    let lowest = report
        .estimates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lambda.partial_cmp(&b.1.lambda).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(WeakNorm {
        value: best.value,
        std_err: best.std_err,
        lambda_at_max: best.lambda,
        at_lower_boundary: k == lowest && best.value > T::zero(),
    })
}

/// Weighted least squares for `y = c + a x`; returns `(c, a, var_c)`.
fn linear_fit<T: Real>(x: &[T], y: &[T], w: &[T]) -> (T, T, T) {
    let sw = w.iter().fold(T::zero(), |s, &v| s + v);
    let mx = x.iter().zip(w).fold(T::zero(), |s, (&a, &b)| s + a * b) / sw;
    let my = y.iter().zip(w).fold(T::zero(), |s, (&a, &b)| s + a * b) / sw;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for i in 0..x.len() {
        let dx = x[i] - mx;
        sxx = sxx + w[i] * dx * dx;
        sxy = sxy + w[i] * dx * (y[i] - my);
    }
    let a = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let c = my - a * mx;
    let var_c = if sxx > T::zero() { sw.recip() + mx * mx / sxx } else { sw.recip() };
    (c, a, var_c)
}

/// Fits `D = c + a λ^p` over the smallest decade of the grid and checks the
/// three smallest full decades for oscillation.
pub fn limit_at_zero<T: Real>(report: &SweepReport<T>) -> Result<LimitEstimate<T>> {
    let mut pts: Vec<&LevelSetEstimate<T>> = report.estimates.iter().collect();
    pts.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    let Some(first) = pts.first() else {
        return input("sweep report has no estimates");
    };
    let ten = T::lit(10.0);
    let lo = first.lambda;
    let edge = lo * ten * T::lit(1.0 + 1e-9);
    let decade: Vec<&LevelSetEstimate<T>> = pts.iter().copied().filter(|e| e.lambda <= edge).collect();
    if decade.len() < MIN_GRID_POINTS {
        return input(format!(
            "limit fit needs at least {MIN_GRID_POINTS} grid points in the smallest decade, got {}",
            decade.len()
        ));
    }
    let p = report.p;
    let x: Vec<T> = decade.iter().map(|e| e.lambda.powf(p)).collect();
    let y: Vec<T> = decade.iter().map(|e| e.value).collect();
    let stochastic = decade.iter().any(|e| e.std_err > T::zero());
    let w: Vec<T> = if stochastic {
        let floor = decade.iter().fold(T::zero(), |m, e| m.max(e.std_err)) * T::lit(1e-3);
        decade.iter().map(|e| (e.std_err.max(floor).max(T::min_positive_value())).powi(-2)).collect()
    } else {
        vec![T::one(); decade.len()]
    };
    let (c, a, var_c) = linear_fit(&x, &y, &w);
    let n = T::from_count(decade.len());
    let mean = y.iter().fold(T::zero(), |s, &v| s + v) / n;
    let rss = x.iter().zip(&y).fold(T::zero(), |s, (&xi, &yi)| {
        let r = yi - (c + a * xi);
        s + r * r
    });
    let rms = (rss / n).sqrt();
    let rel_residual = if mean.abs() > T::zero() { rms / mean.abs() } else { T::zero() };
    let std_err = if stochastic { var_c.sqrt() } else { T::zero() };
    let decade_min = y.iter().fold(T::infinity(), |m, &v| m.min(v));
    let decade_max = y.iter().fold(T::neg_infinity(), |m, &v| m.max(v));

    let mut decade_means = Vec::new();
    let hi = pts.last().unwrap().lambda;
    for k in 0..3 {
        let a_lo = lo * ten.powi(k);
        let a_hi = a_lo * ten;
        if a_hi > hi * T::lit(1.0 + 1e-9) {
            break;
        }
        let slice: Vec<T> = pts
            .iter()
            .filter(|e| e.lambda >= a_lo * T::lit(1.0 - 1e-9) && e.lambda <= a_hi * T::lit(1.0 + 1e-9))
            .map(|e| e.value - a * e.lambda.powf(p))
            .collect();
        if slice.is_empty() {
            break;
        }
        decade_means.push(slice.iter().fold(T::zero(), |s, &v| s + v) / T::from_count(slice.len()));
    }
    let decade_spread = (decade_means.len() == 3).then(|| {
        let lo = decade_means.iter().fold(T::infinity(), |m, &v| m.min(v));
        let hi = decade_means.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let mean = decade_means.iter().fold(T::zero(), |s, &v| s + v) / T::lit(3.0);
        if mean.abs() > T::zero() {
            (hi - lo) / mean.abs()
        } else {
            T::zero()
        }
    });

    let mut reasons = Vec::new();
    if rel_residual > T::lit(FIT_RESIDUAL_TOL) {
        reasons.push(format!("relative fit residual {:.3e} exceeds {FIT_RESIDUAL_TOL}", rel_residual.as_f64()));
    }
    if let Some(s) = decade_spread {
        if s > T::lit(OSCILLATION_TOL) {
            reasons.push(format!("decade means spread by {:.3e}, above {OSCILLATION_TOL}", s.as_f64()));
        }
    }
    let converged = reasons.is_empty();
    Ok(LimitEstimate {
        status: if converged { LimitStatus::Converged } else { LimitStatus::NotApplicable },
        value: converged.then_some(c),
        std_err,
        slope: a,
        rel_residual,
        points_used: decade.len(),
        decade_means,
        decade_spread,
        decade_min,
        decade_max,
        reason: if converged { "fit converged".to_string() } else { reasons.join("; ") },
    })
}

/// Which family of constants the verdicts are checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremSelector {
    /// Growth `r^s` with an asymptotic volume ratio: `c1 = c3 = 2 AVR`, `c2 = 2^{p+1} C_A`.
    Avr,
    /// Growth `r^s`, two-sided Ahlfors regular: `c1 = 2 C_a`, limits within `[2 C_a, 2 C_A]`.
    Ahlfors,
    /// General convex growth `f` with `AVR_f` and upper `f`-Ahlfors constant.
    AvrGrowth,
    /// General convex growth `f`, two-sided `f`-Ahlfors regular.
    AhlforsGrowth,
}

impl TheoremSelector {
    fn uses_avr(&self) -> bool {
        matches!(self, TheoremSelector::Avr | TheoremSelector::AvrGrowth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// The bound is known not to hold here and the data confirm it.
    ExpectedFailure,
    NotApplicable,
}

/// Outcome of one claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub status: VerdictStatus,
    /// Signed distance to the threshold, positive on the passing side.
    pub margin: Option<f64>,
    pub expected: Option<f64>,
    pub observed: Option<f64>,
    pub note: String,
}

/// Constants used by the verdicts, already multiplied by nothing; the
/// thresholds are these times `||u||_p^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub band: Option<(f64, f64)>,
    pub lp_norm_p: f64,
}

/// Tolerances for [`check_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTolerances {
    /// Relative tolerance for the limit and band claims on top of `3 SE`.
    pub limit_rel: f64,
}

impl Default for BoundTolerances {
    fn default() -> Self {
        Self { limit_rel: 0.005 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsCheck {
    pub constants: BoundConstants,
    pub verdicts: Vec<Verdict>,
}

fn status(ok: bool) -> VerdictStatus {
    if ok {
        VerdictStatus::Pass
    } else {
        VerdictStatus::Fail
    }
}

/// Checks the upper, lower and limit claims of the selected theorem.
pub fn check_bounds<T: Real>(
    report: &SweepReport<T>,
    limit: &LimitEstimate<T>,
    profile: &crate::space::DeclaredProfile<T>,
    theorem: TheoremSelector,
    tol: &BoundTolerances,
) -> Result<BoundsCheck> {
    let weak = weak_norm_p(report)?;
    let norm = report.lp_norm_p.as_f64();
    let p = report.p.as_f64();
    let f = |x: T| x.as_f64();
    let c_upper = profile
        .ahlfors_upper
        .map(f)
        .ok_or_else(|| crate::error::Error::Config("profile.ahlfors_upper is required for the upper bound".into()))?;
    let c2 = 2f64.powf(p + 1.0) * c_upper;
    let finite = report.finite_measure;
    let (c1, c3, band) = if theorem.uses_avr() {
        let avr = match (profile.avr, finite) {
            (Some(a), _) => Some(2.0 * f(a)),
            (None, true) => None,
            (None, false) => return config("profile.avr is required for this theorem"),
        };
        (avr, avr, None)
    } else {
        let Some(lo) = profile.ahlfors_lower.map(f) else {
            return config("profile.ahlfors_lower is required for this theorem");
        };
        (Some(2.0 * lo), None, Some((2.0 * lo, 2.0 * c_upper)))
    };
    let mut verdicts = Vec::new();

    // Upper bound at every grid point.
    let upper_target = c2 * norm;
    let mut worst = f64::INFINITY;
    let mut worst_value = 0.0;
    for e in &report.estimates {
        let m = upper_target + 3.0 * f(e.std_err) - f(e.value);
        if m < worst {
            worst = m;
            worst_value = f(e.value);
        }
    }
    verdicts.push(Verdict {
        claim: "upper_bound".into(),
        status: status(worst >= 0.0),
        margin: Some(worst),
        expected: Some(upper_target),
        observed: Some(worst_value),
        note: "every grid value at most c2·||u||^p + 3 SE".into(),
    });

    // Lower bound on the supremum.
    let converged_limit = match (limit.status, limit.value) {
        (LimitStatus::Converged, Some(v)) => Some((f(v), f(limit.std_err))),
        _ => None,
    };
    let (sup_est, sup_se) = match converged_limit {
        Some((v, se)) if v > f(weak.value) => (v, se),
        _ => (f(weak.value), f(weak.std_err)),
    };
    if finite {
        let threshold = 1e-2 * 2.0 * norm;
        let vanishing = f(limit.decade_max) < threshold;
        let mean = report
            .estimates
            .iter()
            .filter(|e| f(e.lambda) <= f(report.grid.lambda_min) * 10.0 * (1.0 + 1e-9))
            .map(|e| f(e.value))
            .collect::<Vec<_>>();
        let final_mean = mean.iter().sum::<f64>() / mean.len().max(1) as f64;
        verdicts.push(Verdict {
            claim: "lower_bound".into(),
            status: if final_mean < threshold || vanishing {
                VerdictStatus::ExpectedFailure
            } else {
                VerdictStatus::NotApplicable
            },
            margin: Some(threshold - final_mean),
            expected: Some(threshold),
            observed: Some(final_mean),
            note: "finite total measure: D(λ) → 0 as λ → 0, so no lower bound holds".into(),
        });
        verdicts.push(Verdict {
            claim: "limit".into(),
            status: VerdictStatus::NotApplicable,
            margin: None,
            expected: None,
            observed: converged_limit.map(|l| l.0),
            note: "finite total measure".into(),
        });
    } else {
        let target = c1.expect("lower constant present") * norm;
        let slack = (3.0 * sup_se).max(1e-6 * target);
        let margin = sup_est - (target - slack);
        verdicts.push(Verdict {
            claim: "lower_bound".into(),
            status: status(margin >= 0.0),
            margin: Some(margin),
            expected: Some(target),
            observed: Some(sup_est),
            note: if weak.at_lower_boundary {
                "supremum approached as λ → 0; estimated by max(grid max, limit)".into()
            } else {
                "grid maximum".into()
            },
        });
        if let Some(c3) = c3 {
            let target = c3 * norm;
            let v = match converged_limit {
                Some((v, se)) => {
                    let allowed = (3.0 * se).max(tol.limit_rel * target);
                    let margin = allowed - (v - target).abs();
                    Verdict {
                        claim: "limit".into(),
                        status: status(margin >= 0.0),
                        margin: Some(margin),
                        expected: Some(target),
                        observed: Some(v),
                        note: format!("|limit − c3·||u||^p| within max(3 SE, {} relative)", tol.limit_rel),
                    }
                }
                None => Verdict {
                    claim: "limit".into(),
                    status: VerdictStatus::NotApplicable,
                    margin: None,
                    expected: Some(target),
                    observed: None,
                    note: limit.reason.clone(),
                },
            };
            verdicts.push(v);
        }
        if let Some((lo, hi)) = band {
            let (lo, hi) = (lo * norm, hi * norm);
            // Finite-λ values approach the band as λ^p; the relative slack covers that.
            let (lo_t, hi_t) = (lo * (1.0 - tol.limit_rel), hi * (1.0 + tol.limit_rel));
            let mut worst = f64::INFINITY;
            for e in report.estimates.iter().filter(|e| f(e.lambda) <= f(report.grid.lambda_min) * 10.0 * (1.0 + 1e-9))
            {
                let s3 = 3.0 * f(e.std_err);
                worst = worst.min(f(e.value) - (lo_t - s3)).min((hi_t + s3) - f(e.value));
            }
            verdicts.push(Verdict {
                claim: "limit_band".into(),
                status: status(worst >= 0.0),
                margin: Some(worst),
                expected: Some(lo),
                observed: Some(f(limit.decade_min)),
                note: format!(
                    "smallest-decade values within [{lo:.6}, {hi:.6}] widened by {} relative and 3 SE",
                    tol.limit_rel
                ),
            });
            let v = match converged_limit {
                Some((v, se)) => {
                    let s3 = 3.0 * se;
                    let margin = (v - (lo_t - s3)).min(hi_t + s3 - v);
                    Verdict {
                        claim: "limit".into(),
                        status: status(margin >= 0.0),
                        margin: Some(margin),
                        expected: None,
                        observed: Some(v),
                        note: "converged limit inside the band".into(),
                    }
                }
                None => Verdict {
                    claim: "limit".into(),
                    status: VerdictStatus::NotApplicable,
                    margin: None,
                    expected: None,
                    observed: None,
                    note: limit.reason.clone(),
                },
            };
            verdicts.push(v);
        }
    }
    Ok(BoundsCheck { constants: BoundConstants { c1, c2: Some(c2), c3, band, lp_norm_p: norm }, verdicts })
}

/// `E`-mass against twice the half-set mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDiagnostic {
    pub lambda: f64,
    pub method: Method,
    pub full_mass: f64,
    pub half_mass: f64,
    /// `|E − 2H|`.
    pub gap: f64,
    /// `sqrt(se_E² + 4 se_H²)`; zero for exact methods.
    pub combined_se: f64,
    pub ok: bool,
}

/// Compares `(ν⊗ν)(E_λ)` with `2 (ν⊗ν)(H_λ)`: within `3` combined standard
/// errors for Monte Carlo, within `1e-9` relative for exact line evaluation.
pub fn symmetry_check<T: Real>(
    q: &LevelSetQuery<'_, T>,
    method: Method,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<SymmetryDiagnostic> {
    let (full, half) = match method {
        Method::Exact1d => (exact_mass_1d(q)?, exact_half_mass_1d(q)?),
        Method::MonteCarlo => (mc_mass(q, budget, seed, workers)?, half_set_mass(q, budget, seed, workers)?),
        Method::ExactIndicator => return input("the half-set mass has no indicator quadrature"),
    };
    let f = |x: T| x.as_f64();
    let gap = (f(full.mass) - 2.0 * f(half.mass)).abs();
    let combined_se = if method.is_exact() {
        0.0
    } else {
        let s = q.lambda.powf(q.p).as_f64();
        ((f(full.std_err) / s).powi(2) + 4.0 * (f(half.std_err) / s).powi(2)).sqrt()
    };
    let ok = if method.is_exact() {
        gap <= 1e-9 * f(full.mass).abs().max(f64::MIN_POSITIVE)
    } else {
        gap <= 3.0 * combined_se
    };
    Ok(SymmetryDiagnostic {
        lambda: f(q.lambda),
        method,
        full_mass: f(full.mass),
        half_mass: f(half.mass),
        gap,
        combined_se,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceDescriptor;
    use crate::testfn::TestFunction;

    fn exact_cfg() -> SweepConfig {
        SweepConfig { policy: MethodPolicy::Auto, budget: 0, seed: 1, workers: 1 }
    }

    #[test]
    fn unit_interval_sweep() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let q = LevelSetQuery::new(&s, &u, 1.0, 1.0);
        let grid = LambdaGrid::new(1e-4, 4.0, 48).unwrap();
        let r = sweep(&q, &grid, &exact_cfg()).unwrap();
        for e in &r.estimates {
            let want = if e.lambda <= 1.0 { 4.0 - 2.0 * e.lambda } else { 2.0 / e.lambda };
            assert!((e.value - want).abs() < 1e-11 * want);
        }
        let w = weak_norm_p(&r).unwrap();
        assert!(w.at_lower_boundary);
        assert!((w.value - (4.0 - 2e-4)).abs() < 1e-10);
        let lim = limit_at_zero(&r).unwrap();
        assert_eq!(lim.status, LimitStatus::Converged);
        assert!((lim.value.unwrap() - 4.0).abs() < 1e-9);
        let check = check_bounds(&r, &lim, s.profile(), TheoremSelector::Avr, &BoundTolerances::default()).unwrap();
        assert!(check.verdicts.iter().all(|v| v.status == VerdictStatus::Pass), "{check:?}");
    }

    #[test]
    fn zero_function_curve() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::Zero;
        let q = LevelSetQuery::new(&s, &u, 1.0, 1.0);
        let r = sweep(&q, &LambdaGrid::new(1e-3, 1.0, 40).unwrap(), &exact_cfg()).unwrap();
        assert!(r.estimates.iter().all(|e| e.value == 0.0));
        assert_eq!(weak_norm_p(&r).unwrap().value, 0.0);
        assert_eq!(limit_at_zero(&r).unwrap().value, Some(0.0));
    }

    #[test]
    fn sparse_grid_rejected_by_limit_fit() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let q = LevelSetQuery::new(&s, &u, 1.0, 1.0);
        let r = sweep(&q, &LambdaGrid::new(1e-6, 1.0, 8).unwrap(), &exact_cfg()).unwrap();
        assert!(limit_at_zero(&r).is_err());
        assert!(LambdaGrid::new(1.0, 0.5, 10).is_err());
    }
}
