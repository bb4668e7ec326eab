//! Volume-growth profiles `f` with `f(0) = 0`, convex and strictly increasing.
//!
//! The power profile `r^s` recovers the classical homogeneous setting; the
//! `cosh r - 1` profile matches the area of hyperbolic discs; tables allow
//! arbitrary sampled profiles through monotone cubic interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{config, input, Result};
use crate::real::Real;

/// Number of probes used by [`GrowthFunction::check_validity`].
pub const VALIDITY_PROBES: usize = 1000;
const CONVEXITY_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// A volume-growth profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GrowthSpec<T>", into = "GrowthSpec<T>", bound = "T: Real")]
pub enum GrowthFunction<T> {
    Power { s: T },
    CoshMinusOne,
    MonotoneTable(MonotoneTable<T>),
}

/// Serialized form, e.g. `{"kind": "power", "s": 4}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields, bound = "T: Real")]
pub enum GrowthSpec<T> {
    Power { s: T },
    CoshMinusOne,
    MonotoneTable { points: Vec<[T; 2]> },
}

impl<T: Real> TryFrom<GrowthSpec<T>> for GrowthFunction<T> {
    type Error = crate::Error;
    fn try_from(spec: GrowthSpec<T>) -> Result<Self> {
        match spec {
            GrowthSpec::Power { s } => Self::power(s),
            GrowthSpec::CoshMinusOne => Ok(Self::CoshMinusOne),
            GrowthSpec::MonotoneTable { points } => {
                MonotoneTable::new(points.into_iter().map(|[r, f]| (r, f)).collect()).map(Self::MonotoneTable)
            }
        }
    }
}

impl<T: Real> From<GrowthFunction<T>> for GrowthSpec<T> {
    fn from(g: GrowthFunction<T>) -> Self {
        match g {
            GrowthFunction::Power { s } => GrowthSpec::Power { s },
            GrowthFunction::CoshMinusOne => GrowthSpec::CoshMinusOne,
            GrowthFunction::MonotoneTable(t) => {
                GrowthSpec::MonotoneTable { points: t.knots.iter().zip(&t.values).map(|(&r, &f)| [r, f]).collect() }
            }
        }
    }
}

/// Piecewise cubic Hermite interpolant through sorted `(r, f(r))` knots.
///
/// Knot derivatives follow Fritsch–Carlson so the interpolant never
/// overshoots and stays monotone between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable<T> {
    knots: Vec<T>,
    values: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Real> MonotoneTable<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self> {
        if points.len() < 2 {
            return config("growth table needs at least two points");
        }
        if points[0] != (T::zero(), T::zero()) {
            return config("growth table must start at (0, 0)");
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) || !(w[1].1 > w[0].1) {
                return config("growth table must be strictly increasing in r and f(r)");
            }
        }
        if points.iter().any(|(r, f)| !r.is_finite() || !f.is_finite()) {
            return config("growth table entries must be finite");
        }
        let knots: Vec<T> = points.iter().map(|p| p.0).collect();
        let values: Vec<T> = points.iter().map(|p| p.1).collect();
        let slopes = pchip_slopes(&knots, &values);
        Ok(Self { knots, values, slopes })
    }

    pub fn domain_max(&self) -> T {
        *self.knots.last().unwrap()
    }

    pub fn range_max(&self) -> T {
        *self.values.last().unwrap()
    }

    fn eval(&self, r: T) -> T {
        let n = self.knots.len();
        let k = self.knots.partition_point(|&x| x <= r).clamp(1, n - 1) - 1;
        let h = self.knots[k + 1] - self.knots[k];
        let t = (r - self.knots[k]) / h;
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = two * t3 - three * t2 + one;
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

fn pchip_slopes<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let mut d = vec![T::zero(); n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > T::zero() {
            let w1 = two * h[k] + h[k - 1];
            let w2 = h[k] + two * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    // Shape-preserving three-point end conditions.
    let end = |h0: T, h1: T, d0: T, d1: T| -> T {
        let mut s = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= T::zero() {
            s = T::zero();
        } else if d0 * d1 <= T::zero() && s.abs() > (three * d0).abs() {
            s = three * d0;
        }
        s
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Property violated by a growth profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthViolation {
    NonzeroAtOrigin,
    NotIncreasing { at: f64 },
    NotConvex { at: f64 },
    NonFinite { at: f64 },
}

/// Outcome of [`GrowthFunction::check_validity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub valid: bool,
    pub violations: Vec<GrowthViolation>,
}

impl<T: Real> GrowthFunction<T> {
    pub fn power(s: T) -> Result<Self> {
        if !(s > T::zero()) || !s.is_finite() {
            return config(format!("power growth needs s > 0, got {s}"));
        }
        Ok(Self::Power { s })
    }

    /// Largest admissible argument, `None` when unbounded.
    pub fn domain_max(&self) -> Option<T> {
        match self {
            Self::MonotoneTable(t) => Some(t.domain_max()),
            _ => None,
        }
    }

    /// `f(r)`.
    pub fn eval(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return input(format!("growth argument must be nonnegative, got {r}"));
        }
        match self {
            Self::Power { s } => Ok(r.powf(*s)),
            Self::CoshMinusOne => Ok(r.cosh_m1()),
            Self::MonotoneTable(t) => {
                if r > t.domain_max() {
                    return input(format!("growth argument {r} beyond table range {}", t.domain_max()));
                }
                Ok(t.eval(r))
            }
        }
    }

    /// `f^{-1}(y)`.
    pub fn invert(&self, y: T) -> Result<T> {
        if !(y >= T::zero()) {
            return input(format!("growth inverse needs y >= 0, got {y}"));
        }
        match self {
            Self::Power { s } => Ok(y.powf(s.recip())),
            Self::CoshMinusOne => Ok(y.acosh1p()),
            Self::MonotoneTable(t) => {
                if y > t.range_max() {
                    return input(format!("growth inverse: {y} above table range {}", t.range_max()));
                }
                let (mut lo, mut hi) = (T::zero(), t.domain_max());
                for _ in 0..MAX_BISECTIONS {
                    let mid = T::lit(0.5) * (lo + hi);
                    if !(mid > lo && mid < hi) {
                        break;
                    }
                    if t.eval(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                // Pick whichever bracket end lands closer.
                if (t.eval(lo) - y).abs() <= (t.eval(hi) - y).abs() {
                    Ok(lo)
                } else {
                    Ok(hi)
                }
            }
        }
    }

    /// Probes `f` on a logarithmic grid and reports violated hypotheses.
    pub fn check_validity(&self) -> GrowthVerdict {
        let mut violations = Vec::new();
        match self.eval(T::zero()) {
            Ok(v) if v == T::zero() => {}
            _ => violations.push(GrowthViolation::NonzeroAtOrigin),
        }
        let (lo, hi) = match self {
            Self::MonotoneTable(t) => (t.domain_max() * T::lit(1e-6), t.domain_max()),
            _ => (T::lit(1e-6), T::lit(1e2)),
        };
        let ratio = (hi / lo).ln() / T::from_count(VALIDITY_PROBES - 1);
        let mut pts = vec![(T::zero(), T::zero())];
        for i in 0..VALIDITY_PROBES {
            let r = if i + 1 == VALIDITY_PROBES { hi } else { lo * (ratio * T::from_count(i)).exp() };
            match self.eval(r) {
                Ok(v) if v.is_finite() => pts.push((r, v)),
                _ => {
                    violations.push(GrowthViolation::NonFinite { at: r.as_f64() });
                    break;
                }
            }
        }
        let mut prev_slope: Option<T> = None;
        for w in pts.windows(2) {
            let (r0, f0) = w[0];
            let (r1, f1) = w[1];
            if !(f1 > f0) {
                violations.push(GrowthViolation::NotIncreasing { at: r1.as_f64() });
                break;
            }
            let slope = (f1 - f0) / (r1 - r0);
            if let Some(ps) = prev_slope {
                let tol = T::lit(CONVEXITY_TOL) * ps.abs().max(slope.abs());
                if slope - ps < -tol {
                    violations.push(GrowthViolation::NotConvex { at: r0.as_f64() });
                    break;
                }
            }
            prev_slope = Some(slope);
        }
        GrowthVerdict { valid: violations.is_empty(), violations }
    }
}
