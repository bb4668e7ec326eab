//! The pair-set functional `D(λ) = λ^p (ν⊗ν)(E_λ)` and its estimators.
//!
//! `E_λ = {(x, y) : x ≠ y, |u(x) − u(y)| ≥ λ f(d(x, y))^{1/p}}`. With
//! `f(r) = r^s` this is the usual difference-quotient level set.

mod exact;
mod mc;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::growth::GrowthFunction;
use crate::real::Real;
use crate::space::{Point, SpaceDescriptor};
use crate::testfn::TestFunction;

pub use exact::{exact_half_mass_1d, exact_mass_1d, exact_mass_indicator, supports_exact_1d, supports_exact_indicator};
pub use mc::{half_set_mass, mc_mass, MIN_BUDGET};

/// How a [`LevelSetEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact_1d")]
    Exact1d,
    #[serde(rename = "exact_indicator")]
    ExactIndicator,
    #[serde(rename = "monte_carlo")]
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact1d => "exact_1d",
            Method::ExactIndicator => "exact_indicator",
            Method::MonteCarlo => "monte_carlo",
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Method::MonteCarlo)
    }
}

/// One evaluation of the functional at a fixed `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LevelSetEstimate<T> {
    pub lambda: T,
    /// `λ^p · mass`.
    pub value: T,
    pub std_err: T,
    /// `(ν⊗ν)(E_λ)` (or of the half set).
    pub mass: T,
    pub method: Method,
    pub n_samples: u64,
}

impl<T: Real> LevelSetEstimate<T> {
    pub(crate) fn exact(q: &LevelSetQuery<'_, T>, mass: T, method: Method) -> Self {
        Self { lambda: q.lambda, value: q.lambda.powf(q.p) * mass, std_err: T::zero(), mass, method, n_samples: 0 }
    }
}

/// A fully specified evaluation point: space, function, exponent, growth and `λ`.
#[derive(Debug, Clone, Copy)]
pub struct LevelSetQuery<'a, T: Real> {
    pub space: &'a SpaceDescriptor<T>,
    pub u: &'a TestFunction<T>,
    pub p: T,
    pub growth: &'a GrowthFunction<T>,
    pub lambda: T,
}

impl<'a, T: Real> LevelSetQuery<'a, T> {
    /// Query using the growth function declared by the space.
    pub fn new(space: &'a SpaceDescriptor<T>, u: &'a TestFunction<T>, p: T, lambda: T) -> Self {
        Self { space, u, p, growth: space.growth(), lambda }
    }

    pub fn with_growth(self, growth: &'a GrowthFunction<T>) -> Self {
        Self { growth, ..self }
    }

    pub fn at(self, lambda: T) -> Self {
        Self { lambda, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > T::zero() && self.lambda.is_finite()) {
            return input(format!("lambda must be positive and finite, got {}", self.lambda));
        }
        if !(self.p >= T::one() && self.p.is_finite()) {
            return input(format!("p must be at least 1, got {}", self.p));
        }
        let verdict = self.growth.check_validity();
        if !verdict.valid {
            return input(format!("growth function is not admissible: {:?}", verdict.violations));
        }
        self.u.validate(self.space)
    }

    /// Distance below which a value jump `delta` puts a pair into `E_λ`:
    /// `f⁻¹((delta/λ)^p)`.
    pub fn reach(&self, delta: T) -> Result<T> {
        self.growth.invert((delta / self.lambda).powf(self.p))
    }

    /// Membership test given the two function values and the distance.
    #[inline]
    pub fn pair_in_set(&self, ux: T, uy: T, d: T) -> bool {
        let diff = (ux - uy).abs();
        if !(diff > T::zero()) {
            return false;
        }
        match self.growth.eval(d) {
            Ok(fd) => diff >= self.lambda * fd.powf(self.p.recip()),
            Err(_) => false,
        }
    }

    /// Whether `(x, y) ∈ E_λ`. The diagonal is excluded.
    pub fn in_level_set(&self, x: &Point<T>, y: &Point<T>) -> bool {
        if x == y {
            return false;
        }
        let ux = self.u.eval(self.space, x);
        let uy = self.u.eval(self.space, y);
        self.pair_in_set(ux, uy, self.space.dist(x, y))
    }

    /// Whether `(x, y)` lies in the half set `{d(x0, y) > d(x0, x)}` of `E_λ`.
    pub fn in_half_set(&self, x: &Point<T>, y: &Point<T>) -> bool {
        let x0 = self.space.base_point();
        self.space.dist(&x0, y) > self.space.dist(&x0, x) && self.in_level_set(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let q = LevelSetQuery::new(&s, &u, 1.0, 0.5);
        assert!(q.in_level_set(&Point::line(0.5), &Point::line(2.0)));
        assert!(!q.in_level_set(&Point::line(0.5), &Point::line(0.5)));
        assert!(!q.in_level_set(&Point::line(2.0), &Point::line(3.0)));
        assert!(!q.in_level_set(&Point::line(0.5), &Point::line(2.6)));
    }

    #[test]
    fn method_names() {
        assert_eq!(serde_json::to_string(&Method::Exact1d).unwrap(), "\"exact_1d\"");
        assert!(Method::ExactIndicator.is_exact());
    }
}
