//! Numerical laboratory for the pair-set functional
//! `D(λ) = λ^p (ν⊗ν)({x ≠ y : |u(x) − u(y)| ≥ λ f(d(x, y))^{1/p}})`
//! on metric measure spaces.
//!
//! Everything is generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix it to `f64`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod growth;
pub mod levelset;
pub mod quad;
pub mod real;
pub mod regularity;
pub mod rng;
pub mod space;
pub mod testfn;

pub use asymptotics::{
    check_bounds, limit_at_zero, sweep, symmetry_check, weak_norm_p, BoundConstants, BoundTolerances, BoundsCheck,
    LimitStatus, MethodPolicy, SweepConfig, SymmetryDiagnostic, TheoremSelector, Verdict, VerdictStatus,
};
pub use error::{Error, Result};
pub use levelset::Method;
pub use real::Real;

pub type SpaceDescriptor = space::SpaceDescriptor<f64>;
pub type Point = space::Point<f64>;
pub type SpaceKind = space::SpaceKind<f64>;
pub type DeclaredProfile = space::DeclaredProfile<f64>;
pub type GrowthFunction = growth::GrowthFunction<f64>;
pub type TestFunction = testfn::TestFunction<f64>;
pub type LevelSetQuery<'a> = levelset::LevelSetQuery<'a, f64>;
pub type LevelSetEstimate = levelset::LevelSetEstimate<f64>;
pub type LambdaGrid = asymptotics::LambdaGrid<f64>;
pub type SweepReport = asymptotics::SweepReport<f64>;
pub type WeakNorm = asymptotics::WeakNorm<f64>;
pub type LimitEstimate = asymptotics::LimitEstimate<f64>;
pub type RegularityReport = regularity::RegularityReport<f64>;
