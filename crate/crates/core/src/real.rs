//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
///
/// Everything in the crate is generic over this trait. The crate-root type
/// aliases fix it to `f64`, which is what the estimators and the CLI use.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `acosh(1 + y)` without the cancellation of forming `1 + y` for small `y`.
    #[inline]
    fn acosh1p(self) -> Self {
        let two = Self::lit(2.0);
        (self + (self * (two + self)).sqrt()).ln_1p()
    }

    /// `cosh(r) - 1` computed as `2 sinh^2(r/2)`.
    #[inline]
    fn cosh_m1(self) -> Self {
        let h = (self / Self::lit(2.0)).sinh();
        Self::lit(2.0) * h * h
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Relative closeness test used by invariants and verdicts.
pub fn rel_close<T: Real>(a: T, b: T, rel: T) -> bool {
    let scale = a.abs().max(b.abs()).max(T::min_positive_value());
    (a - b).abs() <= rel * scale
}
