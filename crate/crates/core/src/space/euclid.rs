//! Finite-dimensional spaces normed by an ℓ^q norm, with Lebesgue measure.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::real::Real;

/// Exponent `q` in `[1, ∞]`; serialized as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Exponent<T> {
    pub fn is_valid(&self) -> bool {
        match *self {
            Exponent::Finite(q) => q.is_finite() && q >= T::one(),
            Exponent::Infinite => true,
        }
    }

    pub(crate) fn is_two(&self) -> bool {
        matches!(*self, Exponent::Finite(q) if q == T::lit(2.0))
    }
}

impl<T: Real> Serialize for Exponent<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(q) => q.serialize(s),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(std::marker::PhantomData<T>);
        impl<T: Real> Visitor<'_> for V<T> {
            type Value = Exponent<T>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number >= 1 or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                T::from_f64(v).map(Exponent::Finite).ok_or_else(|| E::custom("q out of range"))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" | "infinity" => Ok(Exponent::Infinite),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V(std::marker::PhantomData))
    }
}

/// `||v||_q` for a coordinate difference.
pub fn norm<T: Real>(v: &[T], q: Exponent<T>) -> T {
    match q {
        Exponent::Infinite => v.iter().fold(T::zero(), |m, x| m.max(x.abs())),
        Exponent::Finite(q) if q == T::one() => v.iter().fold(T::zero(), |s, x| s + x.abs()),
        Exponent::Finite(q) if q == T::lit(2.0) => match v.len() {
            1 => v[0].abs(),
            2 => v[0].hypot(v[1]),
            _ => v.iter().fold(T::zero(), |s, x| s.hypot(*x)),
        },
        Exponent::Finite(q) => {
            let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            if scale == T::zero() {
                return T::zero();
            }
            let s = v.iter().fold(T::zero(), |s, x| s + (x.abs() / scale).powf(q));
            scale * s.powf(q.recip())
        }
    }
}

/// Volume of the unit ℓ^q ball in dimension `n`: `(2Γ(1+1/q))^n / Γ(1+n/q)`.
pub fn unit_ball_volume<T: Real>(n: usize, q: Exponent<T>) -> T {
    match q {
        Exponent::Infinite => T::lit(2.0).powi(n as i32),
        Exponent::Finite(q) => {
            let q = q.as_f64();
            let num = (2.0 * libm::tgamma(1.0 + 1.0 / q)).powi(n as i32);
            T::lit(num / libm::tgamma(1.0 + n as f64 / q))
        }
    }
}

/// Uniform point of the unit ℓ^q ball in dimension `n`, written into `out`.
///
/// `q = 2` uses rejection from the cube (acceptance π/4 in the plane, π/6 in
/// space), `q = ∞` samples the cube directly, and other exponents use the
/// generalized Gaussian representation: with `|g_i|^q ~ Gamma(1/q)` and
/// `z ~ Exp(1)`, `g / (Σ|g_i|^q + z)^{1/q}` is uniform on the ball.
pub fn sample_unit_ball<T: Real, R: Rng + ?Sized>(n: usize, q: Exponent<T>, rng: &mut R, out: &mut [T]) {
    let unif = |rng: &mut R| T::lit(2.0 * rng.random::<f64>() - 1.0);
    match q {
        Exponent::Infinite => {
            for c in out.iter_mut().take(n) {
                *c = unif(rng);
            }
        }
        _ if q.is_two() || n == 1 => loop {
            let mut r2 = T::zero();
            for c in out.iter_mut().take(n) {
                *c = unif(rng);
                r2 = r2 + *c * *c;
            }
            if r2 <= T::one() {
                return;
            }
        },
        Exponent::Finite(q) => {
            let qf = q.as_f64();
            let gamma = Gamma::new(1.0 / qf, 1.0).expect("valid gamma shape");
            let mut total: f64 = Exp1.sample(rng);
            for c in out.iter_mut().take(n) {
                let g: f64 = gamma.sample(rng);
                total += g;
                let mag = g.powf(1.0 / qf);
                *c = T::lit(if rng.random::<bool>() { mag } else { -mag });
            }
            let scale = T::lit(total.powf(-1.0 / qf));
            for c in out.iter_mut().take(n) {
                *c = *c * scale;
            }
        }
    }
}

/// Area of the intersection of two Euclidean disks at center distance `d`.
pub fn disk_lens_area<T: Real>(d: T, r1: T, r2: T) -> T {
    let pi = T::PI();
    if d >= r1 + r2 {
        return T::zero();
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return pi * r * r;
    }
    let two = T::lit(2.0);
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (two * d * r1)).clamp(-T::one(), T::one()).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (two * d * r2)).clamp(-T::one(), T::one()).acos();
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(T::zero());
    r1 * r1 * a1 + r2 * r2 * a2 - T::lit(0.5) * k.sqrt()
}

/// Volume of the intersection of two Euclidean balls in three dimensions.
pub fn sphere_lens_volume<T: Real>(d: T, r1: T, r2: T) -> T {
    let pi = T::PI();
    if d >= r1 + r2 {
        return T::zero();
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return T::lit(4.0 / 3.0) * pi * r * r * r;
    }
    let s = r1 + r2 - d;
    let diff = r1 - r2;
    pi * s * s * (d * d + T::lit(2.0) * d * (r1 + r2) - T::lit(3.0) * diff * diff) / (T::lit(12.0) * d)
}

/// Volume of the intersection of two axis-aligned cubes (ℓ^∞ balls).
pub fn box_overlap_volume<T: Real>(c1: &[T], r1: T, c2: &[T], r2: T) -> T {
    c1.iter().zip(c2).fold(T::one(), |acc, (&a, &b)| {
        let lo = (a - r1).max(b - r2);
        let hi = (a + r1).min(b + r2);
        acc * (hi - lo).max(T::zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn unit_ball_volumes() {
        let pi = std::f64::consts::PI;
        assert!((unit_ball_volume(2, Exponent::Finite(2.0_f64)) - pi).abs() < 1e-14);
        assert!((unit_ball_volume(3, Exponent::Finite(2.0_f64)) - 4.0 * pi / 3.0).abs() < 1e-13);
        assert!((unit_ball_volume(2, Exponent::Finite(1.0_f64)) - 2.0).abs() < 1e-14);
        assert_eq!(unit_ball_volume::<f64>(2, Exponent::Infinite), 4.0);
        assert!((unit_ball_volume(1, Exponent::Finite(3.7_f64)) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn norms() {
        assert_eq!(norm(&[3.0_f64, 4.0], Exponent::Finite(2.0)), 5.0);
        assert_eq!(norm(&[3.0_f64, -4.0], Exponent::Infinite), 4.0);
        assert_eq!(norm(&[3.0_f64, -4.0], Exponent::Finite(1.0)), 7.0);
        let v = norm(&[1.0_f64, 1.0], Exponent::Finite(3.0));
        assert!((v - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn lens_limits() {
        let pi = std::f64::consts::PI;
        assert_eq!(disk_lens_area(3.0_f64, 1.0, 1.0), 0.0);
        assert!((disk_lens_area(0.1_f64, 1.0, 2.0) - pi).abs() < 1e-15);
        // two unit disks at distance 1: 2π/3 − √3/2
        let v = disk_lens_area(1.0_f64, 1.0, 1.0);
        assert!((v - (2.0 * pi / 3.0 - 3f64.sqrt() / 2.0)).abs() < 1e-14);
        // two unit balls at distance 1: 5π/12
        assert!((sphere_lens_volume(1.0_f64, 1.0, 1.0) - 5.0 * pi / 12.0).abs() < 1e-14);
    }

    #[test]
    fn generalized_gaussian_sampler_stays_in_ball() {
        let mut rng = substream(3, &[]);
        let q = Exponent::Finite(3.0_f64);
        let mut out = [0.0; 3];
        for _ in 0..10_000 {
            sample_unit_ball(3, q, &mut rng, &mut out);
            assert!(norm(&out, q) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn exponent_serde() {
        let q: Exponent<f64> = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(q, Exponent::Infinite);
        let q: Exponent<f64> = serde_json::from_str("2").unwrap();
        assert_eq!(q, Exponent::Finite(2.0));
        assert_eq!(serde_json::to_string(&Exponent::<f64>::Infinite).unwrap(), "\"inf\"");
    }
}
