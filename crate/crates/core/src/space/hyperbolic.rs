//! Upper half-plane `{(x, y): y > 0}` with the hyperbolic metric `|dz|/y`.

use rand::Rng;

use crate::quad::adaptive;
use crate::real::Real;

/// `d = 2 asinh(|a − b| / (2 sqrt(y_a y_b)))`.
pub fn distance<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    let chord = (a[0] - b[0]).hypot(a[1] - b[1]);
    T::lit(2.0) * (chord / (T::lit(2.0) * (a[1] * b[1]).sqrt())).asinh()
}

/// Area of a geodesic ball: `2π(cosh r − 1)`.
pub fn ball_area<T: Real>(r: T) -> T {
    T::lit(2.0) * T::PI() * r.cosh_m1()
}

/// Area of `B(c1, r1) ∩ B(c2, r2)` with `d = d(c1, c2)`.
///
/// In geodesic polar coordinates around `c1` the circle of radius `t` meets
/// `B(c2, r2)` in an arc of half-angle `θ(t)` given by the hyperbolic law of
/// cosines; the area is `∫ 2 θ(t) sinh t dt`.
pub fn lens_area<T: Real>(d: T, r1: T, r2: T) -> T {
    if d >= r1 + r2 {
        return T::zero();
    }
    if d + r1 <= r2 {
        return ball_area(r1);
    }
    if d + r2 <= r1 {
        return ball_area(r2);
    }
    let (cd, sd, cr2) = (d.cosh(), d.sinh(), r2.cosh());
    let lo = (d - r2).abs();
    let hi = r1.min(d + r2);
    let inner = if r2 > d { ball_area(r2 - d) } else { T::zero() };
    let arcs = adaptive(lo, hi, &[], T::lit(1e-12), T::zero(), 2000, |t| {
        let c = ((t.cosh() * cd - cr2) / (t.sinh() * sd)).max(-T::one()).min(T::one());
        T::lit(2.0) * c.acos() * t.sinh()
    });
    inner + arcs.value
}

/// Point at geodesic distance `t` from `i` in direction `theta`.
pub fn polar_from_i<T: Real>(t: T, theta: T) -> [T; 2] {
    let half = T::lit(0.5) * theta;
    let s = half.sin();
    // cosh t − sinh t cos θ = e^{−t} + 2 sinh t sin²(θ/2), free of cancellation.
    let denom = (-t).exp() + T::lit(2.0) * t.sinh() * s * s;
    let y = denom.recip();
    [t.sinh() * theta.sin() * y, y]
}

/// Uniform point of `B(center, r)` in geodesic polar coordinates.
///
/// The radial law has density ∝ sinh t on `[0, r]`, inverted as
/// `t = acosh(1 + U (cosh r − 1))`; the point is built around `i` and moved to
/// the center by `z ↦ x₀ + y₀ z`, which is an isometry.
pub fn sample_ball<T: Real, R: Rng + ?Sized>(center: [T; 2], r: T, rng: &mut R) -> [T; 2] {
    let u = T::lit(rng.random::<f64>());
    let t = (u * r.cosh_m1()).acosh1p();
    let theta = T::lit(std::f64::consts::TAU * rng.random::<f64>());
    let p = polar_from_i(t, theta);
    [center[0] + center[1] * p[0], center[1] * p[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_limits() {
        let full = ball_area(1.0_f64);
        assert!((lens_area(0.0, 1.0, 1.0) - full).abs() < 1e-12);
        assert_eq!(lens_area(2.5, 1.0, 1.0), 0.0);
        // Symmetric in the two radii.
        let a = lens_area(0.8_f64, 1.0, 0.6);
        let b = lens_area(0.8_f64, 0.6, 1.0);
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn vertical_geodesic() {
        let d = distance([0.0_f64, 1.0], [0.0, std::f64::consts::E]);
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polar_points_have_requested_distance() {
        for &(t, th) in &[(0.3_f64, 0.0), (1.0, 1.0), (2.5, 3.0), (0.7, 5.5)] {
            let p = polar_from_i(t, th);
            assert!((distance([0.0, 1.0], p) - t).abs() < 1e-13);
        }
    }
}
