//! First Heisenberg group with the Cygan–Korányi gauge distance.
//!
//! Group law `(x, y, t)·(x', y', t') = (x + x', y + y', t + t' + (xy' − yx')/2)`,
//! gauge `N(x, y, t) = ((x² + y²)² + 16t²)^{1/4}`, distance `d(a, b) = N(a⁻¹b)`.
//! Lebesgue measure on R³ is the Haar measure; `|B(g, r)| = (π²/8) r⁴`.

use rand::Rng;

use crate::real::Real;

pub fn mul<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    let half = T::lit(0.5);
    [a[0] + b[0], a[1] + b[1], a[2] + b[2] + half * (a[0] * b[1] - a[1] * b[0])]
}

pub fn inv<T: Real>(a: [T; 3]) -> [T; 3] {
    [-a[0], -a[1], -a[2]]
}

pub fn gauge<T: Real>(g: [T; 3]) -> T {
    let h = g[0] * g[0] + g[1] * g[1];
    let t4 = T::lit(4.0) * g[2];
    // ((h² + (4t)²))^{1/4} = sqrt(hypot(h, 4t))
    h.hypot(t4).sqrt()
}

pub fn distance<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    gauge(mul(inv(a), b))
}

/// Anisotropic dilation `(x, y, t) ↦ (rx, ry, r²t)`.
pub fn dilate<T: Real>(g: [T; 3], r: T) -> [T; 3] {
    [r * g[0], r * g[1], r * r * g[2]]
}

pub fn unit_ball_volume<T: Real>() -> T {
    T::PI() * T::PI() / T::lit(8.0)
}

/// Fraction of the bounding box `[-1,1]² × [-1/4,1/4]` covered by the unit
/// gauge ball; this is the acceptance rate of [`sample_unit_ball`].
pub fn rejection_acceptance() -> f64 {
    std::f64::consts::PI.powi(2) / 8.0 / 2.0
}

/// Uniform point of the unit gauge ball by rejection from its bounding box.
pub fn sample_unit_ball<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 3] {
    loop {
        let x = 2.0 * rng.random::<f64>() - 1.0;
        let y = 2.0 * rng.random::<f64>() - 1.0;
        let t = 0.5 * rng.random::<f64>() - 0.25;
        let h = x * x + y * y;
        if h * h + 16.0 * t * t <= 1.0 {
            return [T::lit(x), T::lit(y), T::lit(t)];
        }
    }
}

/// Uniform point of `B(center, r)`: dilate a unit-ball sample, then translate on the left.
pub fn sample_ball<T: Real, R: Rng + ?Sized>(center: [T; 3], r: T, rng: &mut R) -> [T; 3] {
    mul(center, dilate(sample_unit_ball(rng), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_of_vertical_point() {
        assert!((distance([0.0_f64; 3], [0.0, 0.0, 1.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_is_group_inverse() {
        let g = [0.3_f64, -1.2, 0.7];
        let e = mul(g, inv(g));
        assert!(e.iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn acceptance_above_documented_floor() {
        assert!(rejection_acceptance() > 0.6);
    }
}
