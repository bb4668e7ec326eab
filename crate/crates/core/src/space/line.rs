//! Piecewise polynomial densities on the real line.

use rand::Rng;

use crate::quad::gauss_legendre;
use crate::real::Real;

/// One polynomial piece `sum_k coeffs[k] x^k` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPiece<T> {
    pub lo: T,
    pub hi: T,
    pub coeffs: Vec<T>,
}

impl<T: Real> DensityPiece<T> {
    #[inline]
    fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    fn mass(&self, a: T, b: T) -> T {
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if !(hi > lo) {
            return T::zero();
        }
        if !lo.is_finite() || !hi.is_finite() {
            return T::infinity();
        }
        if self.coeffs.len() == 1 {
            return self.coeffs[0] * (hi - lo);
        }
        gauss_legendre(lo, hi, |x| self.eval(x))
    }

    /// Inverse of the cumulative mass from `lo` inside `[lo, hi]`.
    fn invert_mass(&self, lo: T, hi: T, target: T) -> T {
        match self.coeffs.len() {
            1 => (lo + target / self.coeffs[0]).min(hi),
            2 => {
                // density wa + c1 (x - lo); solve c1/2 h^2 + wa h = target stably.
                let c1 = self.coeffs[1];
                let wa = self.eval(lo);
                let disc = (wa * wa + T::lit(2.0) * c1 * target).max(T::zero());
                let h = T::lit(2.0) * target / (wa + disc.sqrt());
                (lo + h).clamp(lo, hi)
            }
            _ => {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = T::lit(0.5) * (a + b);
                    if !(mid > a && mid < b) {
                        break;
                    }
                    if self.mass(lo, mid) < target {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                T::lit(0.5) * (a + b)
            }
        }
    }
}

/// Absolutely continuous measure on the line with a piecewise polynomial density.
///
/// Pieces are sorted, contiguous and cover the support; the density vanishes
/// outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct LineDensity<T> {
    pieces: Vec<DensityPiece<T>>,
}

impl<T: Real> LineDensity<T> {
    pub fn new(pieces: Vec<DensityPiece<T>>) -> Self {
        debug_assert!(pieces.windows(2).all(|w| w[0].hi == w[1].lo));
        Self { pieces }
    }

    /// Lebesgue measure on `[lo, hi]` (either end may be infinite).
    pub fn uniform(lo: T, hi: T, level: T) -> Self {
        Self::new(vec![DensityPiece { lo, hi, coeffs: vec![level] }])
    }

    /// Density `base + slope |x|` on the whole line.
    pub fn abs_affine(base: T, slope: T) -> Self {
        Self::new(vec![
            DensityPiece { lo: T::neg_infinity(), hi: T::zero(), coeffs: vec![base, -slope] },
            DensityPiece { lo: T::zero(), hi: T::infinity(), coeffs: vec![base, slope] },
        ])
    }

    /// Symmetric radial step density: `levels[n]` on `r_{n-1} <= |x| < r_n`
    /// (with `r_{-1} = 0`), and `tail` beyond the last radius.
    pub fn radial_steps(radii: &[T], levels: &[T], tail: T) -> Self {
        debug_assert_eq!(radii.len(), levels.len());
        let mut pieces = Vec::with_capacity(2 * radii.len() + 1);
        let last = *radii.last().unwrap();
        pieces.push(DensityPiece { lo: T::neg_infinity(), hi: -last, coeffs: vec![tail] });
        for i in (1..radii.len()).rev() {
            pieces.push(DensityPiece { lo: -radii[i], hi: -radii[i - 1], coeffs: vec![levels[i]] });
        }
        pieces.push(DensityPiece { lo: -radii[0], hi: radii[0], coeffs: vec![levels[0]] });
        for i in 1..radii.len() {
            pieces.push(DensityPiece { lo: radii[i - 1], hi: radii[i], coeffs: vec![levels[i]] });
        }
        pieces.push(DensityPiece { lo: last, hi: T::infinity(), coeffs: vec![tail] });
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[DensityPiece<T>] {
        &self.pieces
    }

    /// Smallest closed interval carrying the measure.
    pub fn support(&self) -> (T, T) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    /// Finite piece boundaries, sorted.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            if p.lo.is_finite() {
                out.push(p.lo);
            }
        }
        let last = self.pieces[self.pieces.len() - 1].hi;
        if last.is_finite() {
            out.push(last);
        }
        out
    }

    /// Maximum polynomial degree over the pieces.
    pub fn degree(&self) -> usize {
        self.pieces.iter().map(|p| p.coeffs.len() - 1).max().unwrap_or(0)
    }

    pub fn density(&self, x: T) -> T {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return T::zero();
        }
        let k = self.pieces.partition_point(|p| p.hi < x).min(self.pieces.len() - 1);
        self.pieces[k].eval(x)
    }

    /// `nu([a, b])`.
    pub fn mass(&self, a: T, b: T) -> T {
        if !(b > a) {
            return T::zero();
        }
        let start = self.pieces.partition_point(|p| p.hi <= a);
        let mut acc = T::zero();
        for p in &self.pieces[start..] {
            if p.lo >= b {
                break;
            }
            acc = acc + p.mass(a, b);
        }
        acc
    }

    /// Draws from `nu` restricted to `[a, b]` and normalized.
    ///
    /// Returns `None` when the interval carries no mass.
    pub fn sample<R: Rng + ?Sized>(&self, a: T, b: T, rng: &mut R) -> Option<T> {
        let a = a.max(self.support().0);
        let b = b.min(self.support().1);
        if !(b > a) {
            return None;
        }
        let start = self.pieces.partition_point(|p| p.hi <= a);
        let mut parts: Vec<(usize, T, T, T)> = Vec::with_capacity(4);
        let mut total = T::zero();
        for (k, p) in self.pieces.iter().enumerate().skip(start) {
            if p.lo >= b {
                break;
            }
            let lo = a.max(p.lo);
            let hi = b.min(p.hi);
            let m = p.mass(lo, hi);
            if m > T::zero() {
                total = total + m;
                parts.push((k, lo, hi, m));
            }
        }
        if !(total > T::zero()) || !total.is_finite() {
            return None;
        }
        let mut target = T::lit(rng.random::<f64>()) * total;
        for (i, &(k, lo, hi, m)) in parts.iter().enumerate() {
            if target < m || i + 1 == parts.len() {
                return Some(self.pieces[k].invert_mass(lo, hi, target.min(m)));
            }
            target = target - m;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn abs_affine_mass() {
        let d = LineDensity::abs_affine(1.0_f64, 1.0);
        // nu([4, 5]) = 1 + (25 - 16) / 2
        assert!((d.mass(4.0, 5.0) - 5.5).abs() < 1e-13);
        assert!((d.mass(-3.0, 3.0) - 15.0).abs() < 1e-13);
        assert_eq!(d.density(-2.0), 3.0);
    }

    #[test]
    fn radial_steps_layout() {
        let d = LineDensity::radial_steps(&[1.0_f64, 5.0], &[1.0, 2.0], 1.0);
        assert_eq!(d.breakpoints(), vec![-5.0, -1.0, 1.0, 5.0]);
        assert_eq!(d.mass(-5.0, 5.0), 2.0 * (1.0 + 8.0));
        assert_eq!(d.density(3.0), 2.0);
        assert_eq!(d.density(-7.0), 1.0);
    }

    #[test]
    fn sample_within_interval() {
        let d = LineDensity::abs_affine(1.0_f64, 1.0);
        let mut rng = substream(1, &[]);
        for _ in 0..1000 {
            let x = d.sample(-0.5, 2.0, &mut rng).unwrap();
            assert!((-0.5..=2.0).contains(&x));
        }
        assert!(LineDensity::uniform(0.0_f64, 1.0, 1.0).sample(2.0, 3.0, &mut rng).is_none());
    }
}
