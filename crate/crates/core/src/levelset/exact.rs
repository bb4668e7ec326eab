//! Deterministic evaluation of the pair-set mass.
//!
//! On line spaces a piecewise-constant `u` splits the line into cells with
//! constant value, and `E_λ` becomes a finite union of strips
//! `{x ∈ I, y ∈ J, |x − y| ≤ r_IJ}`. For fixed `x` the inner mass is an
//! interval mass of a piecewise polynomial density, so the outer integrand is
//! polynomial between known breakpoints and Gauss–Legendre is exact there.

use crate::error::{input, unsupported, Result};
use crate::quad::{adaptive, piecewise_gauss_legendre};
use crate::real::Real;
use crate::space::{euclid, Exponent, LineDensity, SpaceKind};
use crate::testfn::Region;

use super::{LevelSetEstimate, LevelSetQuery, Method};

#[derive(Debug, Clone, Copy)]
struct Cell<T> {
    lo: T,
    hi: T,
    height: T,
}

/// Cells of constant value covering the support of the line measure.
fn cells<T: Real>(q: &LevelSetQuery<'_, T>, line: &LineDensity<T>) -> Result<Vec<Cell<T>>> {
    let (dom_lo, dom_hi) = line.support();
    let mut steps: Vec<Cell<T>> = Vec::new();
    for piece in q.u.pieces(q.space) {
        let Region::Interval(s) = piece.region else {
            return input("exact line evaluation needs interval pieces");
        };
        let lo = s.lo.max(dom_lo);
        let hi = s.hi.min(dom_hi);
        if lo < hi && piece.height != T::zero() {
            steps.push(Cell { lo, hi, height: piece.height });
        }
    }
    steps.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    let mut out = Vec::with_capacity(2 * steps.len() + 1);
    let mut cursor = dom_lo;
    for s in steps {
        if s.lo > cursor {
            out.push(Cell { lo: cursor, hi: s.lo, height: T::zero() });
        }
        out.push(s);
        cursor = s.hi;
    }
    if dom_hi > cursor {
        out.push(Cell { lo: cursor, hi: dom_hi, height: T::zero() });
    }
    Ok(out)
}

fn sorted_breaks<T: Real>(mut pts: Vec<T>, lo: T, hi: T) -> Vec<T> {
    pts.retain(|&x| x.is_finite() && x > lo && x < hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Points where `x ↦ nu(J ∩ [x − r, x + r])` (or a half-set variant) can change
/// its polynomial form, plus the density breaks of `x` itself.
fn strip_breaks<T: Real>(line: &LineDensity<T>, j: &Cell<T>, r: T, center: Option<T>) -> Vec<T> {
    let mut inner: Vec<T> = vec![j.lo, j.hi];
    inner.extend(line.breakpoints().into_iter().filter(|&b| b > j.lo && b < j.hi));
    let mut pts = line.breakpoints();
    for &e in &inner {
        pts.push(e);
        pts.push(e - r);
        pts.push(e + r);
        if let Some(c) = center {
            pts.push(T::lit(2.0) * c - e);
        }
    }
    if let Some(c) = center {
        let half = T::lit(0.5) * r;
        pts.extend([c, c - half, c + half]);
    }
    pts
}

/// `∫_I w(x) nu(J ∩ [x − r, x + r]) dx`.
fn strip_mass<T: Real>(line: &LineDensity<T>, i: &Cell<T>, j: &Cell<T>, r: T) -> T {
    let breaks = sorted_breaks(strip_breaks(line, j, r, None), i.lo, i.hi);
    piecewise_gauss_legendre(&breaks, |x| {
        let lo = j.lo.max(x - r);
        let hi = j.hi.min(x + r);
        line.density(x) * line.mass(lo, hi)
    })
}

/// Mass of `{x ∈ I, y ∈ J, |x − y| ≤ r, |y − c| > |x − c|}`.
fn half_strip_mass<T: Real>(line: &LineDensity<T>, i: &Cell<T>, j: &Cell<T>, r: T, c: T) -> T {
    // |y − c| > |x − c| forces |x − c| below the farthest point of J.
    let reach = (j.lo - c).abs().max((j.hi - c).abs());
    let lo = i.lo.max(c - reach);
    let hi = i.hi.min(c + reach);
    if !(lo < hi) {
        return T::zero();
    }
    let breaks = sorted_breaks(strip_breaks(line, j, r, Some(c)), lo, hi);
    let two = T::lit(2.0);
    piecewise_gauss_legendre(&breaks, |x| {
        let mirror = two * c - x;
        // The far side from c, then the near side beyond the mirror point.
        let (far, near) = if x >= c { ((x, x + r), (x - r, mirror)) } else { ((x - r, x), (mirror, x + r)) };
        let m = |(a, b): (T, T)| line.mass(j.lo.max(a), j.hi.min(b));
        line.density(x) * (m(far) + m(near))
    })
}

pub fn supports_exact_1d<T: Real>(q: &LevelSetQuery<'_, T>) -> bool {
    q.space.is_line()
}

fn line_setup<'a, T: Real>(q: &'a LevelSetQuery<'_, T>) -> Result<(&'a LineDensity<T>, Vec<Cell<T>>)> {
    q.validate()?;
    let Some(line) = q.space.line_density() else {
        return input(format!("exact line evaluation is unavailable on {}", q.space.kind().name()));
    };
    let cells = cells(q, line)?;
    Ok((line, cells))
}

/// Exact `(ν⊗ν)(E_λ)` on line spaces.
pub fn exact_mass_1d<T: Real>(q: &LevelSetQuery<'_, T>) -> Result<LevelSetEstimate<T>> {
    let (line, cells) = line_setup(q)?;
    let mut mass = T::zero();
    for (a, ci) in cells.iter().enumerate() {
        for cj in cells.iter().skip(a + 1) {
            let delta = (ci.height - cj.height).abs();
            if delta == T::zero() {
                continue;
            }
            let r = q.reach(delta)?;
            // Integrate x over a bounded cell; the strip set is symmetric.
            let (x_cell, y_cell) = if ci.lo.is_finite() && ci.hi.is_finite() { (ci, cj) } else { (cj, ci) };
            mass = mass + strip_mass(line, x_cell, y_cell, r);
        }
    }
    Ok(LevelSetEstimate::exact(q, T::lit(2.0) * mass, Method::Exact1d))
}

/// Exact mass of the half set `{(x, y) ∈ E_λ : d(x0, y) > d(x0, x)}` on line spaces.
pub fn exact_half_mass_1d<T: Real>(q: &LevelSetQuery<'_, T>) -> Result<LevelSetEstimate<T>> {
    let (line, cells) = line_setup(q)?;
    let c = q.space.base_point().x();
    let mut mass = T::zero();
    for ci in &cells {
        for cj in &cells {
            let delta = (ci.height - cj.height).abs();
            if delta == T::zero() {
                continue;
            }
            let r = q.reach(delta)?;
            mass = mass + half_strip_mass(line, ci, cj, r, c);
        }
    }
    Ok(LevelSetEstimate::exact(q, mass, Method::Exact1d))
}

enum IndicatorGeometry<T> {
    Interval { lo: T, hi: T },
    Disk { radius: T },
    Ball3 { radius: T },
    Cube { dim: usize, radius: T },
}

fn indicator_geometry<T: Real>(q: &LevelSetQuery<'_, T>) -> Result<(IndicatorGeometry<T>, T)> {
    let pieces = q.u.pieces(q.space);
    let [piece] = pieces.as_slice() else {
        return unsupported("exact indicator evaluation needs a single-piece function");
    };
    let geometry = match (piece.region, q.space.kind()) {
        (Region::Interval(s), _) => IndicatorGeometry::Interval { lo: s.lo, hi: s.hi },
        (Region::Ball { radius, .. }, SpaceKind::EuclideanLp { dim, q: Exponent::Infinite }) => {
            IndicatorGeometry::Cube { dim: *dim, radius }
        }
        (Region::Ball { radius, .. }, SpaceKind::EuclideanLp { dim: 2, q: e }) if e.is_two() => {
            IndicatorGeometry::Disk { radius }
        }
        (Region::Ball { radius, .. }, SpaceKind::EuclideanLp { dim: 3, q: e }) if e.is_two() => {
            IndicatorGeometry::Ball3 { radius }
        }
        _ => {
            return unsupported(format!("no exact indicator evaluation for this function on {}", q.space.kind().name()))
        }
    };
    Ok((geometry, piece.height))
}

pub fn supports_exact_indicator<T: Real>(q: &LevelSetQuery<'_, T>) -> bool {
    indicator_geometry(q).is_ok()
}

const INDICATOR_REL_TOL: f64 = 1e-10;

/// `(ν⊗ν)(E_λ) = 2 ∫_S [ν(B(x, r)) − ν(B(x, r) ∩ S)] dν(x)` for `u = h·1_S`,
/// with `S` a ball (or interval) and `r = f⁻¹((|h|/λ)^p)`.
pub fn exact_mass_indicator<T: Real>(q: &LevelSetQuery<'_, T>) -> Result<LevelSetEstimate<T>> {
    q.validate()?;
    let (geometry, height) = indicator_geometry(q)?;
    if height == T::zero() {
        return Ok(LevelSetEstimate::exact(q, T::zero(), Method::ExactIndicator));
    }
    let r = q.reach(height.abs())?;
    let rel = T::lit(INDICATOR_REL_TOL);
    let pi = T::PI();
    let two = T::lit(2.0);
    let outside = match geometry {
        IndicatorGeometry::Interval { lo, hi } => {
            let line = q.space.line_density().expect("interval pieces live on a line");
            let (dlo, dhi) = line.support();
            let (lo, hi) = (lo.max(dlo), hi.min(dhi));
            let mut breaks = line.breakpoints();
            for e in [lo, hi] {
                breaks.extend([e - r, e + r]);
            }
            for b in line.breakpoints() {
                breaks.extend([b - r, b + r]);
            }
            adaptive(lo, hi, &breaks, rel, T::zero(), 4000, |x| {
                let ball = line.mass(x - r, x + r);
                let inside = line.mass(lo.max(x - r), hi.min(x + r));
                line.density(x) * (ball - inside)
            })
            .value
        }
        IndicatorGeometry::Disk { radius: a } => {
            let breaks = [(r - a).abs()];
            adaptive(T::zero(), a, &breaks, rel, T::zero(), 4000, |rho| {
                two * pi * rho * (pi * r * r - euclid::disk_lens_area(rho, r, a))
            })
            .value
        }
        IndicatorGeometry::Ball3 { radius: a } => {
            let breaks = [(r - a).abs()];
            let ball = T::lit(4.0 / 3.0) * pi * r * r * r;
            adaptive(T::zero(), a, &breaks, rel, T::zero(), 4000, |rho| {
                T::lit(4.0) * pi * rho * rho * (ball - euclid::sphere_lens_volume(rho, r, a))
            })
            .value
        }
        IndicatorGeometry::Cube { dim, radius: a } => {
            // The overlap factorizes over coordinates.
            let side = two * a;
            let breaks = sorted_breaks(vec![r, side - r], T::zero(), side);
            let overlap =
                piecewise_gauss_legendre(&breaks, |x| (side.min(x + r) - (x - r).max(T::zero())).max(T::zero()));
            (side * two * r).powi(dim as i32) - overlap.powi(dim as i32)
        }
    };
    Ok(LevelSetEstimate::exact(q, two * outside.max(T::zero()), Method::ExactIndicator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Point, SpaceDescriptor};
    use crate::testfn::TestFunction;

    #[test]
    fn unit_interval_closed_forms() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        for &(lam, d) in &[(0.5, 3.0), (2.0, 1.0), (0.01, 3.98)] {
            let q = LevelSetQuery::new(&s, &u, 1.0, lam);
            let e = exact_mass_1d(&q).unwrap();
            assert!((e.value - d).abs() < 1e-12 * d, "{lam}: {}", e.value);
            let h = exact_half_mass_1d(&q).unwrap();
            assert!((2.0 * h.mass - e.mass).abs() < 1e-12 * e.mass);
            let i = exact_mass_indicator(&q).unwrap();
            assert!((i.value - d).abs() < 1e-9 * d);
        }
    }

    #[test]
    fn zero_function() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::Zero;
        let q = LevelSetQuery::new(&s, &u, 1.0, 0.3);
        assert_eq!(exact_mass_1d(&q).unwrap().value, 0.0);
    }

    #[test]
    fn disk_small_lambda_trend() {
        let s = SpaceDescriptor::<f64>::euclidean(2, Exponent::Finite(2.0)).unwrap();
        let u = TestFunction::indicator_ball(Point::plane(0.0, 0.0), 1.0);
        let q = LevelSetQuery::new(&s, &u, 2.0, 1e-3);
        let v = exact_mass_indicator(&q).unwrap().value;
        let target = 2.0 * std::f64::consts::PI.powi(2);
        assert!((v - target).abs() < 1e-4 * target);
    }

    #[test]
    fn cube_matches_line_in_one_dimension() {
        let s = SpaceDescriptor::<f64>::euclidean(1, Exponent::Infinite).unwrap();
        let u = TestFunction::indicator_ball(Point::line(0.5), 0.5);
        let q = LevelSetQuery::new(&s, &u, 1.0, 0.5);
        assert!((exact_mass_1d(&q).unwrap().value - 3.0).abs() < 1e-12);
    }
}
