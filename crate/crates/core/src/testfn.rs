//! Piecewise-constant test functions and their truncation split.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::real::Real;
use crate::space::{Point, SpaceDescriptor};

fn closed() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// A constant value on an interval of the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct Step<T> {
    pub lo: T,
    pub hi: T,
    pub height: T,
    #[serde(default = "closed", skip_serializing_if = "is_true")]
    pub lo_closed: bool,
    #[serde(default = "closed", skip_serializing_if = "is_true")]
    pub hi_closed: bool,
}

impl<T: Real> Step<T> {
    pub fn closed(lo: T, hi: T, height: T) -> Self {
        Self { lo, hi, height, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, x: T) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

/// A measurable function `u` on a space, built from indicators.
///
/// Indicator sets are closed: boundary points evaluate as inside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields, bound = "T: Real")]
pub enum TestFunction<T> {
    /// Indicator of the closed ball `B(center, radius)`.
    IndicatorBall {
        center: Point<T>,
        radius: T,
    },
    /// Indicator of `[n, n + 1]` on a line.
    ShiftedUnitInterval {
        n: u32,
    },
    /// Sum of `height · 1_I` over disjoint intervals of a line.
    StepSum {
        steps: Vec<Step<T>>,
    },
    Zero,
    ScaledBy {
        c: T,
        inner: Box<TestFunction<T>>,
    },
    /// `inner` multiplied by the indicator of `B(center, radius)` (`inside`) or
    /// of its complement.
    Restricted {
        inner: Box<TestFunction<T>>,
        center: Point<T>,
        radius: T,
        inside: bool,
    },
}

/// Where a constant piece of `u` lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region<T> {
    Interval(Step<T>),
    Ball {
        center: Point<T>,
        radius: T,
    },
    /// `B(center, radius)` intersected with `B(clip_center, clip_radius)` or its complement.
    BallPart {
        center: Point<T>,
        radius: T,
        clip_center: Point<T>,
        clip_radius: T,
        inside: bool,
    },
}

/// One constant piece: `u = height` on `region`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<T> {
    pub region: Region<T>,
    pub height: T,
}

impl<T: Real> Region<T> {
    pub fn contains(&self, space: &SpaceDescriptor<T>, x: &Point<T>) -> bool {
        match self {
            Region::Interval(s) => s.contains(x.x()),
            Region::Ball { center, radius } => space.in_ball(center, *radius, x),
            Region::BallPart { center, radius, clip_center, clip_radius, inside } => {
                space.in_ball(center, *radius, x) && space.in_ball(clip_center, *clip_radius, x) == *inside
            }
        }
    }

    /// `nu(region)`.
    pub fn mass(&self, space: &SpaceDescriptor<T>) -> Result<T> {
        match self {
            Region::Interval(s) => match space.line_density() {
                Some(line) => Ok(line.mass(s.lo, s.hi)),
                None => input("interval pieces need a line space"),
            },
            Region::Ball { center, radius } => Ok(space.ball_mass(center, *radius)),
            Region::BallPart { center, radius, clip_center, clip_radius, inside } => {
                let both = space.ball_intersection_mass(center, *radius, clip_center, *clip_radius)?;
                Ok(if *inside { both } else { (space.ball_mass(center, *radius) - both).max(T::zero()) })
            }
        }
    }

    /// A ball containing the region.
    pub fn bounding_ball(&self) -> (Point<T>, T) {
        match self {
            Region::Interval(s) => (Point::line(T::lit(0.5) * (s.lo + s.hi)), T::lit(0.5) * (s.hi - s.lo)),
            Region::Ball { center, radius } | Region::BallPart { center, radius, .. } => (*center, *radius),
        }
    }
}

/// The split `u = u_R + v_R` with `u_R = u · 1_{B(x0, R)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationPair<T> {
    pub u_r: TestFunction<T>,
    pub v_r: TestFunction<T>,
    pub radius: T,
    pub center: Point<T>,
}

impl<T: Real> TestFunction<T> {
    pub fn indicator_ball(center: Point<T>, radius: T) -> Self {
        TestFunction::IndicatorBall { center, radius }
    }

    /// Indicator of the closed interval `[lo, hi]`.
    pub fn interval(lo: T, hi: T) -> Self {
        TestFunction::StepSum { steps: vec![Step::closed(lo, hi, T::one())] }
    }

    pub fn scaled(self, c: T) -> Self {
        TestFunction::ScaledBy { c, inner: Box::new(self) }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TestFunction::Zero => true,
            TestFunction::ScaledBy { c, inner } => *c == T::zero() || inner.is_zero(),
            TestFunction::StepSum { steps } => steps.iter().all(|s| s.height == T::zero()),
            TestFunction::Restricted { inner, .. } => inner.is_zero(),
            _ => false,
        }
    }

    /// Checks that the function is well formed on `space`.
    pub fn validate(&self, space: &SpaceDescriptor<T>) -> Result<()> {
        match self {
            TestFunction::IndicatorBall { center, radius } => {
                if !(*radius > T::zero() && radius.is_finite()) {
                    return input("indicator_ball radius must be positive and finite");
                }
                space.validate_point(center)
            }
            TestFunction::ShiftedUnitInterval { .. } => {
                if !space.is_line() {
                    return input("shifted_unit_interval needs a line space");
                }
                Ok(())
            }
            TestFunction::StepSum { steps } => {
                if !space.is_line() {
                    return input("step_sum needs a line space");
                }
                for s in steps {
                    if !(s.lo.is_finite() && s.hi.is_finite() && s.lo < s.hi && s.height.is_finite()) {
                        return input("step_sum intervals need finite lo < hi and a finite height");
                    }
                }
                let mut sorted: Vec<&Step<T>> = steps.iter().collect();
                sorted.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
                for w in sorted.windows(2) {
                    let touching_closed = w[0].hi == w[1].lo && w[0].hi_closed && w[1].lo_closed;
                    if w[0].hi > w[1].lo || touching_closed {
                        return input("step_sum intervals overlap");
                    }
                }
                Ok(())
            }
            TestFunction::Zero => Ok(()),
            TestFunction::ScaledBy { c, inner } => {
                if !c.is_finite() {
                    return input("scale factor must be finite");
                }
                inner.validate(space)
            }
            TestFunction::Restricted { inner, center, radius, .. } => {
                if !(*radius > T::zero() && radius.is_finite()) {
                    return input("restriction radius must be positive and finite");
                }
                space.validate_point(center)?;
                inner.validate(space)
            }
        }
    }

    /// `u(x)`.
    pub fn eval(&self, space: &SpaceDescriptor<T>, x: &Point<T>) -> T {
        match self {
            TestFunction::IndicatorBall { center, radius } => {
                if space.in_ball(center, *radius, x) {
                    T::one()
                } else {
                    T::zero()
                }
            }
            TestFunction::ShiftedUnitInterval { n } => {
                let lo = T::lit(*n as f64);
                if x.x() >= lo && x.x() <= lo + T::one() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            TestFunction::StepSum { steps } => steps.iter().find(|s| s.contains(x.x())).map_or(T::zero(), |s| s.height),
            TestFunction::Zero => T::zero(),
            TestFunction::ScaledBy { c, inner } => *c * inner.eval(space, x),
            TestFunction::Restricted { inner, center, radius, inside } => {
                if space.in_ball(center, *radius, x) == *inside {
                    inner.eval(space, x)
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Upper bound for `|u|`, attained by every built-in kind.
    pub fn sup_norm(&self) -> T {
        match self {
            TestFunction::IndicatorBall { .. } | TestFunction::ShiftedUnitInterval { .. } => T::one(),
            TestFunction::StepSum { steps } => steps.iter().fold(T::zero(), |m, s| m.max(s.height.abs())),
            TestFunction::Zero => T::zero(),
            TestFunction::ScaledBy { c, inner } => c.abs() * inner.sup_norm(),
            TestFunction::Restricted { inner, .. } => inner.sup_norm(),
        }
    }

    /// Constant pieces with pairwise disjoint regions. Pieces of height zero
    /// are kept so that the declared support stays visible.
    pub fn pieces(&self, space: &SpaceDescriptor<T>) -> Vec<Piece<T>> {
        match self {
            TestFunction::IndicatorBall { center, radius } => {
                let region = if space.is_line() {
                    Region::Interval(Step::closed(center.x() - *radius, center.x() + *radius, T::one()))
                } else {
                    Region::Ball { center: *center, radius: *radius }
                };
                vec![Piece { region, height: T::one() }]
            }
            TestFunction::ShiftedUnitInterval { n } => {
                let lo = T::lit(*n as f64);
                vec![Piece { region: Region::Interval(Step::closed(lo, lo + T::one(), T::one())), height: T::one() }]
            }
            TestFunction::StepSum { steps } => {
                steps.iter().map(|s| Piece { region: Region::Interval(*s), height: s.height }).collect()
            }
            TestFunction::Zero => Vec::new(),
            TestFunction::ScaledBy { c, inner } => {
                inner.pieces(space).into_iter().map(|p| Piece { region: p.region, height: *c * p.height }).collect()
            }
            TestFunction::Restricted { inner, center, radius, inside } => {
                inner.pieces(space).into_iter().flat_map(|p| restrict_piece(p, center, *radius, *inside)).collect()
            }
        }
    }

    /// A ball containing the support, or `None` for the zero function.
    pub fn support_ball(&self, space: &SpaceDescriptor<T>) -> Option<(Point<T>, T)> {
        match self {
            TestFunction::Zero => None,
            TestFunction::IndicatorBall { center, radius } => Some((*center, *radius)),
            TestFunction::ScaledBy { inner, .. } => inner.support_ball(space),
            TestFunction::Restricted { inner, center, radius, inside } => {
                let outer = inner.support_ball(space)?;
                Some(if *inside && *radius < outer.1 { (*center, *radius) } else { outer })
            }
            _ => {
                let pieces = self.pieces(space);
                let mut lo = T::infinity();
                let mut hi = T::neg_infinity();
                for p in &pieces {
                    if let Region::Interval(s) = p.region {
                        lo = lo.min(s.lo);
                        hi = hi.max(s.hi);
                    }
                }
                if lo > hi {
                    return None;
                }
                Some((Point::line(T::lit(0.5) * (lo + hi)), T::lit(0.5) * (hi - lo)))
            }
        }
    }

    /// `||u||_p^p`.
    pub fn lp_norm_p(&self, space: &SpaceDescriptor<T>, p: T) -> Result<T> {
        if !(p >= T::one()) {
            return input(format!("p must be at least 1, got {p}"));
        }
        let mut acc = T::zero();
        for piece in self.pieces(space) {
            if piece.height != T::zero() {
                acc = acc + piece.height.abs().powf(p) * piece.region.mass(space)?;
            }
        }
        Ok(acc)
    }

    /// Splits `u` into the part inside `B(x0, R)` and the rest.
    ///
    /// On line spaces both parts are step sums with intervals clipped at the
    /// ball boundary (closed inside, open outside).
    pub fn truncate(&self, space: &SpaceDescriptor<T>, x0: Point<T>, r: T) -> Result<TruncationPair<T>> {
        if !(r > T::zero()) {
            return input(format!("truncation radius must be positive, got {r}"));
        }
        space.validate_point(&x0)?;
        let pair = |u_r, v_r| TruncationPair { u_r, v_r, radius: r, center: x0 };
        let Some((c, rho)) = self.support_ball(space) else {
            return Ok(pair(TestFunction::Zero, TestFunction::Zero));
        };
        let d = space.dist(&x0, &c);
        if d + rho <= r {
            return Ok(pair(self.clone(), TestFunction::Zero));
        }
        if space.is_line() {
            let split = |inside: bool| {
                let steps: Vec<Step<T>> = self
                    .pieces(space)
                    .into_iter()
                    .flat_map(|p| restrict_piece(p, &x0, r, inside))
                    .filter_map(|p| match p.region {
                        Region::Interval(s) => Some(Step { height: p.height, ..s }),
                        _ => None,
                    })
                    .collect();
                if steps.is_empty() {
                    TestFunction::Zero
                } else {
                    TestFunction::StepSum { steps }
                }
            };
            return Ok(pair(split(true), split(false)));
        }
        if d > r + rho {
            return Ok(pair(TestFunction::Zero, self.clone()));
        }
        let part = |inside| TestFunction::Restricted { inner: Box::new(self.clone()), center: x0, radius: r, inside };
        Ok(pair(part(true), part(false)))
    }
}

fn restrict_piece<T: Real>(p: Piece<T>, center: &Point<T>, radius: T, inside: bool) -> Vec<Piece<T>> {
    match p.region {
        Region::Interval(s) => {
            let (blo, bhi) = (center.x() - radius, center.x() + radius);
            let mut out = Vec::new();
            let mut push = |step: Step<T>| {
                if step.lo < step.hi {
                    out.push(Piece { region: Region::Interval(step), height: p.height });
                }
            };
            if inside {
                let (lo, lo_closed) = if blo > s.lo { (blo, true) } else { (s.lo, s.lo_closed) };
                let (hi, hi_closed) = if bhi < s.hi { (bhi, true) } else { (s.hi, s.hi_closed) };
                push(Step { lo, hi, height: p.height, lo_closed, hi_closed });
            } else {
                if s.lo < blo {
                    let (hi, hi_closed) = if blo <= s.hi { (blo, false) } else { (s.hi, s.hi_closed) };
                    push(Step { lo: s.lo, hi, height: p.height, lo_closed: s.lo_closed, hi_closed });
                }
                if s.hi > bhi {
                    let (lo, lo_closed) = if bhi >= s.lo { (bhi, false) } else { (s.lo, s.lo_closed) };
                    push(Step { lo, hi: s.hi, height: p.height, lo_closed, hi_closed: s.hi_closed });
                }
            }
            out
        }
        Region::Ball { center: c, radius: rad } => vec![Piece {
            region: Region::BallPart { center: c, radius: rad, clip_center: *center, clip_radius: radius, inside },
            height: p.height,
        }],
        // Nested restrictions are not produced by `truncate`; keep the outer clip.
        Region::BallPart { center: c, radius: rad, .. } => vec![Piece {
            region: Region::BallPart { center: c, radius: rad, clip_center: *center, clip_radius: radius, inside },
            height: p.height,
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceKind;

    fn lebesgue() -> SpaceDescriptor<f64> {
        SpaceDescriptor::lebesgue_line()
    }

    #[test]
    fn eval_indicators() {
        let s = lebesgue();
        let u = TestFunction::interval(0.0, 1.0);
        assert_eq!(u.eval(&s, &Point::line(0.5)), 1.0);
        assert_eq!(u.eval(&s, &Point::line(2.0)), 0.0);
        assert_eq!(u.eval(&s, &Point::line(1.0)), 1.0);
        assert_eq!(u.clone().scaled(3.0).eval(&s, &Point::line(0.5)), 3.0);
    }

    #[test]
    fn norms() {
        let s = lebesgue();
        assert_eq!(TestFunction::interval(0.0, 1.0).lp_norm_p(&s, 1.7).unwrap(), 1.0);
        let w = SpaceDescriptor::new(SpaceKind::WeightedLine { base: 1.0, slope: 1.0 }).unwrap();
        let u4 = TestFunction::<f64>::ShiftedUnitInterval { n: 4 };
        assert!((u4.lp_norm_p(&w, 2.0).unwrap() - 5.5).abs() < 1e-13);
        assert!(u4.lp_norm_p(&w, 0.5).is_err());
    }

    #[test]
    fn truncation_on_line() {
        let s = lebesgue();
        let u = TestFunction::interval(0.0, 2.0);
        let t = u.truncate(&s, Point::line(0.0), 1.0).unwrap();
        assert_eq!(t.u_r, TestFunction::StepSum { steps: vec![Step::closed(0.0, 1.0, 1.0)] });
        assert_eq!(
            t.v_r,
            TestFunction::StepSum {
                steps: vec![Step { lo: 1.0, hi: 2.0, height: 1.0, lo_closed: false, hi_closed: true }]
            }
        );
        assert_eq!(t.u_r.lp_norm_p(&s, 3.0).unwrap() + t.v_r.lp_norm_p(&s, 3.0).unwrap(), 2.0);
        assert_eq!(t.v_r.eval(&s, &Point::line(1.0)), 0.0);

        let t = TestFunction::interval(0.0, 1.0).truncate(&s, Point::line(0.0), 5.0).unwrap();
        assert_eq!(t.v_r, TestFunction::Zero);
    }

    #[test]
    fn step_sum_validation() {
        let s = lebesgue();
        let overlapping =
            TestFunction::StepSum { steps: vec![Step::closed(0.0, 1.0, 1.0), Step::closed(1.0, 2.0, 2.0)] };
        assert!(overlapping.validate(&s).is_err());
        let ok = TestFunction::StepSum {
            steps: vec![
                Step::closed(0.0, 1.0, 1.0),
                Step { lo: 1.0, hi: 2.0, height: 2.0, lo_closed: false, hi_closed: true },
            ],
        };
        assert!(ok.validate(&s).is_ok());
    }

    #[test]
    fn serde_shape() {
        let u: TestFunction<f64> =
            serde_json::from_str(r#"{"kind":"indicator_ball","center":[0],"radius":1}"#).unwrap();
        assert_eq!(u, TestFunction::indicator_ball(Point::line(0.0), 1.0));
        assert!(serde_json::from_str::<TestFunction<f64>>(r#"{"kind":"bump"}"#).is_err());
    }
}
