//! Metric measure spaces: points, distances, ball volumes and ν-uniform samplers.

pub mod euclid;
pub mod heisenberg;
pub mod hyperbolic;
pub mod line;
mod proposal;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config, input, unsupported, Error, Result};
use crate::growth::GrowthFunction;
use crate::real::Real;

pub use euclid::Exponent;
pub use line::LineDensity;
pub use proposal::SupportProposal;

/// A point in a chart of dimension 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>", bound = "T: Real")]
pub struct Point<T> {
    coords: [T; 3],
    dim: u8,
}

impl<T: Real> Point<T> {
    pub fn new(coords: &[T]) -> Result<Self> {
        if coords.is_empty() || coords.len() > 3 {
            return input(format!("point must have 1 to 3 coordinates, got {}", coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return input("point coordinates must be finite");
        }
        let mut c = [T::zero(); 3];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { coords: c, dim: coords.len() as u8 })
    }

    pub fn line(x: T) -> Self {
        Self { coords: [x, T::zero(), T::zero()], dim: 1 }
    }

    pub fn plane(x: T, y: T) -> Self {
        Self { coords: [x, y, T::zero()], dim: 2 }
    }

    pub fn space(x: T, y: T, t: T) -> Self {
        Self { coords: [x, y, t], dim: 3 }
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: [T::zero(); 3], dim: dim as u8 }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords[..self.dim as usize]
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// First coordinate; the position on line kinds.
    pub fn x(&self) -> T {
        self.coords[0]
    }

    fn xy(&self) -> [T; 2] {
        [self.coords[0], self.coords[1]]
    }

    fn xyt(&self) -> [T; 3] {
        self.coords
    }
}

impl<T: Real> TryFrom<Vec<T>> for Point<T> {
    type Error = Error;
    fn try_from(v: Vec<T>) -> Result<Self> {
        Self::new(&v)
    }
}

impl<T: Real> From<Point<T>> for Vec<T> {
    fn from(p: Point<T>) -> Self {
        p.coords().to_vec()
    }
}

/// The distance rule and reference measure of a space.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind<T> {
    /// `R^dim` with the ℓ^q norm and Lebesgue measure.
    EuclideanLp { dim: usize, q: Exponent<T> },
    /// The line with density `base + slope·|x|`.
    WeightedLine { base: T, slope: T },
    /// Heisenberg group with the Cygan–Korányi gauge and Haar measure.
    HeisenbergKoranyi,
    /// Hyperbolic upper half-plane with its area measure.
    HyperbolicHalfPlane,
    /// The line with density alternating between `low` and `high` on the
    /// annuli `r_{n-1} <= |x| < r_n`: `low` for odd `n`, `high` for even `n`
    /// (`r_0 = 0`). Beyond the last radius the next level continues forever.
    OscillatingWeightLine { low: T, high: T, radii: Vec<T> },
    /// `[a, b]` with Lebesgue measure.
    FiniteInterval { a: T, b: T },
}

impl<T: Real> SpaceKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::EuclideanLp { .. } => "euclidean_lp",
            SpaceKind::WeightedLine { .. } => "weighted_line",
            SpaceKind::HeisenbergKoranyi => "heisenberg_koranyi",
            SpaceKind::HyperbolicHalfPlane => "hyperbolic_half_plane",
            SpaceKind::OscillatingWeightLine { .. } => "oscillating_weight_line",
            SpaceKind::FiniteInterval { .. } => "finite_interval",
        }
    }

    /// Chart dimension of points.
    pub fn dim(&self) -> usize {
        match self {
            SpaceKind::EuclideanLp { dim, .. } => *dim,
            SpaceKind::HeisenbergKoranyi => 3,
            SpaceKind::HyperbolicHalfPlane => 2,
            _ => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SpaceKind::EuclideanLp { dim, q } => {
                if !(1..=3).contains(dim) {
                    return config(format!("euclidean_lp dimension must be 1, 2 or 3, got {dim}"));
                }
                if !q.is_valid() {
                    return config("euclidean_lp exponent q must lie in [1, inf]");
                }
            }
            SpaceKind::WeightedLine { base, slope } => {
                if !(base.is_finite() && slope.is_finite() && *base >= T::zero() && *slope >= T::zero()) {
                    return config("weighted_line base and slope must be finite and nonnegative");
                }
                if *base == T::zero() && *slope == T::zero() {
                    return config("weighted_line weight vanishes identically");
                }
            }
            SpaceKind::OscillatingWeightLine { low, high, radii } => {
                if !(*low > T::zero() && low < high && high.is_finite()) {
                    return config("oscillating_weight_line requires 0 < m < M");
                }
                if radii.is_empty() {
                    return config("oscillating_weight_line needs at least one radius");
                }
                if !(radii[0] > T::zero()) || radii.windows(2).any(|w| !(w[1] > w[0])) {
                    return config("oscillating_weight_line radii must be positive and increasing");
                }
                if radii.iter().any(|r| !r.is_finite()) {
                    return config("oscillating_weight_line radii must be finite");
                }
            }
            SpaceKind::FiniteInterval { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return config("finite_interval requires finite a < b");
                }
            }
            SpaceKind::HeisenbergKoranyi | SpaceKind::HyperbolicHalfPlane => {}
        }
        Ok(())
    }

    /// Growth function under which the natural regularity constants are stated.
    pub fn natural_growth(&self) -> GrowthFunction<T> {
        let power = |s: f64| GrowthFunction::Power { s: T::lit(s) };
        match self {
            SpaceKind::EuclideanLp { dim, .. } => power(*dim as f64),
            SpaceKind::WeightedLine { slope, .. } if *slope > T::zero() => power(2.0),
            SpaceKind::WeightedLine { .. } => power(1.0),
            SpaceKind::HeisenbergKoranyi => power(4.0),
            SpaceKind::HyperbolicHalfPlane => GrowthFunction::CoshMinusOne,
            SpaceKind::OscillatingWeightLine { .. } | SpaceKind::FiniteInterval { .. } => power(1.0),
        }
    }

    /// Regularity constants that hold exactly for the kind under its natural growth.
    pub fn natural_profile(&self) -> DeclaredProfile<T> {
        let two = T::lit(2.0);
        let mut p = DeclaredProfile::default();
        match self {
            SpaceKind::EuclideanLp { dim, q } => {
                let c = euclid::unit_ball_volume(*dim, *q);
                p.ahlfors_lower = Some(c);
                p.ahlfors_upper = Some(c);
                p.avr = Some(c);
                p.doubling = Some(two.powi(*dim as i32));
            }
            SpaceKind::WeightedLine { base, slope } => {
                if *slope > T::zero() {
                    // nu(B(x, r)) >= slope r^2, attained at x = 0 asymptotically.
                    p.ahlfors_lower = Some(*slope);
                    p.avr = Some(*slope);
                    p.doubling = Some(T::lit(4.0));
                } else {
                    let c = two * *base;
                    p.ahlfors_lower = Some(c);
                    p.ahlfors_upper = Some(c);
                    p.avr = Some(c);
                    p.doubling = Some(two);
                }
            }
            SpaceKind::HeisenbergKoranyi => {
                let c = heisenberg::unit_ball_volume();
                p.ahlfors_lower = Some(c);
                p.ahlfors_upper = Some(c);
                p.avr = Some(c);
                p.doubling = Some(T::lit(16.0));
            }
            SpaceKind::HyperbolicHalfPlane => {
                let c = two * T::PI();
                p.ahlfors_lower = Some(c);
                p.ahlfors_upper = Some(c);
                p.avr = Some(c);
            }
            SpaceKind::OscillatingWeightLine { low, high, .. } => {
                p.ahlfors_lower = Some(two * *low);
                p.ahlfors_upper = Some(two * *high);
            }
            SpaceKind::FiniteInterval { .. } => {
                p.ahlfors_upper = Some(two);
                p.finite_measure = true;
            }
        }
        p
    }

    fn line_density(&self) -> Option<LineDensity<T>> {
        match self {
            SpaceKind::EuclideanLp { dim: 1, .. } => {
                Some(LineDensity::uniform(T::neg_infinity(), T::infinity(), T::one()))
            }
            SpaceKind::WeightedLine { base, slope } => Some(LineDensity::abs_affine(*base, *slope)),
            SpaceKind::OscillatingWeightLine { low, high, radii } => {
                let level = |n: usize| if n % 2 == 1 { *low } else { *high };
                let levels: Vec<T> = (1..=radii.len()).map(level).collect();
                Some(LineDensity::radial_steps(radii, &levels, level(radii.len() + 1)))
            }
            SpaceKind::FiniteInterval { a, b } => Some(LineDensity::uniform(*a, *b, T::one())),
            _ => None,
        }
    }

    fn default_base_point(&self) -> Point<T> {
        match self {
            SpaceKind::HyperbolicHalfPlane => Point::plane(T::zero(), T::one()),
            SpaceKind::FiniteInterval { a, b } => Point::line(T::lit(0.5) * (*a + *b)),
            k => Point::origin(k.dim()),
        }
    }
}

/// Regularity constants declared for a space (all optional).
///
/// `ahlfors_lower`/`ahlfors_upper` bound `nu(B(x, r)) / f(r)` from below and
/// above, `doubling` bounds `nu(B(x, 2r)) / nu(B(x, r))`, and `avr` is the
/// limit of `nu(B(x0, r)) / f(r)` as `r -> ∞`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct DeclaredProfile<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ahlfors_lower: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ahlfors_upper: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doubling: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avr: Option<T>,
    #[serde(default)]
    pub finite_measure: bool,
}

impl<T: Real> DeclaredProfile<T> {
    fn validate(&self, kind: &SpaceKind<T>) -> Result<()> {
        let named = [
            ("ahlfors_lower", self.ahlfors_lower),
            ("ahlfors_upper", self.ahlfors_upper),
            ("doubling", self.doubling),
            ("avr", self.avr),
        ];
        for (name, v) in named {
            if let Some(v) = v {
                if !(v > T::zero() && v.is_finite()) {
                    return config(format!("profile.{name} must be positive and finite"));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (self.ahlfors_lower, self.ahlfors_upper) {
            if lo > hi {
                return config("profile.ahlfors_lower exceeds profile.ahlfors_upper");
            }
        }
        let finite_kind = matches!(kind, SpaceKind::FiniteInterval { .. });
        if self.finite_measure != finite_kind {
            return config(if finite_kind {
                "profile.finite_measure must be true for finite_interval"
            } else {
                "profile.finite_measure is only valid for finite_interval"
            });
        }
        Ok(())
    }
}

/// Oscillating radii, either listed or generated from `(count, r1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Real")]
pub enum RadiiSpec<T> {
    Explicit(Vec<T>),
    Construct { count: usize, r1: T },
}

fn one<T: Real>() -> T {
    T::one()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
enum KindSpec<T> {
    EuclideanLp {
        dim: usize,
        q: Exponent<T>,
    },
    WeightedLine {
        #[serde(default = "one")]
        base: T,
        #[serde(default = "one")]
        slope: T,
    },
    HeisenbergKoranyi,
    HyperbolicHalfPlane,
    OscillatingWeightLine {
        m: T,
        #[serde(rename = "M")]
        big_m: T,
        radii: RadiiSpec<T>,
    },
    FiniteInterval {
        a: T,
        b: T,
    },
}

/// Serialized form of a [`SpaceDescriptor`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpaceSpec<T> {
    #[serde(flatten)]
    kind: KindSpec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthFunction<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profile: Option<DeclaredProfile<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_point: Option<Point<T>>,
}

/// A metric measure space with its declared growth and regularity profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpec<T>", into = "SpaceSpec<T>", bound = "T: Real")]
pub struct SpaceDescriptor<T: Real> {
    kind: SpaceKind<T>,
    growth: GrowthFunction<T>,
    profile: DeclaredProfile<T>,
    base_point: Point<T>,
    line: Option<LineDensity<T>>,
}

impl<T: Real> TryFrom<SpaceSpec<T>> for SpaceDescriptor<T> {
    type Error = Error;
    fn try_from(spec: SpaceSpec<T>) -> Result<Self> {
        let kind = match spec.kind {
            KindSpec::EuclideanLp { dim, q } => SpaceKind::EuclideanLp { dim, q },
            KindSpec::WeightedLine { base, slope } => SpaceKind::WeightedLine { base, slope },
            KindSpec::HeisenbergKoranyi => SpaceKind::HeisenbergKoranyi,
            KindSpec::HyperbolicHalfPlane => SpaceKind::HyperbolicHalfPlane,
            KindSpec::OscillatingWeightLine { m, big_m, radii } => {
                let radii = match radii {
                    RadiiSpec::Explicit(r) => r,
                    RadiiSpec::Construct { count, r1 } => {
                        crate::regularity::construct_oscillating_radii(m, big_m, 1, count, r1)?
                    }
                };
                SpaceKind::OscillatingWeightLine { low: m, high: big_m, radii }
            }
            KindSpec::FiniteInterval { a, b } => SpaceKind::FiniteInterval { a, b },
        };
        let mut space = SpaceDescriptor::new(kind)?;
        if let Some(g) = spec.growth {
            space = space.with_growth(g)?;
        }
        if let Some(p) = spec.profile {
            space = space.with_profile(p)?;
        }
        if let Some(x0) = spec.base_point {
            space = space.with_base_point(x0)?;
        }
        Ok(space)
    }
}

impl<T: Real> From<SpaceDescriptor<T>> for SpaceSpec<T> {
    fn from(s: SpaceDescriptor<T>) -> Self {
        let kind = match s.kind {
            SpaceKind::EuclideanLp { dim, q } => KindSpec::EuclideanLp { dim, q },
            SpaceKind::WeightedLine { base, slope } => KindSpec::WeightedLine { base, slope },
            SpaceKind::HeisenbergKoranyi => KindSpec::HeisenbergKoranyi,
            SpaceKind::HyperbolicHalfPlane => KindSpec::HyperbolicHalfPlane,
            SpaceKind::OscillatingWeightLine { low, high, radii } => {
                KindSpec::OscillatingWeightLine { m: low, big_m: high, radii: RadiiSpec::Explicit(radii) }
            }
            SpaceKind::FiniteInterval { a, b } => KindSpec::FiniteInterval { a, b },
        };
        SpaceSpec { kind, growth: Some(s.growth), profile: Some(s.profile), base_point: Some(s.base_point) }
    }
}

/// A proposal draw together with its density with respect to ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSample<T> {
    pub point: Point<T>,
    pub density_value: T,
}

impl<T: Real> SpaceDescriptor<T> {
    /// Space of the given kind with its natural growth, profile and base point.
    pub fn new(kind: SpaceKind<T>) -> Result<Self> {
        kind.validate()?;
        let line = kind.line_density();
        Ok(Self {
            growth: kind.natural_growth(),
            profile: kind.natural_profile(),
            base_point: kind.default_base_point(),
            line,
            kind,
        })
    }

    pub fn euclidean(dim: usize, q: Exponent<T>) -> Result<Self> {
        Self::new(SpaceKind::EuclideanLp { dim, q })
    }

    /// Lebesgue measure on the whole line.
    pub fn lebesgue_line() -> Self {
        Self::new(SpaceKind::EuclideanLp { dim: 1, q: Exponent::Finite(T::lit(2.0)) }).expect("valid kind")
    }

    pub fn with_growth(mut self, growth: GrowthFunction<T>) -> Result<Self> {
        let verdict = growth.check_validity();
        if !verdict.valid {
            return config(format!("growth function is not admissible: {:?}", verdict.violations));
        }
        self.growth = growth;
        Ok(self)
    }

    pub fn with_profile(mut self, profile: DeclaredProfile<T>) -> Result<Self> {
        profile.validate(&self.kind)?;
        self.profile = profile;
        Ok(self)
    }

    pub fn with_base_point(mut self, x0: Point<T>) -> Result<Self> {
        self.validate_point(&x0)?;
        self.base_point = x0;
        Ok(self)
    }

    pub fn kind(&self) -> &SpaceKind<T> {
        &self.kind
    }

    pub fn growth(&self) -> &GrowthFunction<T> {
        &self.growth
    }

    pub fn profile(&self) -> &DeclaredProfile<T> {
        &self.profile
    }

    pub fn base_point(&self) -> Point<T> {
        self.base_point
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Density of the measure when the space is a line kind.
    pub fn line_density(&self) -> Option<&LineDensity<T>> {
        self.line.as_ref()
    }

    pub fn is_line(&self) -> bool {
        self.line.is_some()
    }

    pub fn total_mass_finite(&self) -> bool {
        self.profile.finite_measure
    }

    pub fn validate_point(&self, p: &Point<T>) -> Result<()> {
        if p.dim() != self.dim() {
            return input(format!("point has {} coordinates but {} needs {}", p.dim(), self.kind.name(), self.dim()));
        }
        match self.kind {
            SpaceKind::HyperbolicHalfPlane if !(p.coords[1] > T::zero()) => input("half-plane points need y > 0"),
            SpaceKind::FiniteInterval { a, b } if p.x() < a || p.x() > b => {
                input(format!("point {} lies outside [{a}, {b}]", p.x()))
            }
            _ => Ok(()),
        }
    }

    /// Distance without validation; both points must belong to the space.
    #[inline]
    pub fn dist(&self, a: &Point<T>, b: &Point<T>) -> T {
        match self.kind {
            SpaceKind::EuclideanLp { dim, q } if dim > 1 => {
                let mut d = [T::zero(); 3];
                for (i, v) in d.iter_mut().enumerate().take(dim) {
                    *v = a.coords[i] - b.coords[i];
                }
                euclid::norm(&d[..dim], q)
            }
            SpaceKind::HeisenbergKoranyi => heisenberg::distance(a.xyt(), b.xyt()),
            SpaceKind::HyperbolicHalfPlane => hyperbolic::distance(a.xy(), b.xy()),
            _ => (a.x() - b.x()).abs(),
        }
    }

    pub fn distance(&self, a: &Point<T>, b: &Point<T>) -> Result<T> {
        self.validate_point(a)?;
        self.validate_point(b)?;
        Ok(self.dist(a, b))
    }

    /// Closed ball membership.
    #[inline]
    pub fn in_ball(&self, center: &Point<T>, r: T, x: &Point<T>) -> bool {
        self.dist(center, x) <= r
    }

    /// `nu(B(center, r))` without validation.
    pub fn ball_mass(&self, center: &Point<T>, r: T) -> T {
        match &self.kind {
            SpaceKind::EuclideanLp { dim, q } if *dim > 1 => euclid::unit_ball_volume(*dim, *q) * r.powi(*dim as i32),
            SpaceKind::HeisenbergKoranyi => heisenberg::unit_ball_volume::<T>() * r.powi(4),
            SpaceKind::HyperbolicHalfPlane => hyperbolic::ball_area(r),
            SpaceKind::EuclideanLp { .. } => T::lit(2.0) * r,
            SpaceKind::WeightedLine { base, slope } => {
                let x = center.x().abs();
                let two = T::lit(2.0);
                let tail = if x >= r { two * r * x } else { x * x + r * r };
                two * r * *base + *slope * tail
            }
            _ => {
                let line = self.line.as_ref().expect("line kind");
                line.mass(center.x() - r, center.x() + r)
            }
        }
    }

    pub fn ball_volume(&self, center: &Point<T>, r: T) -> Result<T> {
        self.validate_point(center)?;
        if !(r > T::zero()) {
            return input(format!("ball radius must be positive, got {r}"));
        }
        Ok(self.ball_mass(center, r))
    }

    /// `nu(B(c1, r1) ∩ B(c2, r2))` in closed form, or by one-dimensional
    /// quadrature on the half-plane.
    pub fn ball_intersection_mass(&self, c1: &Point<T>, r1: T, c2: &Point<T>, r2: T) -> Result<T> {
        if let Some(line) = &self.line {
            let lo = (c1.x() - r1).max(c2.x() - r2);
            let hi = (c1.x() + r1).min(c2.x() + r2);
            return Ok(line.mass(lo, hi));
        }
        match self.kind {
            SpaceKind::EuclideanLp { dim, q: Exponent::Infinite } => {
                Ok(euclid::box_overlap_volume(&c1.coords[..dim], r1, &c2.coords[..dim], r2))
            }
            SpaceKind::EuclideanLp { dim, q } if q.is_two() => {
                let d = self.dist(c1, c2);
                Ok(if dim == 2 { euclid::disk_lens_area(d, r1, r2) } else { euclid::sphere_lens_volume(d, r1, r2) })
            }
            SpaceKind::HyperbolicHalfPlane => Ok(hyperbolic::lens_area(self.dist(c1, c2), r1, r2)),
            _ => unsupported(format!("no closed-form ball intersection for {}", self.kind.name())),
        }
    }

    /// Draws a point from ν restricted to `B(center, r)`; no validation.
    pub fn draw_ball<R: Rng + ?Sized>(&self, center: &Point<T>, r: T, rng: &mut R) -> Point<T> {
        match &self.kind {
            SpaceKind::EuclideanLp { dim, q } if *dim > 1 => {
                let mut out = [T::zero(); 3];
                euclid::sample_unit_ball(*dim, *q, rng, &mut out);
                for (o, &c) in out.iter_mut().zip(&center.coords[..*dim]) {
                    *o = c + r * *o;
                }
                Point { coords: out, dim: *dim as u8 }
            }
            SpaceKind::HeisenbergKoranyi => {
                let g = heisenberg::sample_ball(center.xyt(), r, rng);
                Point::space(g[0], g[1], g[2])
            }
            SpaceKind::HyperbolicHalfPlane => {
                let z = hyperbolic::sample_ball(center.xy(), r, rng);
                Point::plane(z[0], z[1])
            }
            _ => {
                let line = self.line.as_ref().expect("line kind");
                let x = line.sample(center.x() - r, center.x() + r, rng).unwrap_or(center.x());
                Point::line(x)
            }
        }
    }

    /// ν-uniform point of `B(center, r)`.
    pub fn sample_ball<R: Rng + ?Sized>(&self, center: &Point<T>, r: T, rng: &mut R) -> Result<Point<T>> {
        self.validate_point(center)?;
        if !(r > T::zero()) {
            return input(format!("ball radius must be positive, got {r}"));
        }
        Ok(self.draw_ball(center, r, rng))
    }
}
