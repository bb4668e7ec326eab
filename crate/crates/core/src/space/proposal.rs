//! Importance proposal over the support of a test function.

use rand::Rng;

use crate::error::{input, Result};
use crate::real::Real;
use crate::space::{Point, SpaceDescriptor, WeightedSample};
use crate::testfn::{Piece, Region, TestFunction};

/// Equal mixture of ν-uniform on the support ball `S` and `|u|^p dν / ||u||_p^p`.
///
/// When `u` vanishes identically the mixture collapses to the uniform part.
#[derive(Debug, Clone)]
pub struct SupportProposal<T: Real> {
    center: Point<T>,
    radius: T,
    ball_mass: T,
    pieces: Vec<Piece<T>>,
    // cumulative |h|^p nu(piece), normalized to end at 1
    cumulative: Vec<T>,
    norm_p: T,
    p: T,
}

impl<T: Real> SupportProposal<T> {
    pub fn new(space: &SpaceDescriptor<T>, u: &TestFunction<T>, p: T) -> Result<Self> {
        let Some((center, radius)) = u.support_ball(space) else {
            return input("the zero function has no support to sample");
        };
        if !radius.is_finite() {
            return input("support must be bounded; split the function with truncate first");
        }
        let ball_mass = space.ball_mass(&center, radius);
        if !(ball_mass > T::zero()) {
            return input("support ball carries no mass");
        }
        let mut pieces = Vec::new();
        let mut cumulative = Vec::new();
        let mut norm_p = T::zero();
        for piece in u.pieces(space) {
            if piece.height == T::zero() {
                continue;
            }
            let w = piece.height.abs().powf(p) * piece.region.mass(space)?;
            if w > T::zero() {
                norm_p = norm_p + w;
                pieces.push(piece);
                cumulative.push(norm_p);
            }
        }
        for c in cumulative.iter_mut() {
            *c = *c / norm_p;
        }
        Ok(Self { center, radius, ball_mass, pieces, cumulative, norm_p, p })
    }

    pub fn support_ball(&self) -> (Point<T>, T) {
        (self.center, self.radius)
    }

    /// `nu(S)`.
    pub fn support_mass(&self) -> T {
        self.ball_mass
    }

    fn uniform_weight(&self) -> T {
        if self.pieces.is_empty() {
            T::one()
        } else {
            T::lit(0.5)
        }
    }

    /// Proposal density with respect to ν at `x`.
    pub fn density(&self, space: &SpaceDescriptor<T>, x: &Point<T>) -> T {
        let mut q = T::zero();
        if space.in_ball(&self.center, self.radius, x) {
            q = self.uniform_weight() / self.ball_mass;
        }
        if !self.pieces.is_empty() {
            if let Some(piece) = self.pieces.iter().find(|pc| pc.region.contains(space, x)) {
                q = q + T::lit(0.5) * piece.height.abs().powf(self.p) / self.norm_p;
            }
        }
        q
    }

    pub fn sample<R: Rng + ?Sized>(&self, space: &SpaceDescriptor<T>, rng: &mut R) -> WeightedSample<T> {
        let point = if self.pieces.is_empty() || rng.random::<bool>() {
            space.draw_ball(&self.center, self.radius, rng)
        } else {
            let u = T::lit(rng.random::<f64>());
            let k = self.cumulative.partition_point(|&c| c <= u).min(self.pieces.len() - 1);
            sample_region(space, &self.pieces[k].region, rng)
        };
        WeightedSample { point, density_value: self.density(space, &point) }
    }
}

/// ν-uniform point of a piece region.
fn sample_region<T: Real, R: Rng + ?Sized>(space: &SpaceDescriptor<T>, region: &Region<T>, rng: &mut R) -> Point<T> {
    match region {
        Region::Interval(s) => {
            let line = space.line_density().expect("interval pieces live on a line");
            Point::line(line.sample(s.lo, s.hi, rng).unwrap_or(s.lo))
        }
        Region::Ball { center, radius } => space.draw_ball(center, *radius, rng),
        Region::BallPart { center, radius, .. } => loop {
            // Pieces with positive mass are hit with positive probability.
            let x = space.draw_ball(center, *radius, rng);
            if region.contains(space, &x) {
                return x;
            }
        },
    }
}

impl<T: Real> SpaceDescriptor<T> {
    /// One draw from the support proposal of `u` (see [`SupportProposal`]).
    pub fn sample_support_region<R: Rng + ?Sized>(
        &self,
        u: &TestFunction<T>,
        p: T,
        rng: &mut R,
    ) -> Result<WeightedSample<T>> {
        Ok(SupportProposal::new(self, u, p)?.sample(self, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn indicator_density_is_one() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let prop = SupportProposal::new(&s, &u, 1.0).unwrap();
        let mut rng = substream(5, &[]);
        for _ in 0..1000 {
            let w = prop.sample(&s, &mut rng);
            assert!((w.density_value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_function_falls_back_to_uniform() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0).scaled(0.0);
        let prop = SupportProposal::new(&s, &u, 2.0).unwrap();
        let mut rng = substream(6, &[]);
        for _ in 0..1000 {
            let w = prop.sample(&s, &mut rng);
            assert!((0.0..=1.0).contains(&w.point.x()));
            assert_eq!(w.density_value, 1.0);
        }
        assert!(SupportProposal::new(&s, &TestFunction::Zero, 1.0).is_err());
    }
}
