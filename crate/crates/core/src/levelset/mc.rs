//! Stratified importance-sampling estimator of the pair-set mass.
//!
//! Let `S` be a ball containing the support of `u`. Pairs in `E_λ` have at
//! least one point in `S`, so the mass splits into
//!
//! * stratum (i): both points in `S`, estimated with `x, y` drawn
//!   independently from the support proposal `q`;
//! * stratum (ii): exactly one point in `S`, counted twice by symmetry, with
//!   `x ~ q` and `y` ν-uniform on `B(x, R)`. For `y ∉ S` we have `u(y) = 0`,
//!   so membership needs `f(d) ≤ (|u(x)|/λ)^p`, which is impossible beyond
//!   `R = f⁻¹((sup|u|/λ)^p)`.
//!
//! Work is cut into fixed-size chunks, each with its own substream keyed by
//! `(seed, estimator, stratum, chunk)`, and partial sums are reduced in chunk
//! order, so the result does not depend on the worker count.

use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::real::Real;
use crate::rng::substream;
use crate::space::SupportProposal;

use super::{LevelSetEstimate, LevelSetQuery, Method};

/// Smallest accepted sample budget.
pub const MIN_BUDGET: u64 = 10_000;

const CHUNK: u64 = 4096;
const TAG_FULL: u64 = 0xE;
const TAG_HALF: u64 = 0x4;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, w: f64) {
        self.sum += w;
        self.sum_sq += w * w;
    }

    fn merge(self, other: Self) -> Self {
        Self { sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    /// Mean and squared standard error of the mean over `n` draws.
    fn mean_and_var(&self, n: u64) -> (f64, f64) {
        if n == 0 {
            return (0.0, 0.0);
        }
        let nf = n as f64;
        let mean = self.sum / nf;
        if n < 2 {
            return (mean, 0.0);
        }
        let var = ((self.sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
        (mean, var / nf)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Target {
    Full,
    Half,
}

fn run_chunks<F>(n: u64, workers: usize, f: F) -> Result<Moments>
where
    F: Fn(u64, u64) -> Moments + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let work = || (0..chunks).into_par_iter().map(|k| f(k, CHUNK.min(n - k * CHUNK))).collect::<Vec<_>>();
    let parts = if workers == 1 {
        (0..chunks).map(|k| f(k, CHUNK.min(n - k * CHUNK))).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(work)
    };
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge))
}

fn estimate<T: Real>(
    q: &LevelSetQuery<'_, T>,
    budget: u64,
    seed: u64,
    workers: usize,
    target: Target,
) -> Result<LevelSetEstimate<T>> {
    q.validate()?;
    if budget < MIN_BUDGET {
        return input(format!("Monte Carlo budget must be at least {MIN_BUDGET}, got {budget}"));
    }
    let workers = workers.max(1);
    let sup = q.u.sup_norm();
    let empty = LevelSetEstimate {
        lambda: q.lambda,
        value: T::zero(),
        std_err: T::zero(),
        mass: T::zero(),
        method: Method::MonteCarlo,
        n_samples: 0,
    };
    if q.u.is_zero() || sup == T::zero() {
        return Ok(empty);
    }
    let proposal = SupportProposal::new(q.space, q.u, q.p)?;
    let r_max = q.reach(sup)?;
    if !(r_max > T::zero()) {
        return Ok(empty);
    }
    let (s_center, s_radius) = proposal.support_ball();
    let space = q.space;
    let x0 = space.base_point();
    let tag = if target == Target::Full { TAG_FULL } else { TAG_HALF };

    let n_inner = budget / 4;
    let n_mixed = budget - n_inner;

    let inner = run_chunks(n_inner, workers, |k, len| {
        let mut rng = substream(seed, &[tag, 1, k]);
        let mut m = Moments::default();
        for _ in 0..len {
            let a = proposal.sample(space, &mut rng);
            let b = proposal.sample(space, &mut rng);
            let both_in = space.in_ball(&s_center, s_radius, &a.point) && space.in_ball(&s_center, s_radius, &b.point);
            let hit = both_in
                && match target {
                    Target::Full => q.in_level_set(&a.point, &b.point),
                    Target::Half => q.in_half_set(&a.point, &b.point),
                };
            m.push(if hit { 1.0 / (a.density_value * b.density_value).as_f64() } else { 0.0 });
        }
        m
    })?;

    let mixed = run_chunks(n_mixed, workers, |k, len| {
        let mut rng = substream(seed, &[tag, 2, k]);
        let mut m = Moments::default();
        for _ in 0..len {
            let a = proposal.sample(space, &mut rng);
            if !space.in_ball(&s_center, s_radius, &a.point) {
                m.push(0.0);
                continue;
            }
            let y = space.draw_ball(&a.point, r_max, &mut rng);
            if space.in_ball(&s_center, s_radius, &y) || !q.in_level_set(&a.point, &y) {
                m.push(0.0);
                continue;
            }
            let hits = match target {
                Target::Full => 2.0,
                Target::Half => {
                    let (dx, dy) = (space.dist(&x0, &a.point), space.dist(&x0, &y));
                    f64::from(u8::from(dy > dx) + u8::from(dx > dy))
                }
            };
            let w = (space.ball_mass(&a.point, r_max) / a.density_value).as_f64();
            m.push(hits * w);
        }
        m
    })?;

    let (m1, v1) = inner.mean_and_var(n_inner);
    let (m2, v2) = mixed.mean_and_var(n_mixed);
    let mass = T::lit(m1 + m2);
    let se = T::lit((v1 + v2).sqrt());
    let scale = q.lambda.powf(q.p);
    Ok(LevelSetEstimate {
        lambda: q.lambda,
        value: scale * mass,
        std_err: scale * se,
        mass,
        method: Method::MonteCarlo,
        n_samples: budget,
    })
}

/// Monte Carlo estimate of `(ν⊗ν)(E_λ)`.
pub fn mc_mass<T: Real>(
    q: &LevelSetQuery<'_, T>,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<LevelSetEstimate<T>> {
    estimate(q, budget, seed, workers, Target::Full)
}

/// Monte Carlo estimate of the half set `{(x, y) ∈ E_λ : d(x0, y) > d(x0, x)}`,
/// drawn from streams independent of [`mc_mass`] with the same seed.
pub fn half_set_mass<T: Real>(
    q: &LevelSetQuery<'_, T>,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<LevelSetEstimate<T>> {
    estimate(q, budget, seed, workers, Target::Half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceDescriptor;
    use crate::testfn::TestFunction;

    #[test]
    fn unit_interval_matches_closed_form() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let q = LevelSetQuery::new(&s, &u, 1.0, 0.5);
        let e = mc_mass(&q, 200_000, 1, 1).unwrap();
        assert!((e.value - 3.0).abs() < 4.0 * e.std_err, "{e:?}");
        assert!(e.std_err > 0.0);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let u = TestFunction::interval(0.0, 1.0);
        let q = LevelSetQuery::new(&s, &u, 2.0, 0.7);
        let a = mc_mass(&q, 50_000, 9, 1).unwrap();
        let b = mc_mass(&q, 50_000, 9, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_and_small_budget() {
        let s = SpaceDescriptor::<f64>::lebesgue_line();
        let z = TestFunction::Zero;
        let q = LevelSetQuery::new(&s, &z, 1.0, 0.5);
        let e = mc_mass(&q, 10_000, 1, 1).unwrap();
        assert_eq!((e.value, e.std_err), (0.0, 0.0));
        assert!(mc_mass(&q, 10, 1, 1).is_err());
        assert!(mc_mass(&q.at(0.0), 10_000, 1, 1).is_err());
    }
}
