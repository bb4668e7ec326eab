//! Empirical regularity constants from ball-volume probes.
//!
//! Every estimate is an extremum over an explicit probe plan, so upper-type
//! constants (`C_A`, `C_d`, `K`) are certified lower bounds for the true value
//! and `C_a` is a certified upper bound. Divergence is detected by doubling
//! the probe window: a hat moving by more than 10% is reported as unbounded.

use serde::{Deserialize, Serialize};

use crate::error::{config, input, Result};
use crate::growth::GrowthFunction;
use crate::real::{rel_close, Real};
use crate::space::{hyperbolic, Point, SpaceDescriptor, SpaceKind};

/// Relative change of a hat under window doubling that counts as divergence.
pub const DIVERGENCE_RATIO: f64 = 0.10;
/// Relative spread of the last three tail values accepted as converged.
pub const CAUCHY_TOL: f64 = 1e-3;

/// Centers and radii at which ball volumes are measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ProbePlan<T> {
    pub centers: Vec<Point<T>>,
    pub radii: Vec<T>,
}

/// Geometric sequence of `count` values from `lo` to `hi`.
pub fn geometric<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi / lo).ln() / T::from_count(count - 1);
    (0..count).map(|i| if i + 1 == count { hi } else { lo * (step * T::from_count(i)).exp() }).collect()
}

/// A point at distance-like offset `t` from `x0`; `k` rotates the direction.
fn offset_point<T: Real>(space: &SpaceDescriptor<T>, x0: &Point<T>, t: T, k: usize) -> Point<T> {
    let sign = if k.is_multiple_of(2) { T::one() } else { -T::one() };
    let c = x0.coords();
    match space.kind() {
        SpaceKind::FiniteInterval { a, b } => {
            // Spread centers over the interval instead of leaving it.
            let frac = T::lit(((k as f64 + 0.5) * 0.618_033_988_75).fract());
            Point::line(*a + (*b - *a) * frac)
        }
        SpaceKind::HyperbolicHalfPlane => {
            let theta = T::lit(k as f64 * 2.399_963);
            let p = hyperbolic::polar_from_i(t, theta);
            Point::plane(c[0] + c[1] * p[0], c[1] * p[1])
        }
        SpaceKind::HeisenbergKoranyi => {
            let dir = match k % 3 {
                0 => [sign * t, T::zero(), T::zero()],
                1 => [T::zero(), sign * t, T::zero()],
                _ => [T::zero(), T::zero(), sign * t * t / T::lit(4.0)],
            };
            let g = crate::space::heisenberg::mul([c[0], c[1], c[2]], dir);
            Point::space(g[0], g[1], g[2])
        }
        _ => {
            let mut v = [T::zero(); 3];
            v[..c.len()].copy_from_slice(c);
            let axis = (k / 2) % c.len();
            v[axis] = v[axis] + sign * t;
            Point::new(&v[..c.len()]).expect("finite offset")
        }
    }
}

impl<T: Real> ProbePlan<T> {
    /// The base point plus `n_centers - 1` points at geometric offsets in
    /// `[d_lo, d_hi]`, with `n_radii` geometric radii in `[r_lo, r_hi]`.
    pub fn geometric(
        space: &SpaceDescriptor<T>,
        n_centers: usize,
        (d_lo, d_hi): (T, T),
        n_radii: usize,
        (r_lo, r_hi): (T, T),
    ) -> Self {
        let x0 = space.base_point();
        let mut centers = vec![x0];
        if n_centers > 1 {
            for (k, t) in geometric(d_lo, d_hi, n_centers - 1).into_iter().enumerate() {
                centers.push(offset_point(space, &x0, t, k));
            }
        }
        Self { centers, radii: geometric(r_lo, r_hi, n_radii) }
    }

    /// A 16 × 24 plan covering offsets up to `1e3` and radii `1e-3 ..= 1e3`.
    pub fn standard(space: &SpaceDescriptor<T>) -> Self {
        Self::geometric(space, 16, (T::lit(0.1), T::lit(1e3)), 24, (T::lit(1e-3), T::lit(1e3)))
    }

    /// The same plan with the radius window stretched by 2 at both ends and
    /// center offsets doubled.
    pub fn doubled(&self, space: &SpaceDescriptor<T>) -> Self {
        let x0 = space.base_point();
        let two = T::lit(2.0);
        let centers = self
            .centers
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if *c == x0 || matches!(space.kind(), SpaceKind::FiniteInterval { .. }) {
                    *c
                } else {
                    offset_point(space, &x0, two * space.dist(&x0, c), k - 1)
                }
            })
            .collect();
        let mut radii = self.radii.clone();
        if let (Some(&lo), Some(&hi)) = (radii.first(), radii.last()) {
            radii.insert(0, lo / two);
            radii.push(hi * two);
        }
        Self { centers, radii }
    }

    fn check(&self, min_centers: usize, min_radii: usize, min_decades: f64) -> Result<()> {
        if self.centers.len() < min_centers || self.radii.len() < min_radii {
            return input(format!(
                "probe plan needs at least {min_centers} centers and {min_radii} radii, got {} and {}",
                self.centers.len(),
                self.radii.len()
            ));
        }
        if self.radii.iter().any(|r| !(*r > T::zero())) {
            return input("probe radii must be positive");
        }
        let lo = self.radii.iter().fold(T::infinity(), |m, &r| m.min(r));
        let hi = self.radii.iter().fold(T::zero(), |m, &r| m.max(r));
        if (hi / lo).log10().as_f64() < min_decades - 1e-9 {
            return input(format!("probe radii must span at least {min_decades} decades"));
        }
        Ok(())
    }
}

/// One measured ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Probe<T> {
    pub center: Point<T>,
    pub radius: T,
    pub volume: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AhlforsEstimate<T> {
    /// `min ν(B(x, r)) / f(r)` over the plan.
    pub c_lower: T,
    /// `max ν(B(x, r)) / f(r)` over the plan.
    pub c_upper: T,
    /// `c_upper` grew by more than 10% when the window doubled.
    pub upper_unbounded: bool,
    /// `c_lower` shrank by more than 10% when the window doubled.
    pub lower_vanishing: bool,
    pub probes: Vec<Probe<T>>,
}

fn ratio_extremes<T: Real>(
    space: &SpaceDescriptor<T>,
    growth: &GrowthFunction<T>,
    plan: &ProbePlan<T>,
    probes: Option<&mut Vec<Probe<T>>>,
) -> Result<(T, T)> {
    let mut lo = T::infinity();
    let mut hi = T::zero();
    let mut log = probes;
    for c in &plan.centers {
        for &r in &plan.radii {
            let volume = space.ball_volume(c, r)?;
            let ratio = volume / growth.eval(r)?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            if let Some(p) = log.as_deref_mut() {
                p.push(Probe { center: *c, radius: r, volume });
            }
        }
    }
    Ok((lo, hi))
}

fn grew<T: Real>(before: T, after: T) -> bool {
    after > before * T::lit(1.0 + DIVERGENCE_RATIO)
}

/// Extremes of `ν(B(x, r)) / f(r)` over the plan, with divergence flags.
pub fn estimate_ahlfors<T: Real>(
    space: &SpaceDescriptor<T>,
    growth: &GrowthFunction<T>,
    plan: &ProbePlan<T>,
) -> Result<AhlforsEstimate<T>> {
    plan.check(16, 16, 4.0)?;
    let mut probes = Vec::new();
    let (c_lower, c_upper) = ratio_extremes(space, growth, plan, Some(&mut probes))?;
    let (lo2, hi2) = ratio_extremes(space, growth, &plan.doubled(space), None)?;
    Ok(AhlforsEstimate {
        c_lower,
        c_upper,
        upper_unbounded: grew(c_upper, hi2),
        lower_vanishing: grew(lo2, c_lower),
        probes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DoublingEstimate<T> {
    /// `max ν(B(x, 2r)) / ν(B(x, r))` over the plan.
    pub c_d: T,
    /// `log2 c_d`.
    pub dimension: T,
    pub unbounded: bool,
}

fn doubling_max<T: Real>(space: &SpaceDescriptor<T>, plan: &ProbePlan<T>) -> Result<T> {
    let mut hi = T::zero();
    for c in &plan.centers {
        for &r in &plan.radii {
            let ratio = space.ball_volume(c, T::lit(2.0) * r)? / space.ball_volume(c, r)?;
            hi = hi.max(ratio);
        }
    }
    Ok(hi)
}

pub fn estimate_doubling<T: Real>(space: &SpaceDescriptor<T>, plan: &ProbePlan<T>) -> Result<DoublingEstimate<T>> {
    plan.check(16, 16, 4.0)?;
    let c_d = doubling_max(space, plan)?;
    let wider = doubling_max(space, &plan.doubled(space))?;
    let unbounded = !c_d.is_finite() || grew(c_d, wider);
    Ok(DoublingEstimate { c_d, dimension: c_d.log2(), unbounded })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AvrEstimate<T> {
    /// `ν(B(x0, r)) / f(r)` at the largest scheduled radius, first candidate.
    pub value: T,
    /// The ratio along the schedule for the first candidate.
    pub tail: Vec<T>,
    /// Relative spread of the last three tail values.
    pub tail_spread: T,
    pub converged: bool,
    /// Final ratio for every candidate base point.
    pub per_center: Vec<T>,
    /// `(max − min) / mean` of `per_center`.
    pub cross_center_spread: T,
}

fn rel_spread<T: Real>(v: &[T]) -> T {
    let lo = v.iter().fold(T::infinity(), |m, &x| m.min(x));
    let hi = v.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    let mean = v.iter().fold(T::zero(), |s, &x| s + x) / T::from_count(v.len());
    if mean == T::zero() {
        T::zero()
    } else {
        (hi - lo) / mean.abs()
    }
}

/// Tail behavior of `ν(B(x0, r)) / f(r)` along a geometric radius schedule.
pub fn estimate_avr<T: Real>(
    space: &SpaceDescriptor<T>,
    growth: &GrowthFunction<T>,
    centers: &[Point<T>],
    schedule: &[T],
) -> Result<AvrEstimate<T>> {
    if schedule.len() < 6 {
        return input("AVR schedule needs at least 6 radii");
    }
    if centers.is_empty() {
        return input("AVR needs at least one base point");
    }
    let q = schedule[1] / schedule[0];
    if !(schedule[0] > T::zero())
        || schedule.windows(2).any(|w| !(w[1] > w[0]) || !rel_close(w[1] / w[0], q, T::lit(1e-6)))
    {
        return input("AVR schedule must be geometric and increasing");
    }
    let curve = |c: &Point<T>| -> Result<Vec<T>> {
        schedule.iter().map(|&r| Ok(space.ball_volume(c, r)? / growth.eval(r)?)).collect()
    };
    let tail = curve(&centers[0])?;
    let last3 = &tail[tail.len() - 3..];
    let tail_spread = rel_spread(last3);
    let mut per_center = Vec::with_capacity(centers.len());
    for c in centers {
        per_center.push(*curve(c)?.last().unwrap());
    }
    Ok(AvrEstimate {
        value: *tail.last().unwrap(),
        converged: tail_spread <= T::lit(CAUCHY_TOL),
        tail,
        tail_spread,
        cross_center_spread: rel_spread(&per_center),
        per_center,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BishopGromovEstimate<T> {
    /// `max ν(B(x, R)) r^s / (R^s ν(B(y, r)))` over admissible probes.
    pub k: T,
    /// The same maximum over the doubled window.
    pub k_doubled: T,
    pub unbounded: bool,
}

fn bg_max<T: Real>(space: &SpaceDescriptor<T>, s: T, plan: &ProbePlan<T>) -> Result<T> {
    let mut hi = T::zero();
    for x in &plan.centers {
        for y in &plan.centers {
            let d = space.dist(x, y);
            for (i, &r) in plan.radii.iter().enumerate() {
                for &big in &plan.radii[i + 1..] {
                    if d > big {
                        continue;
                    }
                    let num = space.ball_volume(x, big)? * r.powf(s);
                    let den = big.powf(s) * space.ball_volume(y, r)?;
                    hi = hi.max(num / den);
                }
            }
        }
    }
    Ok(hi)
}

/// Bishop–Gromov constant `K` for dimension `s` over the plan's admissible pairs.
pub fn check_bishop_gromov<T: Real>(
    space: &SpaceDescriptor<T>,
    s: T,
    plan: &ProbePlan<T>,
) -> Result<BishopGromovEstimate<T>> {
    plan.check(2, 2, 0.0)?;
    if !(s > T::zero()) {
        return input("dimension s must be positive");
    }
    let k = bg_max(space, s, plan)?;
    let k_doubled = bg_max(space, s, &plan.doubled(space))?;
    Ok(BishopGromovEstimate { k, k_doubled, unbounded: grew(k, k_doubled) })
}

/// `ν(B(0, r))` for the radial step density with levels alternating `m, M`.
fn radial_mass<T: Real>(m: T, big_m: T, dim: i32, radii: &[T], r: T) -> T {
    let mut acc = T::zero();
    let mut prev = T::zero();
    for (i, &rk) in radii.iter().enumerate() {
        let level = if i % 2 == 0 { m } else { big_m };
        let hi = r.min(rk);
        if hi > prev {
            acc = acc + level * (hi.powi(dim) - prev.powi(dim));
        }
        prev = rk;
        if r <= rk {
            return acc;
        }
    }
    let level = if radii.len().is_multiple_of(2) { m } else { big_m };
    acc + level * (r.powi(dim) - prev.powi(dim))
}

/// Whether the ratio `ν(B(0, r)) / (ω r^N)` at the `n`-th radius sits on the
/// required side: at least `M − 1/n` for even `n`, at most `m + 1/n` for odd `n`.
/// The check is made at `r_n` and at `r_n − 1` when that is still past `r_{n−1}`.
fn radius_ok<T: Real>(m: T, big_m: T, dim: i32, radii: &[T], n: usize) -> bool {
    let rn = radii[n - 1];
    let prev = if n >= 2 { radii[n - 2] } else { T::zero() };
    let nn = T::from_count(n);
    let mut probes = vec![rn];
    if rn - T::one() > prev {
        probes.push(rn - T::one());
    }
    probes.iter().all(|&r| {
        // The unit-ball volume cancels between both sides.
        let ratio = radial_mass(m, big_m, dim, radii, r) / r.powi(dim);
        if n.is_multiple_of(2) {
            ratio >= big_m - nn.recip()
        } else {
            ratio <= m + nn.recip()
        }
    })
}

/// Radii `r_1 = r1`, `r_n = (M n)^{1/N} r_{n−1} + 1`, each doubled until the
/// alternating volume-ratio conditions hold exactly.
pub fn construct_oscillating_radii<T: Real>(m: T, big_m: T, dim: usize, count: usize, r1: T) -> Result<Vec<T>> {
    if !(m > T::zero() && m < big_m && big_m.is_finite()) {
        return config("oscillating radii need 0 < m < M");
    }
    if count == 0 || dim == 0 {
        return config("oscillating radii need count >= 1 and dimension >= 1");
    }
    if !(r1 > T::zero() && r1.is_finite()) {
        return config("oscillating radii need r1 > 0");
    }
    let n_dim = dim as i32;
    let mut radii = vec![r1];
    for n in 2..=count {
        let grow = (big_m * T::from_count(n)).powf(T::from_count(dim).recip());
        let mut rn = grow * radii[n - 2] + T::one();
        let mut attempts = 0;
        loop {
            radii.push(rn);
            if radius_ok(m, big_m, n_dim, &radii, n) {
                break;
            }
            radii.pop();
            rn = rn * T::lit(2.0);
            attempts += 1;
            if attempts > 200 || !rn.is_finite() {
                return config("oscillating radii overflowed while enforcing the volume ratios");
            }
        }
    }
    Ok(radii)
}

/// Outcome of comparing a declared constant with its estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCheck {
    pub constant: String,
    pub declared: Option<f64>,
    pub estimated: f64,
    pub consistent: bool,
    pub note: String,
}

/// All regularity estimates for one space and plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RegularityReport<T> {
    pub plan: ProbePlan<T>,
    pub ahlfors: AhlforsEstimate<T>,
    pub doubling: DoublingEstimate<T>,
    pub avr: AvrEstimate<T>,
    pub bishop_gromov: Option<BishopGromovEstimate<T>>,
    pub checks: Vec<ProfileCheck>,
}

/// Runs every estimator and compares against the declared profile.
///
/// Upper-type hats are lower bounds for the true constants, so a declared
/// `C_A` or `C_d` is consistent when it is at least the hat; a declared `C_a`
/// when it is at most the hat.
pub fn regularity_report<T: Real>(
    space: &SpaceDescriptor<T>,
    growth: &GrowthFunction<T>,
    plan: &ProbePlan<T>,
    avr_schedule: &[T],
    bishop_gromov_dim: Option<T>,
) -> Result<RegularityReport<T>> {
    let ahlfors = estimate_ahlfors(space, growth, plan)?;
    let doubling = estimate_doubling(space, plan)?;
    let avr = estimate_avr(space, growth, &plan.centers[..plan.centers.len().min(4)], avr_schedule)?;
    let bishop_gromov = match bishop_gromov_dim {
        Some(s) => {
            let small =
                ProbePlan { centers: plan.centers[..plan.centers.len().min(6)].to_vec(), radii: plan.radii.clone() };
            Some(check_bishop_gromov(space, s, &small)?)
        }
        None => None,
    };
    let profile = space.profile();
    let slack = 1e-9;
    let mut checks = Vec::new();
    let f = |x: T| x.as_f64();
    checks.push(ProfileCheck {
        constant: "ahlfors_upper".into(),
        declared: profile.ahlfors_upper.map(f),
        estimated: f(ahlfors.c_upper),
        consistent: match profile.ahlfors_upper {
            Some(c) => !ahlfors.upper_unbounded && f(c) >= f(ahlfors.c_upper) * (1.0 - slack),
            None => true,
        },
        note: if ahlfors.upper_unbounded {
            "upper ratio unbounded over the probe window".into()
        } else {
            "hat is a lower bound".into()
        },
    });
    checks.push(ProfileCheck {
        constant: "ahlfors_lower".into(),
        declared: profile.ahlfors_lower.map(f),
        estimated: f(ahlfors.c_lower),
        consistent: profile.ahlfors_lower.is_none_or(|c| f(c) <= f(ahlfors.c_lower) * (1.0 + slack)),
        note: "hat is an upper bound".into(),
    });
    checks.push(ProfileCheck {
        constant: "doubling".into(),
        declared: profile.doubling.map(f),
        estimated: f(doubling.c_d),
        consistent: profile.doubling.is_none_or(|c| !doubling.unbounded && f(c) >= f(doubling.c_d) * (1.0 - slack)),
        note: if doubling.unbounded {
            "doubling ratio unbounded over the probe window".into()
        } else {
            "hat is a lower bound".into()
        },
    });
    checks.push(ProfileCheck {
        constant: "avr".into(),
        declared: profile.avr.map(f),
        estimated: f(avr.value),
        consistent: match profile.avr {
            Some(c) => avr.converged && (f(c) - f(avr.value)).abs() <= 0.01 * f(c),
            None => true,
        },
        note: if avr.converged { "tail converged".into() } else { "tail did not converge".into() },
    });
    Ok(RegularityReport { plan: plan.clone(), ahlfors, doubling, avr, bishop_gromov, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillating_recurrence() {
        let r = construct_oscillating_radii(1.0_f64, 2.0, 1, 5, 1.0).unwrap();
        assert_eq!(&r[..2], &[1.0, 5.0]);
        assert_eq!(construct_oscillating_radii(1.0_f64, 2.0, 1, 1, 1.0).unwrap(), vec![1.0]);
        assert!(construct_oscillating_radii(2.0_f64, 1.0, 1, 3, 1.0).is_err());
    }

    #[test]
    fn radial_mass_matches_line_density() {
        let radii = [1.0_f64, 5.0, 31.0];
        let line = crate::space::LineDensity::radial_steps(&radii, &[1.0, 2.0, 1.0], 2.0);
        for &r in &[0.5, 3.0, 20.0, 40.0] {
            assert!((2.0 * radial_mass(1.0, 2.0, 1, &radii, r) - line.mass(-r, r)).abs() < 1e-12);
        }
    }

    #[test]
    fn geometric_endpoints() {
        let g = geometric(1e-3_f64, 1e3, 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-14);
    }
}
