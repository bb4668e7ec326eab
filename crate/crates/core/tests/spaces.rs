use std::f64::consts::PI;

use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use weaklab_core::rng::substream;
use weaklab_core::space::heisenberg;
use weaklab_core::space::{Exponent, Point, SpaceDescriptor, SpaceKind};
use weaklab_core::testfn::{Step, TestFunction};

fn space(kind: SpaceKind<f64>) -> SpaceDescriptor<f64> {
    SpaceDescriptor::new(kind).unwrap()
}

fn plane(q: Exponent<f64>) -> SpaceDescriptor<f64> {
    space(SpaceKind::EuclideanLp { dim: 2, q })
}

fn weighted() -> SpaceDescriptor<f64> {
    space(SpaceKind::WeightedLine { base: 1.0, slope: 1.0 })
}

fn all_kinds() -> Vec<SpaceDescriptor<f64>> {
    vec![
        SpaceDescriptor::lebesgue_line(),
        plane(Exponent::Finite(2.0)),
        plane(Exponent::Finite(1.0)),
        plane(Exponent::Infinite),
        space(SpaceKind::EuclideanLp { dim: 3, q: Exponent::Finite(3.0) }),
        weighted(),
        space(SpaceKind::HeisenbergKoranyi),
        space(SpaceKind::HyperbolicHalfPlane),
        space(SpaceKind::OscillatingWeightLine { low: 1.0, high: 2.0, radii: vec![1.0, 5.0, 31.0] }),
        space(SpaceKind::FiniteInterval { a: 0.0, b: 1.0 }),
    ]
}

fn random_point<R: Rng>(s: &SpaceDescriptor<f64>, rng: &mut R) -> Point<f64> {
    let mut c = [0.0; 3];
    for v in c.iter_mut() {
        *v = rng.random_range(-5.0..5.0);
    }
    match s.kind() {
        SpaceKind::HyperbolicHalfPlane => Point::plane(c[0], rng.random_range(0.05..5.0)),
        SpaceKind::FiniteInterval { .. } => Point::line(rng.random_range(0.0..1.0)),
        _ => Point::new(&c[..s.dim()]).unwrap(),
    }
}

#[test]
fn distance_examples() {
    let e = plane(Exponent::Finite(2.0));
    assert_eq!(e.distance(&Point::plane(0.0, 0.0), &Point::plane(3.0, 4.0)).unwrap(), 5.0);
    let m = plane(Exponent::Infinite);
    assert_eq!(m.distance(&Point::plane(0.0, 0.0), &Point::plane(3.0, 4.0)).unwrap(), 4.0);
    let h = space(SpaceKind::HyperbolicHalfPlane);
    let d = h.distance(&Point::plane(0.0, 1.0), &Point::plane(0.0, 1f64.exp())).unwrap();
    assert!((d - 1.0).abs() < 1e-12);
    let g = space(SpaceKind::HeisenbergKoranyi);
    let d = g.distance(&Point::space(0.0, 0.0, 0.0), &Point::space(0.0, 0.0, 1.0)).unwrap();
    assert!((d - 16f64.powf(0.25)).abs() < 1e-12);
    assert!(e.distance(&Point::line(0.0), &Point::plane(1.0, 1.0)).is_err());
}

#[test]
fn distance_symmetry_and_triangle_inequality() {
    for s in all_kinds() {
        let mut rng = substream(11, &[s.dim() as u64]);
        for _ in 0..10_000 {
            let a = random_point(&s, &mut rng);
            let b = random_point(&s, &mut rng);
            let c = random_point(&s, &mut rng);
            let ab = s.dist(&a, &b);
            assert!((ab - s.dist(&b, &a)).abs() <= 1e-12 * (1.0 + ab), "{:?}", s.kind());
            assert!(s.dist(&a, &c) <= ab + s.dist(&b, &c) + 1e-10, "{:?}", s.kind());
            assert_eq!(s.dist(&a, &a), 0.0);
        }
    }
}

proptest! {
    #[test]
    fn heisenberg_distance_is_left_invariant(
        g in prop::array::uniform3(-3.0f64..3.0),
        a in prop::array::uniform3(-3.0f64..3.0),
        b in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let d = heisenberg::distance(a, b);
        let moved = heisenberg::distance(heisenberg::mul(g, a), heisenberg::mul(g, b));
        prop_assert!((d - moved).abs() <= 1e-10 * (1.0 + d));
    }

    #[test]
    fn heisenberg_ball_volume_scales_with_fourth_power(r in 1e-3f64..1e3, c in prop::array::uniform3(-3.0f64..3.0)) {
        let s = space(SpaceKind::HeisenbergKoranyi);
        let center = Point::space(c[0], c[1], c[2]);
        let v1 = s.ball_volume(&center, 1.0).unwrap();
        let vr = s.ball_volume(&center, r).unwrap();
        prop_assert!((vr - r.powi(4) * v1).abs() <= 1e-10 * vr);
    }

    #[test]
    fn heisenberg_dilation_scales_distance(a in prop::array::uniform3(-3.0f64..3.0), b in prop::array::uniform3(-3.0f64..3.0), r in 0.01f64..100.0) {
        let d = heisenberg::distance(a, b);
        let dr = heisenberg::distance(heisenberg::dilate(a, r), heisenberg::dilate(b, r));
        prop_assert!((dr - r * d).abs() <= 1e-10 * (1.0 + r * d));
    }
}

#[test]
fn closed_form_ball_volumes() {
    let line = SpaceDescriptor::<f64>::lebesgue_line();
    assert_eq!(line.ball_volume(&Point::line(7.0), 2.0).unwrap(), 4.0);
    let w = weighted();
    assert!((w.ball_volume(&Point::line(0.0), 3.0).unwrap() - 15.0).abs() < 1e-12);
    assert!((w.ball_volume(&Point::line(1.0), 0.5).unwrap() - 2.0).abs() < 1e-12);
    assert!(line.ball_volume(&Point::line(0.0), 0.0).is_err());
    assert!(line.ball_volume(&Point::line(0.0), -1.0).is_err());
}

#[test]
fn heisenberg_unit_ball_volume_matches_rejection_count() {
    // |x|, |y| <= 1 and |t| <= 1/4 on the unit gauge ball.
    let s = space(SpaceKind::HeisenbergKoranyi);
    let exact = s.ball_volume(&Point::space(0.3, -1.0, 2.0), 1.0).unwrap();
    assert!((exact - PI * PI / 8.0).abs() < 1e-12);
    let n = 10_000_000u64;
    let mut rng = substream(5, &[0]);
    let mut hits = 0u64;
    for _ in 0..n {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let t: f64 = rng.random_range(-0.25..0.25);
        if (x * x + y * y).powi(2) + 16.0 * t * t <= 1.0 {
            hits += 1;
        }
    }
    let frac = hits as f64 / n as f64;
    let est = 2.0 * frac;
    let se = 2.0 * (frac * (1.0 - frac) / n as f64).sqrt();
    assert!((est - exact).abs() < 4.0 * se, "{est} vs {exact} (se {se})");
}

/// Composite Simpson rule.
fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn hyperbolic_ball_area_matches_polar_integral() {
    let s = space(SpaceKind::HyperbolicHalfPlane);
    for r in [0.1, 1.0, 2.5] {
        let oracle = simpson(0.0, r, 2000, |t| 2.0 * PI * t.sinh());
        let v = s.ball_volume(&Point::plane(-2.0, 0.7), r).unwrap();
        assert!((v - oracle).abs() <= 1e-9 * oracle, "{v} vs {oracle}");
    }
}

#[test]
fn weighted_line_ball_mass_matches_weight_integral() {
    let s = weighted();
    let mut rng = substream(3, &[]);
    for _ in 0..500 {
        let x: f64 = rng.random_range(-10.0..10.0);
        let r: f64 = rng.random_range(0.01..20.0);
        let (a, b) = (x - r, x + r);
        // Simpson is exact for the weight on each side of 0.
        let oracle = if a < 0.0 && b > 0.0 {
            simpson(a, 0.0, 2, |t| 1.0 + t.abs()) + simpson(0.0, b, 2, |t| 1.0 + t.abs())
        } else {
            simpson(a, b, 2, |t| 1.0 + t.abs())
        };
        let v = s.ball_volume(&Point::line(x), r).unwrap();
        assert!((v - oracle).abs() <= 1e-9 * oracle);
    }
    // Center inside the ball's reach of the origin: x^2 + r^2 + 2r.
    let (x, r) = (1.5, 4.0);
    assert!((s.ball_volume(&Point::line(x), r).unwrap() - (x * x + r * r + 2.0 * r)).abs() < 1e-12);
}

fn fraction<F: Fn(&Point<f64>) -> bool>(
    s: &SpaceDescriptor<f64>,
    center: Point<f64>,
    r: f64,
    n: usize,
    seed: u64,
    pred: F,
) -> (f64, f64) {
    let mut rng = substream(seed, &[]);
    let hits = (0..n).filter(|_| pred(&s.sample_ball(&center, r, &mut rng).unwrap())).count();
    let f = hits as f64 / n as f64;
    (f, (f * (1.0 - f) / n as f64).sqrt())
}

#[test]
fn ball_sampler_examples() {
    let line = SpaceDescriptor::<f64>::lebesgue_line();
    let mut rng = substream(1, &[]);
    let n = 100_000;
    let xs: Vec<f64> = (0..n).map(|_| line.sample_ball(&Point::line(0.0), 1.0, &mut rng).unwrap().x()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let se = (xs.iter().map(|x| x * x).sum::<f64>() / n as f64 / n as f64).sqrt();
    assert!(mean.abs() < 3.0 * se);

    let w = weighted();
    let (f, se) = fraction(&w, Point::line(0.0), 1.0, 200_000, 2, |p| p.x() >= 0.0);
    assert!((f - 0.5).abs() < 3.0 * se);

    let h = space(SpaceKind::HyperbolicHalfPlane);
    let c = Point::plane(0.0, 1.0);
    let want = (0.5f64.cosh() - 1.0) / (1f64.cosh() - 1.0);
    let (f, se) = fraction(&h, c, 1.0, 200_000, 3, |p| h.dist(&c, p) <= 0.5);
    assert!((f - want).abs() < 3.0 * se, "{f} vs {want}");

    assert!(line.sample_ball(&Point::line(0.0), 0.0, &mut rng).is_err());
}

#[test]
fn ball_samplers_pass_radial_shell_chi_square() {
    let critical = ChiSquared::new(9.0).unwrap().inverse_cdf(1.0 - 1e-3);
    let cases = vec![
        (SpaceDescriptor::lebesgue_line(), Point::line(0.3), 2.0),
        (plane(Exponent::Finite(2.0)), Point::plane(1.0, -1.0), 1.5),
        (plane(Exponent::Infinite), Point::plane(0.0, 0.0), 1.0),
        (plane(Exponent::Finite(1.0)), Point::plane(0.0, 0.0), 1.0),
        (space(SpaceKind::EuclideanLp { dim: 3, q: Exponent::Finite(2.0) }), Point::space(0.0, 0.0, 0.0), 1.0),
        (weighted(), Point::line(1.0), 3.0),
        (space(SpaceKind::HeisenbergKoranyi), Point::space(0.5, -0.2, 1.0), 2.0),
        (space(SpaceKind::HyperbolicHalfPlane), Point::plane(0.0, 1.0), 2.0),
        (
            space(SpaceKind::OscillatingWeightLine { low: 1.0, high: 2.0, radii: vec![1.0, 5.0, 31.0] }),
            Point::line(2.0),
            6.0,
        ),
    ];
    let n = 1_000_000usize;
    for (k, (s, c, r)) in cases.into_iter().enumerate() {
        let total = s.ball_mass(&c, r);
        let mut counts = [0usize; 10];
        let mut rng = substream(21, &[k as u64]);
        for _ in 0..n {
            let x = s.sample_ball(&c, r, &mut rng).unwrap();
            let shell = ((s.dist(&c, &x) / r) * 10.0).floor().min(9.0) as usize;
            counts[shell] += 1;
        }
        let mut chi2 = 0.0;
        for (i, &obs) in counts.iter().enumerate() {
            let lo = if i == 0 { 0.0 } else { s.ball_mass(&c, r * i as f64 / 10.0) };
            let hi = s.ball_mass(&c, r * (i + 1) as f64 / 10.0);
            let expected = n as f64 * (hi - lo) / total;
            chi2 += (obs as f64 - expected).powi(2) / expected;
        }
        assert!(chi2 < critical, "{:?}: chi2 {chi2} above {critical}", s.kind());
    }
}

#[test]
fn support_region_proposal_examples() {
    let line = SpaceDescriptor::<f64>::lebesgue_line();
    let u = TestFunction::interval(0.0, 1.0);
    let mut rng = substream(4, &[]);
    for _ in 0..1000 {
        let w = line.sample_support_region(&u, 1.0, &mut rng).unwrap();
        assert!((w.density_value - 1.0).abs() < 1e-12);
    }

    let s = weighted();
    let u = TestFunction::ShiftedUnitInterval { n: 4 };
    let n = 200_000;
    let mut hits = 0;
    for _ in 0..n {
        let w = s.sample_support_region(&u, 2.0, &mut rng).unwrap();
        assert!(w.density_value > 0.0);
        if (4.0..=4.5).contains(&w.point.x()) {
            hits += 1;
        }
    }
    let f = hits as f64 / n as f64;
    let se = (f * (1.0 - f) / n as f64).sqrt();
    assert!((f - 2.625 / 5.5).abs() < 3.0 * se, "{f}");

    // A vanishing function with a declared support falls back to uniform draws.
    let z = TestFunction::StepSum { steps: vec![Step::closed(0.0, 1.0, 0.0)] };
    let xs: Vec<f64> = (0..50_000).map(|_| line.sample_support_region(&z, 1.0, &mut rng).unwrap().point.x()).collect();
    assert!(xs.iter().all(|x| (0.0..=1.0).contains(x)));
    let below = xs.iter().filter(|&&x| x < 0.5).count() as f64 / xs.len() as f64;
    assert!((below - 0.5).abs() < 3.0 * (0.25 / xs.len() as f64).sqrt());

    let unbounded = TestFunction::StepSum { steps: vec![Step::closed(0.0, f64::INFINITY, 1.0)] };
    assert!(line.sample_support_region(&unbounded, 1.0, &mut rng).is_err());
}

#[test]
fn hyperbolic_ball_overlap_matches_sampled_fraction() {
    let s = space(SpaceKind::HyperbolicHalfPlane);
    let c1 = Point::plane(0.0, 1.0);
    let c2 = Point::plane(0.7, 1.4);
    let (r1, r2) = (1.0, 0.8);
    let lens = s.ball_intersection_mass(&c1, r1, &c2, r2).unwrap();
    let (f, se) = fraction(&s, c1, r1, 400_000, 9, |p| s.dist(&c2, p) <= r2);
    let area = s.ball_mass(&c1, r1);
    assert!((lens / area - f).abs() < 4.0 * se, "{} vs {f}", lens / area);
}
