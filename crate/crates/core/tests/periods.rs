mod common;

use std::f64::consts::PI;

use common::{boutroux_point, c, continue_sqrt, durand_kerner, primitive_11};
use proptest::prelude::*;
use tritronquee::periods::{
    legendre_residual, period, period_derivatives, sqrt_v, CycleId, PeriodConfig, PeriodData, Sheet,
};
use tritronquee::{Complex, Potential};

#[test]
fn roots_match_durand_kerner_at_anchor() {
    let pot = Potential::real(-2.34, -0.064);
    let tp = pot.turning_points().unwrap();
    let oracle = durand_kerner(&pot);
    for r in tp.roots() {
        assert!(pot.eval(r).norm() < 1e-10);
        let nearest = oracle.iter().map(|o| (o - r).norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-12, "root {r} has no oracle partner ({nearest:e})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn vieta_relations(ar in -10.0..10.0f64, ai in -10.0..10.0f64, br in -10.0..10.0f64, bi in -10.0..10.0f64) {
        let pot = Potential::new(c(ar, ai), c(br, bi));
        if let Ok(tp) = pot.turning_points() {
            let r = tp.roots();
            let scale = 1.0f64.max(pot.a.norm().powf(1.5)).max(pot.b.norm());
            for x in r {
                prop_assert!(pot.eval(x).norm() < 1e-12 * scale * 4.0);
            }
            prop_assert!((r[0] + r[1] + r[2]).norm() < 1e-12 * (1.0 + tp.scale()));
            prop_assert!((r[0] * r[1] * r[2] - 7.0 * pot.b).norm() < 1e-12 * (1.0 + pot.b.norm() * 7.0));
            prop_assert!((r[0] * r[1] + r[0] * r[2] + r[1] * r[2] + pot.a / 2.0).norm() < 1e-12 * (1.0 + pot.a.norm()));
        }
    }
}

#[test]
fn sqrt_v_agrees_with_stepwise_continuation() {
    let pot = Potential::real(-2.34, -0.064);
    let tp = pot.turning_points().unwrap();
    let start = c(10.0, 0.0);
    let w0 = sqrt_v(&pot, &tp, start).unwrap();
    assert!(w0.re > 0.0);
    let (eu, el) = (tp.upper(), tp.lower());
    let mut targets: Vec<Complex> = (1..10).map(|j| eu + (el - eu) * (j as f64 / 10.0)).collect();
    targets.extend([c(0.0, 0.0), c(-0.2, 0.05), c(3.0, 4.0), c(-1.0, 2.0), c(0.5, -3.0), c(-4.0, -1.0)]);
    for t in targets {
        // Route through a point far from the cuts on the side of the target.
        let via = if t.im >= 0.0 { c(2.0, 3.0) } else { c(2.0, -3.0) };
        let path = if t.re < -0.5 { vec![start, via, t] } else { vec![start, t] };
        let oracle = continue_sqrt(&pot, &path, w0, 4000);
        let got = sqrt_v(&pot, &tp, t).unwrap();
        assert!((got - oracle).norm() < 1e-9 * (1.0 + oracle.norm()), "at {t}: {got} vs {oracle}");
    }
}

#[test]
fn continuation_around_two_turning_points_closes() {
    let pot = primitive_11().point;
    let tp = pot.turning_points().unwrap();
    let (eu, el) = (tp.upper(), tp.lower());
    // Ellipse m + h·cos(θ − iξ) around [eu, el], halfway out to the inner root.
    let (m, h) = ((eu + el) / 2.0, (el - eu) / 2.0);
    let xi = 0.5 * ((tp.inner() - m) / h).acosh().re.abs();
    let circle: Vec<Complex> = (0..=4000).map(|j| m + h * Complex::new(2.0 * PI * j as f64 / 4000.0, -xi).cos()).collect();
    let w0 = pot.eval(circle[0]).sqrt();
    let w1 = continue_sqrt(&pot, &circle, w0, 2);
    assert!((w1 - w0).norm() < 1e-12 * w0.norm());
    // Around a single turning point the branch flips.
    let small: Vec<Complex> = (0..=2000).map(|j| eu + Complex::from_polar(0.1, 2.0 * PI * j as f64 / 2000.0)).collect();
    let v0 = pot.eval(small[0]).sqrt();
    let v1 = continue_sqrt(&pot, &small, v0, 2);
    assert!((v1 + v0).norm() < 1e-12 * v0.norm());
}

#[test]
fn anchor_periods_reproduce_i_pi() {
    let sol = primitive_11();
    let pd = PeriodData::at(&sol.point, &PeriodConfig::default()).unwrap();
    assert!((pd.chi2 - c(0.0, PI)).norm() < 1e-10);
    assert!((pd.chi_m2 - c(0.0, PI)).norm() < 1e-10);
    // The three-digit values are close but not exact.
    let rough = Potential::real(-2.34, -0.064);
    assert!((period(&rough, CycleId::CMinus1).unwrap() - c(0.0, PI)).norm() < 0.02);
}

#[test]
fn conjugation_swaps_cycles() {
    for pot in [Potential::real(-2.34, -0.064), Potential::real(-3.0, -0.1), primitive_11().point.scaled(1.7)] {
        let chi2 = period(&pot, CycleId::CMinus1).unwrap();
        let chim2 = period(&pot, CycleId::C1).unwrap();
        assert!((chi2 + chim2.conj()).norm() < 1e-12 * chi2.norm(), "{chi2} vs {chim2}");
    }
}

/// `∮ √V dλ` over the ellipse `m + h·cos(θ − iξ)` around the inner and upper
/// turning points, counter-clockwise, with the branch carried from a point
/// where it is read off the sheet.
fn ellipse_period(pot: &Potential, n: usize) -> Complex {
    let tp = pot.turning_points().unwrap();
    let (ei, eu, el) = (tp.inner(), tp.upper(), tp.lower());
    let m = (ei + eu) / 2.0;
    let h = (eu - ei) / 2.0;
    // Elliptic radius of the third root, and a contour halfway out to it.
    let xi_third = ((el - m) / h).acosh().re.abs();
    let xi = 0.5 * xi_third;
    let sheet = Sheet::new(tp, 1e-9).unwrap();
    let point = |th: f64| m + h * Complex::new(th, -xi).cos();
    let deriv = |th: f64| -h * Complex::new(th, -xi).sin();
    // Start on the far side from the third root, off every cut.
    let mut th0 = 0.0;
    let mut best = 0.0;
    for j in 0..64 {
        let th = 2.0 * PI * j as f64 / 64.0;
        let d = (point(th) - el).norm();
        if d > best {
            best = d;
            th0 = th;
        }
    }
    let th0 = th0 + 0.013;
    let mut w = sheet.sqrt_v(point(th0)).unwrap();
    let mut acc = Complex::new(0.0, 0.0);
    for j in 0..n {
        let th = th0 + 2.0 * PI * j as f64 / n as f64;
        let cand = pot.eval(point(th)).sqrt();
        w = if (cand - w).norm() <= (cand + w).norm() { cand } else { -cand };
        acc += w * deriv(th);
    }
    acc * (2.0 * PI / n as f64)
}

#[test]
fn period_matches_dense_contour_trapezoid() {
    for pot in [primitive_11().point, Potential::new(c(-2.0, 0.7), c(-0.05, 0.02)), boutroux_point(2.0, 1.0)] {
        let chi2 = period(&pot, CycleId::CMinus1).unwrap();
        let contour = ellipse_period(&pot, 20_000);
        // Counter-clockwise, starting on the sheet's branch: this is c₋₁.
        let err = (contour - chi2).norm();
        assert!(err < 1e-8 * chi2.norm(), "{pot:?}: {contour} vs {chi2}");
    }
}

#[test]
fn derivatives_match_central_differences() {
    let h = 1e-5;
    for pot in [primitive_11().point, Potential::new(c(-2.5, 0.4), c(-0.07, 0.01)), boutroux_point(3.0, 1.0)] {
        for cycle in [CycleId::CMinus1, CycleId::C1] {
            let (da, db) = period_derivatives(&pot, cycle).unwrap();
            let f = |p: Potential| period(&p, cycle).unwrap();
            let fda = (f(Potential::new(pot.a + h, pot.b)) - f(Potential::new(pot.a - h, pot.b))) / (2.0 * h);
            let fdb = (f(Potential::new(pot.a, pot.b + h)) - f(Potential::new(pot.a, pot.b - h))) / (2.0 * h);
            assert!((fda - da).norm() < 1e-6 * da.norm(), "{cycle:?} a: {fda} vs {da}");
            assert!((fdb - db).norm() < 1e-6 * db.norm(), "{cycle:?} b: {fdb} vs {db}");
        }
    }
}

#[test]
fn legendre_identity_at_anchor() {
    let pd = PeriodData::at(&primitive_11().point, &PeriodConfig::default()).unwrap();
    assert!(legendre_residual(&pd) < 1e-8);
}

#[test]
fn derivative_scaling_with_x_two() {
    let p = primitive_11().point;
    let x: f64 = 2.0;
    for cycle in [CycleId::CMinus1, CycleId::C1] {
        let (da, db) = period_derivatives(&p, cycle).unwrap();
        let (sa, sb) = period_derivatives(&p.scaled(x), cycle).unwrap();
        assert!((sa - da * x.sqrt()).norm() < 1e-10 * sa.norm());
        assert!((sb - db * x.powf(-0.5)).norm() < 1e-10 * sb.norm());
    }
}

#[test]
fn node_doubling_is_converged() {
    let pot = boutroux_point(1.0, 3.0);
    let fine = PeriodConfig { tol_quad: 1e-14, ..PeriodConfig::default() };
    let a = PeriodData::at(&pot, &PeriodConfig::default()).unwrap();
    let b = PeriodData::at(&pot, &fine).unwrap();
    assert!((a.chi2 - b.chi2).norm() < 1e-10 * b.chi2.norm());
    assert!((a.chi_m2 - b.chi_m2).norm() < 1e-10 * b.chi_m2.norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn legendre_at_random_boutroux_points(s in 0.6..4.0f64, t in 0.6..4.0f64) {
        let pot = boutroux_point(s, t);
        let pd = PeriodData::at(&pot, &PeriodConfig::default()).unwrap();
        prop_assert!(legendre_residual(&pd) < 1e-8, "residual {}", legendre_residual(&pd));
    }

    #[test]
    fn scaling_law(s in 0.6..4.0f64, t in 0.6..4.0f64, x in 0.5..4.0f64) {
        let pot = boutroux_point(s, t);
        let base = PeriodData::at(&pot, &PeriodConfig::default()).unwrap();
        let scaled = PeriodData::at(&pot.scaled(x), &PeriodConfig::default()).unwrap();
        let f = x.powf(2.5);
        prop_assert!((scaled.chi2 - base.chi2 * f).norm() < 1e-8 * (base.chi2 * f).norm());
        prop_assert!((scaled.chi_m2 - base.chi_m2 * f).norm() < 1e-8 * (base.chi_m2 * f).norm());
    }
}
