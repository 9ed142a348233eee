//! Recessive solutions of `ψ'' = V(λ; a, b) ψ` and the linear-dependence
//! conditions whose common zeros are the poles of the tritronquée.
//!
//! `ψ_k` decays along the ray `arg λ = 2πk/5`. It is represented by its
//! logarithmic derivative `s = ψ'/ψ`, which satisfies `s' = V − s²` and is
//! integrated inward from a WKB initial value. Where `ψ` vanishes, `s` has a
//! simple pole and the integration continues in `t = 1/s`, for which
//! `t' = 1 − V t²` is regular.
//!
//! Two solutions are proportional iff their logarithmic derivatives agree at
//! one regular point, so the conditions "`ψ₋₁ ∝ ψ₂` and `ψ₁ ∝ ψ₋₂`" become
//! `s₋₁(λ*) = s₂(λ*)` and `s₁(λ*) = s₋₂(λ*)` at a matching point `λ*`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::bsb::{tilde_u, BsbSolution, Ratio};
use crate::linalg::{norm2, solve2};
use crate::painleve::PainlevePole;
use crate::periods::{distance_to_segment, PeriodConfig};
use crate::potential::{Potential, TurningPoints};
use crate::taylor::{horner, Segment, StepControl};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyConfig {
    pub tol_ode: f64,
    pub order: usize,
    pub tol_wkb: f64,
    /// Turning-point safety margin as a fraction of the smallest separation.
    pub margin_fraction: f64,
    pub tol_dep: f64,
    /// Finite-difference step factor: `h = fd_factor · (1 + |a|)`.
    pub fd_factor: f64,
    pub min_start_radius: f64,
    pub radius_growth: f64,
    pub max_steps: usize,
    pub max_newton: usize,
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        MonodromyConfig {
            tol_ode: 1e-12,
            order: 30,
            tol_wkb: 1e-10,
            margin_fraction: 0.25,
            tol_dep: 1e-9,
            fd_factor: 1e-6,
            min_start_radius: 10.0,
            radius_growth: 1.25,
            max_steps: 2_000_000,
            max_newton: 30,
        }
    }
}

/// The ray `arg λ = 2πk/5` and the radius where integration starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub k: i8,
    pub start_radius: f64,
}

impl Ray {
    pub fn new(k: i8, start_radius: f64) -> Result<Self> {
        if !(-2..=2).contains(&k) {
            return Err(Error::InvalidParameter("ray index must lie in -2..=2"));
        }
        if !(start_radius > 0.0) {
            return Err(Error::InvalidParameter("start radius must be positive"));
        }
        Ok(Ray { k, start_radius })
    }

    /// The smallest radius `max(min, 5(1 + |a|^{1/2} + |b|^{1/3}))·growthⁿ` at
    /// which the first omitted WKB term is below `tol_wkb · |s|`.
    pub fn for_potential(pot: &Potential, k: i8, cfg: &MonodromyConfig) -> Result<Self> {
        let mut r = cfg.min_start_radius.max(5.0 * (1.0 + pot.a.norm().sqrt() + pot.b.norm().cbrt()));
        for _ in 0..200 {
            let ray = Ray::new(k, r)?;
            let (s, omitted) = wkb_initial(pot, &ray);
            if omitted < cfg.tol_wkb * s.norm() {
                return Ok(ray);
            }
            r *= cfg.radius_growth;
        }
        Err(Error::InvalidParameter("no admissible start radius"))
    }

    pub fn angle(&self) -> f64 {
        2.0 * PI * self.k as f64 / 5.0
    }

    pub fn start_point(&self) -> Complex {
        Complex::from_polar(self.start_radius, self.angle())
    }
}

/// `√V` on ray `k`, with `λ^{1/2} = (−1)^k |λ|^{1/2} e^{iθ_k/2}` so that the
/// recessive exponential `exp(−(4/5)λ^{5/2})` decays outward.
fn sqrt_v_on_ray(pot: &Potential, ray: &Ray, lambda: Complex) -> Complex {
    let sign = if ray.k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let half = Complex::from_polar(sign * lambda.norm().sqrt(), ray.angle() / 2.0);
    let l2 = lambda * lambda;
    let corr = (1.0 - pot.a / (2.0 * l2) - 7.0 * pot.b / (l2 * lambda)).sqrt();
    2.0 * lambda * half * corr
}

/// WKB value of `ψ_k'/ψ_k` at the start point together with a size estimate
/// of the first omitted term.
pub fn wkb_initial(pot: &Potential, ray: &Ray) -> (Complex, f64) {
    let l = ray.start_point();
    let sv = sqrt_v_on_ray(pot, ray, l);
    let v = pot.eval(l);
    let dv = pot.derivative(l);
    let ddv = 12.0 * l;
    let s1 = -dv / (4.0 * v);
    let s2 = (5.0 * dv * dv - 4.0 * v * ddv) / (32.0 * v * v * sv);
    let omitted = s2.norm() * dv.norm() / v.norm().powf(1.5);
    (-sv + s1 + s2, omitted)
}

/// `ψ_k'/ψ_k` at one point, tagged with the ray it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivativeSample {
    pub lambda: Complex,
    pub s: Complex,
    pub k: i8,
}

/// Safety margin around turning points.
pub fn margin(tp: &TurningPoints, cfg: &MonodromyConfig) -> f64 {
    cfg.margin_fraction * tp.min_separation()
}

/// Centroid of the turning points (the origin), pushed out to the safety
/// margin when it is too close to one of them.
pub fn matching_point(tp: &TurningPoints, cfg: &MonodromyConfig) -> Complex {
    let m = margin(tp, cfg);
    let centroid = Complex::new(0.0, 0.0);
    let (i, d) = tp.nearest(centroid);
    if d >= m {
        return centroid;
    }
    let e = tp.roots()[i];
    let dir = if d > 0.0 { (centroid - e) / d } else { Complex::new(1.0, 0.0) };
    e + dir * m
}

// Polygonal path from `a` to `b` keeping `margin` away from the turning points.
fn route(a: Complex, b: Complex, tp: &TurningPoints, margin: f64, depth: usize, out: &mut Vec<Complex>) -> Result<()> {
    let mut worst: Option<(Complex, f64)> = None;
    for e in tp.roots() {
        let d = distance_to_segment(e, a, b);
        if d < margin && worst.is_none_or(|w| d < w.1) {
            worst = Some((e, d));
        }
    }
    let (e, d) = match worst {
        None => {
            out.push(b);
            return Ok(());
        }
        Some(w) => w,
    };
    if depth == 0 {
        return Err(Error::PathNearTurningPoint { distance: d });
    }
    let ab = b - a;
    let t = (((e - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    let foot = a + ab * t;
    let n = if (foot - e).norm() > 1e-12 * margin {
        (foot - e) / (foot - e).norm()
    } else {
        Complex::new(0.0, 1.0) * ab / ab.norm()
    };
    let via = e + n * (2.0 * margin);
    route(a, via, tp, margin, depth - 1, out)?;
    route(via, b, tp, margin, depth - 1, out)
}

/// The waypoints (including both ends) used to reach `target` from `start`.
pub fn integration_path(start: Complex, target: Complex, tp: &TurningPoints, cfg: &MonodromyConfig) -> Result<Vec<Complex>> {
    let m = margin(tp, cfg);
    let (_, d) = tp.nearest(target);
    if d < m * (1.0 - 1e-12) {
        return Err(Error::PathNearTurningPoint { distance: d });
    }
    let mut out = alloc::vec![start];
    route(start, target, tp, m, 8, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    /// value is `s`
    Log,
    /// value is `1/s`
    Inverse,
}

/// Riccati state: the value in its chart.
#[derive(Debug, Clone, Copy)]
struct Riccati {
    chart: Chart,
    y: Complex,
}

impl Riccati {
    fn s(&self) -> Complex {
        match self.chart {
            Chart::Log => self.y,
            Chart::Inverse => self.y.inv(),
        }
    }
}

fn switch_threshold(v: Complex) -> f64 {
    4.0 * (1.0 + v.norm().sqrt())
}

fn riccati_series(pot: &Potential, z: Complex, st: &Riccati, order: usize, c: &mut Vec<Complex>, w: &mut Vec<Complex>) -> f64 {
    let v = pot.taylor(z);
    c.clear();
    c.push(st.y);
    match st.chart {
        Chart::Log => {
            for n in 0..order {
                let mut acc = if n < 4 { v[n] } else { Complex::new(0.0, 0.0) };
                for j in 0..=n {
                    acc -= c[j] * c[n - j];
                }
                c.push(acc / (n as f64 + 1.0));
            }
            2.0 * st.y.norm()
        }
        Chart::Inverse => {
            w.clear();
            for n in 0..order {
                let mut sq = Complex::new(0.0, 0.0);
                for j in 0..=n {
                    sq += c[j] * c[n - j];
                }
                w.push(sq);
                let mut acc = if n == 0 { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) };
                for i in 0..=n.min(3) {
                    acc -= v[i] * w[n - i];
                }
                c.push(acc / (n as f64 + 1.0));
            }
            2.0 * v[0].norm() * st.y.norm()
        }
    }
}

/// Integrates the Riccati equation along the polygon `path` from the value
/// `s0` at `path[0]`; returns `s` at the last waypoint.
pub fn integrate_riccati(pot: &Potential, path: &[Complex], s0: Complex, cfg: &MonodromyConfig) -> Result<Complex> {
    let ctl = StepControl::new(cfg.order, cfg.tol_ode);
    let mut st = Riccati { chart: Chart::Log, y: s0 };
    let mut coeffs = Vec::with_capacity(cfg.order + 1);
    let mut work = Vec::with_capacity(cfg.order + 1);
    let mut steps = 0usize;
    for pair in path.windows(2) {
        let mut seg = Segment::new(pair[0], pair[1]);
        while !seg.done() {
            steps += 1;
            if steps > cfg.max_steps {
                return Err(Error::OdeToleranceNotMet);
            }
            let z = seg.point();
            let stiff = riccati_series(pot, z, &st, cfg.order, &mut coeffs, &mut work);
            let h = ctl.step(&coeffs, stiff);
            if !(h > ctl.min_step * (1.0 + z.norm())) {
                return Err(Error::OdeToleranceNotMet);
            }
            let dz = seg.advance(h);
            st.y = horner(&coeffs, dz);
            if !st.y.is_finite() {
                return Err(Error::OdeToleranceNotMet);
            }
            let m = switch_threshold(pot.eval(seg.point()));
            match st.chart {
                Chart::Log if st.y.norm() > m => st = Riccati { chart: Chart::Inverse, y: st.y.inv() },
                Chart::Inverse if st.y.norm() * m > 2.0 => st = Riccati { chart: Chart::Log, y: st.y.inv() },
                _ => {}
            }
        }
    }
    Ok(st.s())
}

/// `ψ_k'/ψ_k` at `lambda_match`.
pub fn psi_logderivative(pot: &Potential, ray: &Ray, lambda_match: Complex, cfg: &MonodromyConfig) -> Result<LogDerivativeSample> {
    let tp = pot.turning_points()?;
    let path = integration_path(ray.start_point(), lambda_match, &tp, cfg)?;
    let (s0, _) = wkb_initial(pot, ray);
    let s = integrate_riccati(pot, &path, s0, cfg)?;
    Ok(LogDerivativeSample { lambda: lambda_match, s, k: ray.k })
}

fn log_derivatives<const N: usize>(pot: &Potential, ks: [i8; N], lambda_match: Complex, cfg: &MonodromyConfig) -> Result<[Complex; N]> {
    let mut out = [Complex::new(0.0, 0.0); N];
    for (slot, &k) in out.iter_mut().zip(ks.iter()) {
        let ray = Ray::for_potential(pot, k, cfg)?;
        *slot = psi_logderivative(pot, &ray, lambda_match, cfg)?.s;
    }
    Ok(out)
}

/// `(s₋₁ − s₂, s₁ − s₋₂)` at `lambda_match`.
pub fn dependence_residual(pot: &Potential, lambda_match: Complex, cfg: &MonodromyConfig) -> Result<(Complex, Complex)> {
    let [sm1, s2, s1, sm2] = log_derivatives(pot, [-1, 2, 1, -2], lambda_match, cfg)?;
    Ok((sm1 - s2, s1 - sm2))
}

/// [`dependence_residual`] at the default matching point.
pub fn dependence_residual_at(pot: &Potential, cfg: &MonodromyConfig) -> Result<(Complex, Complex)> {
    let tp = pot.turning_points()?;
    dependence_residual(pot, matching_point(&tp, cfg), cfg)
}

/// The monodromy data `(u₂, u₋₂)`.
///
/// Each asymptotic value is a ratio of two solutions at infinity along a
/// ray; after expressing the solutions in the basis `ψ₀, ψ₂` (or `ψ₀, ψ₋₂`)
/// these become cross ratios of logarithmic derivatives at any regular point:
/// `u₂ = [s₂, s₋₁; s₀, s₋₂]` and `u₋₂ = [s₋₂, s₁; s₀, s₂]`, so that
/// `u₂ = 1` exactly when `s₂ = s₋₁`.
pub fn u_values(pot: &Potential, cfg: &MonodromyConfig) -> Result<(Complex, Complex)> {
    let tp = pot.turning_points()?;
    let lm = matching_point(&tp, cfg);
    let [s0, s2, sm2, s1, sm1] = log_derivatives(pot, [0, 2, -2, 1, -1], lm, cfg)?;
    let scale = 1.0 + s0.norm();
    if (s0 - s2).norm() < cfg.tol_dep * scale {
        return Err(Error::DependentBasis { k: 2 });
    }
    if (s0 - sm2).norm() < cfg.tol_dep * scale {
        return Err(Error::DependentBasis { k: -2 });
    }
    let u2 = (s2 - s0) * (sm1 - sm2) / ((s2 - sm2) * (sm1 - s0));
    let um2 = (sm2 - s0) * (s1 - s2) / ((sm2 - s2) * (s1 - s0));
    Ok((u2, um2))
}

/// Newton iteration on the dependence residual with a central-difference
/// Jacobian. Returns the point, the residual norm and the iteration count.
#[allow(clippy::needless_range_loop)]
pub fn solve_dependence(start: Potential, cfg: &MonodromyConfig) -> Result<(Potential, f64, usize)> {
    let eval = |p: &Potential| -> Result<[Complex; 2]> {
        let (f0, f1) = dependence_residual_at(p, cfg)?;
        Ok([f0, f1])
    };
    let mut x = start;
    let mut fx = eval(&x)?;
    for it in 0..cfg.max_newton {
        let res = norm2(fx);
        // Once below tolerance, one more full step is taken if it helps.
        let polishing = res < cfg.tol_dep;
        let h = cfg.fd_factor * (1.0 + x.a.norm());
        let mut jac = [[Complex::new(0.0, 0.0); 2]; 2];
        for col in 0..2 {
            let shift = |sgn: f64| {
                let mut p = x;
                if col == 0 {
                    p.a += sgn * h;
                } else {
                    p.b += sgn * h;
                }
                p
            };
            let fp = eval(&shift(1.0))?;
            let fm = eval(&shift(-1.0))?;
            for row in 0..2 {
                jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let step = match solve2(jac, [-fx[0], -fx[1]]) {
            Some(s) => s,
            None if polishing => return Ok((x, res, it)),
            None => return Err(Error::NewtonDiverged { iterations: it, residual: res }),
        };
        if polishing {
            let trial = Potential::new(x.a + step[0], x.b + step[1]);
            return Ok(match eval(&trial) {
                Ok(ft) if norm2(ft) < res => (trial, norm2(ft), it + 1),
                _ => (x, res, it),
            });
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..12 {
            let trial = Potential::new(x.a + step[0] * t, x.b + step[1] * t);
            if let Ok(ft) = eval(&trial) {
                if norm2(ft) < res || norm2(ft) < cfg.tol_dep {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((nx, nf)) => {
                let moved = (nx.a - x.a).norm() + (nx.b - x.b).norm();
                x = nx;
                fx = nf;
                if moved < 1e-15 * (1.0 + x.a.norm()) {
                    break;
                }
            }
            None => return Err(Error::NewtonDiverged { iterations: it, residual: res }),
        }
    }
    let res = norm2(fx);
    if res < cfg.tol_dep {
        Ok((x, res, cfg.max_newton))
    } else {
        Err(Error::NewtonDiverged { iterations: cfg.max_newton, residual: res })
    }
}

/// Radius policy `k^{−α} ε` for the disc around the `k`-th seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPolicy {
    pub alpha: f64,
    pub epsilon: f64,
}

impl Default for DiscPolicy {
    fn default() -> Self {
        DiscPolicy { alpha: 1.0, epsilon: 1.0 }
    }
}

impl DiscPolicy {
    /// Disc radius for index `k`; unbounded at `k = 0`.
    pub fn radius(&self, k: u32) -> f64 {
        if k == 0 {
            f64::INFINITY
        } else {
            self.epsilon * (k as f64).powf(-self.alpha)
        }
    }
}

/// A pole located from a B-S-B seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleRecord {
    pub q: Ratio,
    pub k: u32,
    pub seed: Potential,
    pub pole: Potential,
    pub dep_residual: f64,
    /// `(|u₂ − ũ₂|, |u₋₂ − ũ₋₂|)` at the seed.
    pub wkb_gap: (f64, f64),
    pub painleve_check: Option<PainlevePole>,
    pub iterations: usize,
}

impl PoleRecord {
    /// `|pole.a − seed.a|`.
    pub fn error_a(&self) -> f64 {
        (self.pole.a - self.seed.a).norm()
    }
}

/// `(|u₂ − ũ₂|, |u₋₂ − ũ₋₂|)` at `point`.
pub fn wkb_gap(point: &Potential, cfg: &MonodromyConfig, periods: &PeriodConfig) -> Result<(f64, f64)> {
    let (u2, um2) = u_values(point, cfg)?;
    let (t2, tm2) = tilde_u(point, periods)?;
    Ok(((u2 - (t2 + 1.0)).norm(), (um2 - (tm2 + 1.0)).norm()))
}

/// Refines a B-S-B seed to a zero of the dependence residual and checks the
/// disc bound `|pole.a − seed.a| ≤ k^{−α} ε` (for `k ≥ 1`).
pub fn refine_pole(seed: &BsbSolution, policy: DiscPolicy, cfg: &MonodromyConfig, periods: &PeriodConfig) -> Result<PoleRecord> {
    if !(policy.alpha > 0.2 && policy.alpha < 1.2) || !(policy.epsilon > 0.0) {
        return Err(Error::InvalidParameter("disc policy needs 1/5 < alpha < 6/5 and epsilon > 0"));
    }
    let (pole, dep_residual, iterations) = solve_dependence(seed.point, cfg)?;
    let distance = (pole.a - seed.point.a).norm();
    let radius = policy.radius(seed.k);
    if distance > radius {
        return Err(Error::OutsideDisc { distance, radius });
    }
    let wkb_gap = wkb_gap(&seed.point, cfg, periods)?;
    Ok(PoleRecord {
        q: seed.q,
        k: seed.k,
        seed: seed.point,
        pole,
        dep_residual,
        wkb_gap,
        painleve_check: None,
        iterations,
    })
}
