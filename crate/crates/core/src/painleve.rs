//! Direct integration of `y'' = 6y² − z` for the tritronquée solution,
//! `y ∼ −√(z/6)` in `|arg z| < 4π/5`, through its double poles.
//!
//! Near a pole `a` every solution has the Laurent expansion
//! `y = (z−a)^{−2} + (a/10)(z−a)² + (1/6)(z−a)³ + b(z−a)⁴ + …`, with `b` the
//! only free coefficient. When `|y|` passes a threshold the integrator fits
//! `(a, b)` to the current `(y, y')`, evaluates the expansion on the far side
//! of the pole and resumes there.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::linalg::solve2;
use crate::taylor::{horner, horner_derivative, Segment, StepControl};
use crate::{Complex, Error, Result};

/// A polynomial in `(a, b)` with real coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    /// `(power of a, power of b, coefficient)`, sorted, no zero coefficients.
    pub terms: Vec<(u32, u32, f64)>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly2::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: f64) -> Self {
        let mut p = Poly2::zero();
        if c != 0.0 {
            p.terms.push((i, j, c));
        }
        p
    }

    fn normalize(mut self) -> Self {
        self.terms.sort_by_key(|x| (x.0, x.1));
        let mut out: Vec<(u32, u32, f64)> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match out.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 += t.2,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.2 != 0.0);
        Poly2 { terms: out }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Poly2 { terms }.normalize()
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for x in &self.terms {
            for y in &other.terms {
                terms.push((x.0 + y.0, x.1 + y.1, x.2 * y.2));
            }
        }
        Poly2 { terms }.normalize()
    }

    pub fn scale(&self, c: f64) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|t| (t.0, t.1, t.2 * c)).collect() }.normalize()
    }

    pub fn eval(&self, a: Complex, b: Complex) -> Complex {
        self.terms.iter().map(|&(i, j, c)| a.powu(i) * b.powu(j) * c).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Laurent coefficients about a pole `a`: entry `n` multiplies `(z−a)^{n−2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentTable {
    pub coeffs: Vec<Poly2>,
}

impl LaurentTable {
    /// Highest power of `(z − a)` in the table.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 3
    }

    /// Coefficient of `(z − a)^power`.
    pub fn coefficient(&self, power: i32) -> Option<&Poly2> {
        self.coeffs.get((power + 2) as usize)
    }

    pub fn eval(&self, a: Complex, b: Complex) -> Vec<Complex> {
        self.coeffs.iter().map(|p| p.eval(a, b)).collect()
    }
}

// (n−6)(n+1) c_n = 6 Σ_{i+j=n, 0<i,j<n} c_i c_j − [z]_{n−4}, with z = a + (z−a).
fn laurent_divisor(n: usize) -> f64 {
    (n as f64 - 6.0) * (n as f64 + 1.0)
}

/// Coefficients of the Laurent expansion at a movable pole, as polynomials
/// in the pole position `a` and the free quartic coefficient `b`, up to the
/// power `(z − a)^order`.
pub fn laurent_coefficients(order: usize) -> Result<LaurentTable> {
    if order < 4 {
        return Err(Error::InvalidParameter("Laurent order must be at least 4"));
    }
    let mut c: Vec<Poly2> = Vec::with_capacity(order + 3);
    c.push(Poly2::constant(1.0));
    for n in 1..order + 3 {
        if n == 6 {
            c.push(Poly2::monomial(0, 1, 1.0));
            continue;
        }
        let mut acc = Poly2::zero();
        for i in 1..n {
            acc = acc.add(&c[i].mul(&c[n - i]));
        }
        acc = acc.scale(6.0);
        if n == 4 {
            acc = acc.add(&Poly2::monomial(1, 0, -1.0));
        } else if n == 5 {
            acc = acc.add(&Poly2::constant(-1.0));
        }
        c.push(acc.scale(1.0 / laurent_divisor(n)));
    }
    Ok(LaurentTable { coeffs: c })
}

/// Numeric Laurent coefficients for given `(a, b)`; entry `n` multiplies
/// `(z−a)^{n−2}`, up to `(z−a)^order`.
pub fn laurent_numeric(a: Complex, b: Complex, order: usize) -> Vec<Complex> {
    let mut c = Vec::with_capacity(order + 3);
    c.push(Complex::new(1.0, 0.0));
    for n in 1..order + 3 {
        if n == 6 {
            c.push(b);
            continue;
        }
        let mut acc = Complex::new(0.0, 0.0);
        for i in 1..n {
            acc += c[i] * c[n - i];
        }
        acc *= 6.0;
        if n == 4 {
            acc -= a;
        } else if n == 5 {
            acc -= 1.0;
        }
        c.push(acc / laurent_divisor(n));
    }
    c
}

/// `(y, y')` of the truncated expansion at offset `zeta = z − a`.
pub fn laurent_eval(c: &[Complex], zeta: Complex) -> (Complex, Complex) {
    let mut y = Complex::new(0.0, 0.0);
    let mut yp = Complex::new(0.0, 0.0);
    let inv = zeta.inv();
    let mut pw = inv * inv;
    for (n, cn) in c.iter().enumerate() {
        let p = n as f64 - 2.0;
        y += cn * pw;
        yp += cn * pw * p * inv;
        pw *= zeta;
    }
    (y, yp)
}

/// Coefficients `c_j` of `y = −√(z/6) Σ c_j z^{−5j/2}`.
pub fn asymptotic_coefficients(count: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(count);
    if count == 0 {
        return c;
    }
    c.push(1.0);
    let inv_sqrt6 = 1.0 / 6.0f64.sqrt();
    for n in 1..count {
        let p = 0.5 - 2.5 * (n - 1) as f64;
        let mut acc = -inv_sqrt6 * c[n - 1] * p * (p - 1.0);
        for i in 1..n {
            acc -= c[i] * c[n - i];
        }
        c.push(acc / 2.0);
    }
    c
}

/// Optimally truncated asymptotic `(y, y')` at `z` and the size of the
/// first omitted term relative to `|y|`.
pub fn asymptotic_value(z: Complex, max_terms: usize) -> (Complex, Complex, f64) {
    let c = asymptotic_coefficients(max_terms);
    let inv_sqrt6 = 1.0 / 6.0f64.sqrt();
    let lz = z.ln();
    let mut y = Complex::new(0.0, 0.0);
    let mut yp = Complex::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut omitted = 0.0;
    for (j, cj) in c.iter().enumerate() {
        let p = 0.5 - 2.5 * j as f64;
        let term = (lz * p).exp() * (-inv_sqrt6 * cj);
        let size = term.norm();
        if size >= last {
            omitted = size;
            break;
        }
        y += term;
        yp += term * p / z;
        last = size;
        omitted = 0.0;
    }
    (y, yp, omitted / y.norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainleveConfig {
    pub tol_ode: f64,
    pub order: usize,
    /// `|y|` above which the integrator passes the pole in Laurent form.
    pub blowup: f64,
    pub laurent_order: usize,
    pub tol_fit: f64,
    pub tol_seed: f64,
    pub tol_match: f64,
    pub z_seed_min: f64,
    pub sector_margin: f64,
    pub max_steps: usize,
}

impl Default for PainleveConfig {
    fn default() -> Self {
        PainleveConfig {
            tol_ode: 1e-14,
            order: 30,
            blowup: 100.0,
            laurent_order: 16,
            tol_fit: 1e-8,
            tol_seed: 1e-10,
            tol_match: 1e-8,
            z_seed_min: 40.0,
            sector_margin: PI / 10.0,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chart {
    Regular,
    /// The state sits inside the Laurent disc of the pole at `center`.
    Laurent { center: Complex, quartic: Complex },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TritronqueeState {
    pub z: Complex,
    pub y: Complex,
    pub yp: Complex,
    pub chart: Chart,
}

/// A pole passed by the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainlevePole {
    pub a: Complex,
    /// Coefficient of `(z − a)⁴` in the Laurent expansion.
    pub b: Complex,
    /// Relative mismatch of the fitted expansion at the previous step point.
    pub fit_residual: f64,
}

/// Asymptotic initial state at `z0`, certified by integrating in from `2·z0`.
pub fn seed_asymptotic(z0: Complex, cfg: &PainleveConfig) -> Result<TritronqueeState> {
    if z0.norm() < cfg.z_seed_min || z0.arg().abs() >= 0.8 * PI - cfg.sector_margin {
        return Err(Error::InvalidParameter("seed point outside the asymptotic sector"));
    }
    let (y, yp, rel) = asymptotic_value(z0, 12);
    if rel > cfg.tol_seed {
        return Err(Error::SeedNotConverged { mismatch: rel });
    }
    let (y2, yp2, _) = asymptotic_value(2.0 * z0, 12);
    let far = TritronqueeState { z: 2.0 * z0, y: y2, yp: yp2, chart: Chart::Regular };
    let (back, _) = track(far, &[2.0 * z0, z0], cfg)?;
    let mismatch = ((back.y - y).norm() + (back.yp - yp).norm()) / (1.0 + y.norm());
    if mismatch > cfg.tol_match {
        return Err(Error::SeedNotConverged { mismatch });
    }
    Ok(TritronqueeState { z: z0, y, yp, chart: Chart::Regular })
}

fn painleve_series(z: Complex, y: Complex, yp: Complex, order: usize, c: &mut Vec<Complex>) {
    c.clear();
    c.push(y);
    c.push(yp);
    for n in 0..order.saturating_sub(1) {
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..=n {
            acc += c[i] * c[n - i];
        }
        acc *= 6.0;
        if n == 0 {
            acc -= z;
        } else if n == 1 {
            acc -= 1.0;
        }
        c.push(acc / ((n as f64 + 1.0) * (n as f64 + 2.0)));
    }
}

/// Fits `(a, b)` so that the truncated Laurent expansion reproduces `(y, y')`
/// at `z`.
pub fn fit_laurent(z: Complex, y: Complex, yp: Complex, order: usize) -> Result<(Complex, Complex)> {
    let zeta0 = -2.0 * y / yp;
    let mut a = z - zeta0;
    let mut b = Complex::new(0.0, 0.0);
    let resid = |a: Complex, b: Complex| -> [Complex; 2] {
        let zeta = z - a;
        let (ly, lyp) = laurent_eval(&laurent_numeric(a, b, order), zeta);
        [(ly - y) * zeta * zeta, (lyp - yp) * zeta * zeta * zeta]
    };
    for _ in 0..40 {
        let f = resid(a, b);
        let ha = 1e-7 * zeta0.norm();
        let hb = 1e-3;
        let fa = resid(a + ha, b);
        let fam = resid(a - ha, b);
        let fb = resid(a, b + hb);
        let fbm = resid(a, b - hb);
        let jac = [
            [(fa[0] - fam[0]) / (2.0 * ha), (fb[0] - fbm[0]) / (2.0 * hb)],
            [(fa[1] - fam[1]) / (2.0 * ha), (fb[1] - fbm[1]) / (2.0 * hb)],
        ];
        let step = solve2(jac, [-f[0], -f[1]]).ok_or(Error::PoleFitFailed { residual: f64::NAN })?;
        a += step[0];
        b += step[1];
        if step[0].norm() < 1e-15 * (1.0 + a.norm()) && step[1].norm() < 1e-12 * (1.0 + b.norm()) {
            break;
        }
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::PoleFitFailed { residual: f64::NAN });
    }
    Ok((a, b))
}

/// Integrates along the polygon `path` (which must start at `state.z`),
/// passing through every pole met on the way.
pub fn track(state: TritronqueeState, path: &[Complex], cfg: &PainleveConfig) -> Result<(TritronqueeState, Vec<PainlevePole>)> {
    track_impl(state, path, cfg, None)
}

/// As [`track`], also returning the visited points (pole passes show up as
/// jumps).
pub fn track_recorded(
    state: TritronqueeState,
    path: &[Complex],
    cfg: &PainleveConfig,
) -> Result<(TritronqueeState, Vec<PainlevePole>, Vec<Complex>)> {
    let mut trail = Vec::new();
    let (s, p) = track_impl(state, path, cfg, Some(&mut trail))?;
    Ok((s, p, trail))
}

fn track_impl(
    state: TritronqueeState,
    path: &[Complex],
    cfg: &PainleveConfig,
    mut trail: Option<&mut Vec<Complex>>,
) -> Result<(TritronqueeState, Vec<PainlevePole>)> {
    let first = *path.first().ok_or(Error::InvalidParameter("empty path"))?;
    if (first - state.z).norm() > 1e-12 * (1.0 + state.z.norm()) {
        return Err(Error::InvalidParameter("path must start at the state's point"));
    }
    let ctl = StepControl::new(cfg.order, cfg.tol_ode);
    let mut coeffs = Vec::with_capacity(cfg.order + 1);
    let mut poles = Vec::new();
    let (mut y, mut yp) = match state.chart {
        Chart::Regular => (state.y, state.yp),
        Chart::Laurent { center, quartic } => laurent_eval(&laurent_numeric(center, quartic, cfg.laurent_order), state.z - center),
    };
    let mut chart = Chart::Regular;
    let mut steps = 0usize;
    if let Some(t) = trail.as_deref_mut() {
        t.push(first);
    }
    for pair in path.windows(2) {
        let mut seg = Segment::new(pair[0], pair[1]);
        chart = Chart::Regular;
        while !seg.done() {
            steps += 1;
            if steps > cfg.max_steps {
                let z = seg.point();
                return Err(Error::StepUnderflow { re: z.re, im: z.im });
            }
            let z = seg.point();
            painleve_series(z, y, yp, cfg.order, &mut coeffs);
            let h = ctl.step(&coeffs, (12.0 * y.norm()).sqrt());
            if !(h > ctl.min_step * (1.0 + z.norm())) {
                return Err(Error::StepUnderflow { re: z.re, im: z.im });
            }
            let dz = seg.advance(h);
            let prev = (z, y);
            y = horner(&coeffs, dz);
            yp = horner_derivative(&coeffs, dz);
            if let Some(t) = trail.as_deref_mut() {
                t.push(seg.point());
            }
            if y.norm() > cfg.blowup && !seg.done() {
                let zc = seg.point();
                let (a, b) = fit_laurent(zc, y, yp, cfg.laurent_order)?;
                let lc = laurent_numeric(a, b, cfg.laurent_order);
                let (py, _) = laurent_eval(&lc, prev.0 - a);
                let fit_residual = (py - prev.1).norm() / prev.1.norm();
                if !(fit_residual <= cfg.tol_fit) {
                    return Err(Error::PoleFitFailed { residual: fit_residual });
                }
                poles.push(PainlevePole { a, b, fit_residual });
                // Leave the pole at twice the entry distance.
                let r = (zc - a).norm();
                let start = pair[0];
                let along = ((a - start) * seg.dir().conj()).re;
                let off = ((a - start) * seg.dir().conj()).im.abs();
                let exit = along + ((2.0 * r).powi(2) - off * off).max(0.0).sqrt();
                seg.jump_to(exit);
                let ze = seg.point();
                let (ly, lyp) = laurent_eval(&lc, ze - a);
                y = ly;
                yp = lyp;
                if seg.done() {
                    chart = Chart::Laurent { center: a, quartic: b };
                }
                if let Some(t) = trail.as_deref_mut() {
                    t.push(ze);
                }
            }
        }
    }
    let z = *path.last().expect("nonempty");
    Ok((TritronqueeState { z, y, yp, chart }, poles))
}

/// Seeds at `z_seed_min` on the positive axis and follows the real axis to
/// `x_end`, returning every pole passed.
pub fn real_axis_poles(x_end: f64, cfg: &PainleveConfig) -> Result<Vec<PainlevePole>> {
    let z0 = Complex::new(cfg.z_seed_min, 0.0);
    let st = seed_asymptotic(z0, cfg)?;
    let (_, poles) = track(st, &[z0, Complex::new(x_end, 0.0)], cfg)?;
    Ok(poles)
}

/// The pole of the tritronquée closest to the negative real axis origin
/// side: the first one met when following the real axis leftwards.
pub fn first_real_pole(cfg: &PainleveConfig) -> Result<PainlevePole> {
    real_axis_poles(-3.0, cfg)?
        .first()
        .copied()
        .ok_or_else(|| Error::InsufficientData("no pole on [-3, 40]".into()))
}

/// The pole nearest to `target`, reached from the asymptotic seed through
/// the origin along a straight line extended slightly past `target`.
pub fn locate_pole_near(target: Complex, cfg: &PainleveConfig) -> Result<PainlevePole> {
    let z0 = Complex::new(cfg.z_seed_min, 0.0);
    let st = seed_asymptotic(z0, cfg)?;
    let origin = Complex::new(0.0, 0.0);
    let beyond = target * (1.0 + 0.5 / target.norm().max(1e-300));
    let path = if target.im == 0.0 && target.re < 0.0 {
        alloc::vec![z0, beyond]
    } else {
        alloc::vec![z0, origin, beyond]
    };
    let (_, poles) = track(st, &path, cfg)?;
    poles
        .into_iter()
        .min_by(|p, q| (p.a - target).norm().total_cmp(&(q.a - target).norm()))
        .filter(|p| (p.a - target).norm() < 0.5)
        .ok_or_else(|| Error::InsufficientData("no pole passed near the target".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn laurent_low_orders() {
        let t = laurent_coefficients(8).unwrap();
        assert_eq!(t.coefficient(-2).unwrap(), &Poly2::constant(1.0));
        for p in -1..=1 {
            assert!(t.coefficient(p).unwrap().is_zero());
        }
        assert_eq!(t.coefficient(2).unwrap(), &Poly2::monomial(1, 0, 0.1));
        assert_eq!(t.coefficient(3).unwrap(), &Poly2::constant(1.0 / 6.0));
        assert_eq!(t.coefficient(4).unwrap(), &Poly2::monomial(0, 1, 1.0));
        assert!(t.coefficient(5).unwrap().is_zero());
        let c6 = t.coefficient(6).unwrap();
        assert!((c6.eval(c(1.0, 0.0), c(0.0, 0.0)).re - 1.0 / 300.0).abs() < 1e-16);
        assert!(laurent_coefficients(3).is_err());
    }

    #[test]
    fn numeric_matches_table() {
        let t = laurent_coefficients(12).unwrap();
        let (a, b) = (c(-2.3, 0.4), c(0.1, -0.2));
        let num = laurent_numeric(a, b, 12);
        for (x, y) in t.eval(a, b).iter().zip(num.iter()) {
            assert!((x - y).norm() < 1e-14 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn asymptotic_coefficients_first_terms() {
        let c = asymptotic_coefficients(4);
        assert!((c[1] - 0.051_031_036_307_982_88).abs() < 1e-12);
        assert!((c[1] - 1.0 / (8.0 * 6.0f64.sqrt())).abs() < 1e-15);
    }
}
