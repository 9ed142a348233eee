//! Cycle periods of `√V dλ` on the elliptic curve `μ² = V(λ; a, b)`.
//!
//! `χ₂` is the period over `c₋₁`, the cycle around the inner and upper
//! turning points; `χ₋₂` is the period over `c₁`, around the inner and lower
//! ones. Both are twice a line integral along the straight segment joining
//! the pair, taken on the sheet described by [`Sheet`]. Orientations are
//! fixed so that at the real Boutroux point near `(−2.34, −0.064)` both
//! periods equal `+iπ`, and then
//! `∂ₐχ₂ ∂_bχ₋₂ − ∂ₐχ₋₂ ∂_bχ₂ = −28πi` holds identically.

use core::f64::consts::PI;

use crate::potential::{Potential, TurningPoints};
use crate::quadrature::{integrate, ChebyshevKind};
use crate::{Complex, Error, Result, I};

/// The value the Legendre relation assigns to the Jacobian determinant.
pub const LEGENDRE_DETERMINANT: Complex = Complex::new(0.0, -28.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodConfig {
    /// Node-doubling tolerance, relative to `max(1, |integral|)`.
    pub tol_quad: f64,
    /// Points closer than `tol_cut · (1 + scale)` to a cut are rejected.
    pub tol_cut: f64,
    pub initial_nodes: usize,
    pub max_nodes: usize,
}

impl Default for PeriodConfig {
    fn default() -> Self {
        PeriodConfig { tol_quad: 1e-10, tol_cut: 1e-9, initial_nodes: 16, max_nodes: 1 << 15 }
    }
}

/// The two cycles of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleId {
    /// `c₁`, carrying `χ₋₂`.
    C1,
    /// `c₋₁`, carrying `χ₂`.
    CMinus1,
}

impl CycleId {
    /// Index of the period this cycle defines (`2` for `c₋₁`, `−2` for `c₁`).
    pub fn chi_index(self) -> i32 {
        match self {
            CycleId::C1 => -2,
            CycleId::CMinus1 => 2,
        }
    }
}

/// A single-valued branch of `√V` on the plane cut along a star.
///
/// The cuts are the segments from the inner turning point to the upper and
/// lower ones, plus the ray leaving the inner point away from the other two.
/// The branch is normalised by `Re √V > 0` on the far positive real axis.
#[derive(Debug, Clone, Copy)]
pub struct Sheet {
    tp: TurningPoints,
    ray: Complex,
    kappa: Complex,
    tol: f64,
}

impl Sheet {
    pub fn new(tp: TurningPoints, tol_cut: f64) -> Result<Self> {
        let scale = 1.0 + tp.scale();
        let mut dir = tp.inner() - (tp.upper() + tp.lower()) / 2.0;
        if dir.norm() < 1e-12 * scale {
            dir = Complex::new(-1.0, 0.0);
        }
        let ray = dir / dir.norm();
        let mut sheet = Sheet { tp, ray, kappa: (-ray).sqrt(), tol: tol_cut * scale };
        let probe = Complex::new(1e3 * scale, 0.0);
        if sheet.distance_to_cuts(probe) < 1e-3 * scale {
            return Err(Error::OnBranchCut);
        }
        if sheet.raw(probe).re < 0.0 {
            sheet.kappa = -sheet.kappa;
        }
        Ok(sheet)
    }

    pub fn turning_points(&self) -> &TurningPoints {
        &self.tp
    }

    /// `√V(λ)` on this sheet.
    pub fn sqrt_v(&self, lambda: Complex) -> Result<Complex> {
        if self.distance_to_cuts(lambda) < self.tol {
            return Err(Error::OnBranchCut);
        }
        let (eu, el) = (self.tp.upper(), self.tp.lower());
        let near_window = distance_to_segment(lambda, eu, el) < 1e-7 * (1.0 + self.tp.scale());
        if !near_window {
            return Ok(self.raw(lambda));
        }
        // The segment [upper, lower] is not a cut of this sheet but is one of
        // the factorisation below; pick the sign seen from just outside.
        let out = (lambda - self.tp.inner()) / (lambda - self.tp.inner()).norm();
        let reference = self.raw(lambda + out * (1e-5 * (1.0 + self.tp.scale())));
        let v = 2.0 * sqrt_cubic(&self.tp, lambda);
        Ok(if (v - reference).norm() <= (v + reference).norm() { v } else { -v })
    }

    fn raw(&self, lambda: Complex) -> Complex {
        let (ei, eu, el) = (self.tp.inner(), self.tp.upper(), self.tp.lower());
        let f = (-(lambda - ei) / self.ray).sqrt();
        let mid = (eu + el) / 2.0;
        let h = (eu - el) / 2.0;
        let d = lambda - mid;
        let mut g = (d * d - h * h).sqrt();
        if (g * d.conj()).re < 0.0 {
            g = -g;
        }
        let v = 2.0 * self.kappa * f * g;
        if inside_triangle(lambda, ei, eu, el) {
            -v
        } else {
            v
        }
    }

    fn distance_to_cuts(&self, lambda: Complex) -> f64 {
        let ei = self.tp.inner();
        let s1 = distance_to_segment(lambda, ei, self.tp.upper());
        let s2 = distance_to_segment(lambda, ei, self.tp.lower());
        let t = ((lambda - ei) * self.ray.conj()).re;
        let ray_d = if t <= 0.0 { (lambda - ei).norm() } else { ((lambda - ei) * self.ray.conj()).im.abs() };
        s1.min(s2).min(ray_d)
    }
}

fn sqrt_cubic(tp: &TurningPoints, lambda: Complex) -> Complex {
    let r = tp.roots();
    ((lambda - r[0]) * (lambda - r[1]) * (lambda - r[2])).sqrt()
}

pub(crate) fn distance_to_segment(p: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn inside_triangle(p: Complex, a: Complex, b: Complex, c: Complex) -> bool {
    let cross = |u: Complex, v: Complex| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, p - a);
    let d2 = cross(c - b, p - b);
    let d3 = cross(a - c, p - c);
    (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
}

/// `√V(λ)` on the star-cut sheet of `pot`.
pub fn sqrt_v(pot: &Potential, tp: &TurningPoints, lambda: Complex) -> Result<Complex> {
    let _ = pot;
    Sheet::new(*tp, PeriodConfig::default().tol_cut)?.sqrt_v(lambda)
}

// The straight segment carrying a cycle, in the local parametrisation
// λ = mid + half·t and √V = sign · 2i·half·√(1−t²)·root·√(1 + t·ratio).
struct CycleSegment {
    mid: Complex,
    half: Complex,
    root: Complex,
    ratio: Complex,
    sign: f64,
}

impl CycleSegment {
    fn new(sheet: &Sheet, cycle: CycleId) -> Result<Self> {
        let tp = sheet.turning_points();
        let (to, third, orientation) = match cycle {
            CycleId::CMinus1 => (tp.upper(), tp.lower(), 1.0),
            CycleId::C1 => (tp.lower(), tp.upper(), -1.0),
        };
        let from = tp.inner();
        if distance_to_segment(third, from, to) < 1e-9 * (1.0 + tp.scale()) {
            return Err(Error::OnBranchCut);
        }
        let mid = (from + to) / 2.0;
        let half = (to - from) / 2.0;
        let root = (mid - third).sqrt();
        let ratio = half / (mid - third);
        let local = 2.0 * I * half * root;
        let probe = mid + (third - mid) * 1e-3;
        let v = sheet.sqrt_v(probe)?;
        let branch = if (v - local).norm() <= (v + local).norm() { 1.0 } else { -1.0 };
        Ok(CycleSegment { mid, half, root, ratio, sign: branch * orientation })
    }

    fn period(&self, cfg: &PeriodConfig) -> Result<Complex> {
        let r = self.ratio;
        let est = integrate(ChebyshevKind::Second, cfg.initial_nodes, cfg.max_nodes, cfg.tol_quad, |t| {
            (1.0 + r * t).sqrt()
        })?;
        Ok(self.sign * 4.0 * I * self.half * self.half * self.root * est.value)
    }

    fn derivatives(&self, cfg: &PeriodConfig) -> Result<(Complex, Complex)> {
        let (m, h, r) = (self.mid, self.half, self.ratio);
        let da = integrate(ChebyshevKind::First, cfg.initial_nodes, cfg.max_nodes, cfg.tol_quad, |t| {
            (m + h * t) / (1.0 + r * t).sqrt()
        })?;
        let db = integrate(ChebyshevKind::First, cfg.initial_nodes, cfg.max_nodes, cfg.tol_quad, |t| {
            (1.0 + r * t).sqrt().inv()
        })?;
        let pre = self.sign * I / self.root;
        Ok((pre * da.value, 14.0 * pre * db.value))
    }
}

/// `∮_cycle √V dλ`.
pub fn period(pot: &Potential, cycle: CycleId) -> Result<Complex> {
    period_with(pot, cycle, &PeriodConfig::default())
}

pub fn period_with(pot: &Potential, cycle: CycleId, cfg: &PeriodConfig) -> Result<Complex> {
    let sheet = Sheet::new(pot.turning_points()?, cfg.tol_cut)?;
    CycleSegment::new(&sheet, cycle)?.period(cfg)
}

/// `(∮ ω_a, 14 ∮ ω_b)` with `ω_a = −λ dλ/μ` and `ω_b = −dλ/μ`, i.e. the
/// partial derivatives of the period in `a` and `b`.
pub fn period_derivatives(pot: &Potential, cycle: CycleId) -> Result<(Complex, Complex)> {
    period_derivatives_with(pot, cycle, &PeriodConfig::default())
}

pub fn period_derivatives_with(pot: &Potential, cycle: CycleId, cfg: &PeriodConfig) -> Result<(Complex, Complex)> {
    let sheet = Sheet::new(pot.turning_points()?, cfg.tol_cut)?;
    CycleSegment::new(&sheet, cycle)?.derivatives(cfg)
}

/// Both periods and their four first derivatives at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodData {
    pub chi2: Complex,
    pub chi_m2: Complex,
    pub dchi2_da: Complex,
    pub dchi2_db: Complex,
    pub dchim2_da: Complex,
    pub dchim2_db: Complex,
}

impl PeriodData {
    pub fn at(pot: &Potential, cfg: &PeriodConfig) -> Result<Self> {
        let sheet = Sheet::new(pot.turning_points()?, cfg.tol_cut)?;
        let plus = CycleSegment::new(&sheet, CycleId::CMinus1)?;
        let minus = CycleSegment::new(&sheet, CycleId::C1)?;
        let (dchi2_da, dchi2_db) = plus.derivatives(cfg)?;
        let (dchim2_da, dchim2_db) = minus.derivatives(cfg)?;
        Ok(PeriodData {
            chi2: plus.period(cfg)?,
            chi_m2: minus.period(cfg)?,
            dchi2_da,
            dchi2_db,
            dchim2_da,
            dchim2_db,
        })
    }

    pub fn chi(&self) -> [Complex; 2] {
        [self.chi2, self.chi_m2]
    }

    /// Jacobian `∂(χ₂, χ₋₂)/∂(a, b)`, rows indexed by the period.
    pub fn jacobian(&self) -> [[Complex; 2]; 2] {
        [[self.dchi2_da, self.dchi2_db], [self.dchim2_da, self.dchim2_db]]
    }

    pub fn determinant(&self) -> Complex {
        self.dchi2_da * self.dchim2_db - self.dchim2_da * self.dchi2_db
    }
}

/// `|det ∂χ/∂(a,b) − (−28πi)|`.
pub fn legendre_residual(pd: &PeriodData) -> f64 {
    (pd.determinant() - LEGENDRE_DETERMINANT).norm()
}
