//! The Bohr–Sommerfeld–Boutroux system `χ₂ = iπ(2n−1)`, `χ₋₂ = iπ(2m−1)`.
//!
//! Solutions for a primitive pair `(n, m)` generate a q-sequence by the
//! exact rescaling `(a, b) ↦ ((2k+1)^{4/5} a, (2k+1)^{6/5} b)`, under which
//! both periods are multiplied by `2k + 1`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::linalg::{norm2, solve2};
use crate::periods::{PeriodConfig, PeriodData};
use crate::potential::Potential;
use crate::stokes::{trace_stokes_lines_with, TraceConfig};
use crate::{Complex, Error, Result, I};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A positive rational `p/r` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio {
    pub p: u64,
    pub r: u64,
}

impl Ratio {
    pub fn new(p: u64, r: u64) -> Result<Self> {
        if p == 0 || r == 0 {
            return Err(Error::InvalidParameter("ratio terms must be positive"));
        }
        let g = gcd(p, r);
        Ok(Ratio { p: p / g, r: r / g })
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.r as f64
    }

    /// The primitive quantum pair with `(2n−1)/(2m−1) = p/r`; both terms
    /// must be odd.
    pub fn quantum_pair(&self) -> Result<QuantumPair> {
        if self.p.is_multiple_of(2) || self.r.is_multiple_of(2) {
            return Err(Error::InvalidParameter("q must be a ratio of odd integers"));
        }
        QuantumPair::new(self.p.div_ceil(2) as i64, self.r.div_ceil(2) as i64)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.r)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = Error::InvalidParameter("expected a ratio \"p/r\" of positive integers");
        let (p, r) = match s.split_once('/') {
            Some((p, r)) => (p.trim(), r.trim()),
            None => (s.trim(), "1"),
        };
        let p = p.parse::<u64>().map_err(|_| bad.clone())?;
        let r = r.parse::<u64>().map_err(|_| bad)?;
        Ratio::new(p, r)
    }
}

/// Quantum numbers `(n, m)`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumPair {
    pub n: u32,
    pub m: u32,
}

impl QuantumPair {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        if n < 1 || m < 1 || n > u32::MAX as i64 / 4 || m > u32::MAX as i64 / 4 {
            return Err(Error::InvalidQuantumNumbers { n, m });
        }
        Ok(QuantumPair { n: n as u32, m: m as u32 })
    }

    /// `(2n − 1, 2m − 1)`.
    pub fn odd(&self) -> (u64, u64) {
        (2 * self.n as u64 - 1, 2 * self.m as u64 - 1)
    }

    pub fn is_primitive(&self) -> bool {
        let (p, r) = self.odd();
        gcd(p, r) == 1
    }

    /// `q = (2n − 1)/(2m − 1)` in lowest terms.
    pub fn q(&self) -> Ratio {
        let (p, r) = self.odd();
        Ratio::new(p, r).expect("odd numbers are positive")
    }

    /// The descendant index: `(2k + 1) = gcd(2n − 1, 2m − 1)`.
    pub fn descendant_index(&self) -> u32 {
        let (p, r) = self.odd();
        ((gcd(p, r) - 1) / 2) as u32
    }

    /// The pair whose odd numbers are those of `self` times `2k + 1`.
    pub fn scaled(&self, k: u32) -> QuantumPair {
        let f = 2 * k as u64 + 1;
        let (p, r) = self.odd();
        QuantumPair { n: (p * f).div_ceil(2) as u32, m: (r * f).div_ceil(2) as u32 }
    }

    /// The primitive pair with the same `q`.
    pub fn primitive(&self) -> QuantumPair {
        self.q().quantum_pair().expect("q of a quantum pair has odd terms")
    }

    /// Right-hand sides `(iπ(2n−1), iπ(2m−1))`.
    pub fn targets(&self) -> [Complex; 2] {
        let (p, r) = self.odd();
        [I * (PI * p as f64), I * (PI * r as f64)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsbConfig {
    pub tol_newton: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Seed for `(n, m) = (1, 1)`.
    pub anchor: Potential,
    /// Minimum number of continuation steps from the `(1, 1)` solution.
    pub homotopy_steps: usize,
    /// Check that every returned solution has a "320" Stokes graph.
    pub verify_320: bool,
    pub periods: PeriodConfig,
    pub trace: TraceConfig,
}

impl Default for BsbConfig {
    fn default() -> Self {
        BsbConfig {
            tol_newton: 1e-10,
            max_iterations: 50,
            max_halvings: 30,
            anchor: Potential::real(-2.34, -0.064),
            homotopy_steps: 20,
            verify_320: true,
            periods: PeriodConfig::default(),
            trace: TraceConfig::default(),
        }
    }
}

/// A solution of the system for `quantum`, with `q` and `k` read off from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsbSolution {
    pub point: Potential,
    pub quantum: QuantumPair,
    pub residual: f64,
    pub q: Ratio,
    pub k: u32,
}

impl BsbSolution {
    fn new(point: Potential, quantum: QuantumPair, residual: f64) -> Self {
        BsbSolution { point, quantum, residual, q: quantum.q(), k: quantum.descendant_index() }
    }
}

fn period_residual(chi: [Complex; 2], targets: [Complex; 2]) -> f64 {
    (chi[0] - targets[0]).norm() + (chi[1] - targets[1]).norm()
}

/// `|χ₂ − t₂| + |χ₋₂ − t₋₂|` at `point`.
pub fn residual_at(point: &Potential, targets: [Complex; 2], cfg: &PeriodConfig) -> Result<f64> {
    Ok(period_residual(PeriodData::at(point, cfg)?.chi(), targets))
}

/// Damped Newton iteration for `(χ₂, χ₋₂)(a, b) = targets`.
pub fn solve_period_targets(targets: [Complex; 2], seed: Potential, cfg: &BsbConfig) -> Result<(Potential, f64)> {
    let mut x = seed;
    let mut pd = PeriodData::at(&x, &cfg.periods)?;
    let f = |pd: &PeriodData| [pd.chi2 - targets[0], pd.chi_m2 - targets[1]];
    let mut fx = f(&pd);
    for it in 0..cfg.max_iterations {
        let res = period_residual(pd.chi(), targets);
        if res < cfg.tol_newton {
            return Ok((x, res));
        }
        let step = solve2(pd.jacobian(), [-fx[0], -fx[1]])
            .ok_or(Error::NewtonDiverged { iterations: it, residual: res })?;
        let norm = norm2(fx);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial = Potential::new(x.a + step[0] * t, x.b + step[1] * t);
            if let Ok(tpd) = PeriodData::at(&trial, &cfg.periods) {
                let tf = f(&tpd);
                if norm2(tf) < (1.0 - 1e-4 * t) * norm || period_residual(tpd.chi(), targets) < cfg.tol_newton {
                    accepted = Some((trial, tpd, tf));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((nx, npd, nf)) => {
                x = nx;
                pd = npd;
                fx = nf;
            }
            None => return Err(Error::NewtonDiverged { iterations: it, residual: res }),
        }
    }
    let res = period_residual(pd.chi(), targets);
    if res < cfg.tol_newton {
        Ok((x, res))
    } else {
        Err(Error::NewtonDiverged { iterations: cfg.max_iterations, residual: res })
    }
}

fn verify_320(point: &Potential, cfg: &BsbConfig) -> Result<()> {
    if !cfg.verify_320 {
        return Ok(());
    }
    let g = trace_stokes_lines_with(point, &cfg.trace)?;
    if g.is_320() && g.inner_vertex() == Some(crate::TurningPoints::INNER) {
        Ok(())
    } else {
        let mut label = g.topology_label.clone();
        if g.is_320() {
            label.push_str(" (inner vertex not first in canonical order)");
        }
        Err(Error::NotType320 { label })
    }
}

/// Solves the system for `quantum`.
///
/// Without a seed, `(1, 1)` starts from the configured anchor and every
/// other pair is reached by continuation in the right-hand sides from the
/// `(1, 1)` solution.
pub fn solve_bsb(quantum: QuantumPair, seed: Option<Potential>, cfg: &BsbConfig) -> Result<BsbSolution> {
    let targets = quantum.targets();
    let (point, residual) = match seed {
        Some(s) => solve_period_targets(targets, s, cfg)?,
        None => {
            let base = QuantumPair { n: 1, m: 1 };
            let (mut x, mut res) = solve_period_targets(base.targets(), cfg.anchor, cfg)?;
            if quantum != base {
                let (p, r) = quantum.odd();
                let steps = cfg.homotopy_steps.max(5 * p.max(r) as usize);
                let t0 = base.targets();
                for j in 1..=steps {
                    let s = j as f64 / steps as f64;
                    let tj = [t0[0] + (targets[0] - t0[0]) * s, t0[1] + (targets[1] - t0[1]) * s];
                    let out = solve_period_targets(tj, x, cfg)?;
                    x = out.0;
                    res = out.1;
                }
            }
            (x, res)
        }
    };
    verify_320(&point, cfg)?;
    Ok(BsbSolution::new(point, quantum, residual))
}

/// The `k`-th member of the q-sequence of a primitive solution.
pub fn descendant(primitive: &BsbSolution, k: u32, cfg: &PeriodConfig) -> Result<BsbSolution> {
    if primitive.k != 0 || !primitive.quantum.is_primitive() {
        return Err(Error::NotPrimitive { n: primitive.quantum.n, m: primitive.quantum.m });
    }
    if k == 0 {
        return Ok(*primitive);
    }
    let x = ((2 * k + 1) as f64).powf(0.4);
    let point = primitive.point.scaled(x);
    let quantum = primitive.quantum.scaled(k);
    let residual = residual_at(&point, quantum.targets(), cfg)?;
    Ok(BsbSolution::new(point, quantum, residual))
}

/// `[solve_bsb(quantum), descendant(·, 1), …, descendant(·, big_k)]`.
pub fn q_sequence(quantum: QuantumPair, big_k: u32, cfg: &BsbConfig) -> Result<Vec<BsbSolution>> {
    if !quantum.is_primitive() {
        return Err(Error::NotPrimitive { n: quantum.n, m: quantum.m });
    }
    let first = solve_bsb(quantum, None, cfg)?;
    let mut out = Vec::with_capacity(big_k as usize + 1);
    out.push(first);
    for k in 1..=big_k {
        let d = descendant(&first, k, &cfg.periods)?;
        verify_320(&d.point, cfg)?;
        out.push(d);
    }
    Ok(out)
}

/// `(ũ₂ − 1, ũ₋₂ − 1)` with `ũ±₂ = −exp(χ±₂)`.
pub fn tilde_u(point: &Potential, cfg: &PeriodConfig) -> Result<(Complex, Complex)> {
    let pd = PeriodData::at(point, cfg)?;
    Ok((-pd.chi2.exp() - 1.0, -pd.chi_m2.exp() - 1.0))
}

/// First-order data around the descendants of a primitive solution, and the
/// rescaled offsets `z = (2k+1)^α (a − a_k)`, `w = (2k+1)^β (b − b_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationFrame {
    /// `∂χ₂/∂a` at the primitive.
    pub c2: Complex,
    pub c_m2: Complex,
    /// `∂χ₂/∂b` at the primitive.
    pub d2: Complex,
    pub d_m2: Complex,
    pub alpha: f64,
    pub beta: f64,
    pub z: Complex,
    pub w: Complex,
}

impl LinearizationFrame {
    pub fn at_primitive(primitive: &BsbSolution, alpha: f64, beta: f64, cfg: &PeriodConfig) -> Result<Self> {
        let pd = PeriodData::at(&primitive.point, cfg)?;
        Ok(LinearizationFrame {
            c2: pd.dchi2_da,
            c_m2: pd.dchim2_da,
            d2: pd.dchi2_db,
            d_m2: pd.dchim2_db,
            alpha,
            beta,
            z: Complex::new(0.0, 0.0),
            w: Complex::new(0.0, 0.0),
        })
    }

    pub fn with_offsets(mut self, z: Complex, w: Complex) -> Self {
        self.z = z;
        self.w = w;
        self
    }

    /// Whether the exponents lie in the ranges used by the disc statements.
    pub fn exponents_in_range(&self) -> bool {
        self.alpha > 0.2 && self.alpha < 1.2 && self.beta > -0.2 && self.beta < 0.8
    }

    /// The point `(a_k + (2k+1)^{−α} z, b_k + (2k+1)^{−β} w)` around the
    /// `k`-th descendant of `primitive`.
    pub fn point(&self, primitive: &Potential, k: u32) -> Potential {
        let f = (2 * k + 1) as f64;
        let base = primitive.scaled(f.powf(0.4));
        Potential::new(base.a + self.z * f.powf(-self.alpha), base.b + self.w * f.powf(-self.beta))
    }
}

/// First-order predictions of `(ũ₂, ũ₋₂)` at [`LinearizationFrame::point`].
pub fn linearized_tilde_u(frame: &LinearizationFrame, k: u32) -> (Complex, Complex) {
    let f = (2 * k + 1) as f64;
    let sa = f.powf(0.2 - frame.alpha);
    let sb = f.powf(-0.2 - frame.beta);
    let one = Complex::new(1.0, 0.0);
    (
        one + frame.c2 * sa * frame.z + frame.d2 * sb * frame.w,
        one + frame.c_m2 * sa * frame.z + frame.d_m2 * sb * frame.w,
    )
}

impl fmt::Display for QuantumPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

impl QuantumPair {
    /// Short form used in labels, e.g. `"3,1"`.
    pub fn label(&self) -> alloc::string::String {
        let mut s = self.n.to_string();
        s.push(',');
        s.push_str(&self.m.to_string());
        s
    }
}
