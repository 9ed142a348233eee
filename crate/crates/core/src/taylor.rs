//! Building blocks for fixed-order Taylor-series integration of scalar
//! complex ODEs along straight segments.

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::Complex;

/// Step-size policy shared by the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Number of Taylor coefficients beyond the constant term.
    pub order: usize,
    /// Local error target, relative to `max(1, |y|)`.
    pub tol: f64,
    /// Upper bound on `h · stiffness`.
    pub stability: f64,
    /// Steps shorter than this abort the integration.
    pub min_step: f64,
}

impl StepControl {
    pub fn new(order: usize, tol: f64) -> Self {
        StepControl { order, tol, stability: 8.0, min_step: 1e-13 }
    }

    /// Step length from the last two coefficients (Jorba–Zou rule), capped by
    /// the stability bound.
    pub fn step(&self, coeffs: &[Complex], stiffness: f64) -> f64 {
        let p = coeffs.len() - 1;
        let scale = self.tol * coeffs[0].norm().max(1.0);
        let mut h = f64::INFINITY;
        for n in [p - 1, p] {
            let m = coeffs[n].norm();
            if m > 0.0 {
                h = h.min((scale / m).powf(1.0 / n as f64));
            }
        }
        h *= 0.9;
        if stiffness > 0.0 {
            h = h.min(self.stability / stiffness);
        }
        h
    }
}

/// `Σ a_j b_{n−j}` for `j = 0..=n`.
#[inline]
pub fn cauchy(a: &[Complex], b: &[Complex], n: usize) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for j in 0..=n {
        acc += a[j] * b[n - j];
    }
    acc
}

/// Value of the series at offset `dz`.
pub fn horner(coeffs: &[Complex], dz: Complex) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * dz + c;
    }
    acc
}

/// Derivative of the series at offset `dz`.
pub fn horner_derivative(coeffs: &[Complex], dz: Complex) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (n, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * dz + c * n as f64;
    }
    acc
}

/// Arc-length bookkeeping along a straight segment.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    start: Complex,
    dir: Complex,
    len: f64,
    pos: f64,
}

impl Segment {
    pub fn new(start: Complex, end: Complex) -> Self {
        let d = end - start;
        let len = d.norm();
        let dir = if len > 0.0 { d / len } else { Complex::new(1.0, 0.0) };
        Segment { start, dir, len, pos: 0.0 }
    }

    pub fn done(&self) -> bool {
        self.pos >= self.len
    }

    pub fn remaining(&self) -> f64 {
        (self.len - self.pos).max(0.0)
    }

    pub fn point(&self) -> Complex {
        if self.done() {
            self.start + self.dir * self.len
        } else {
            self.start + self.dir * self.pos
        }
    }

    pub fn dir(&self) -> Complex {
        self.dir
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn position(&self) -> f64 {
        self.pos
    }

    /// Advances by at most `h`, snapping to the endpoint; returns the complex
    /// increment.
    pub fn advance(&mut self, h: f64) -> Complex {
        let h = if h >= self.remaining() { self.remaining() } else { h };
        self.pos = if h >= self.len - self.pos { self.len } else { self.pos + h };
        self.dir * h
    }

    /// Moves to arc length `pos` (clamped), returning the increment.
    pub fn jump_to(&mut self, pos: f64) -> Complex {
        let target = pos.clamp(self.pos, self.len);
        let dz = self.dir * (target - self.pos);
        self.pos = target;
        dz
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn exponential_series() {
        // y' = y, y(0) = 1
        let mut coeffs = alloc::vec![c(1.0, 0.0)];
        for n in 0..20 {
            let next = coeffs[n] / (n as f64 + 1.0);
            coeffs.push(next);
        }
        let v = horner(&coeffs, c(0.5, 0.0));
        assert!((v.re - 0.5f64.exp()).abs() < 1e-15);
        let d = horner_derivative(&coeffs, c(0.5, 0.0));
        assert!((d.re - 0.5f64.exp()).abs() < 1e-14);
        let h = StepControl::new(20, 1e-12).step(&coeffs, 0.0);
        assert!(h > 0.5 && h < 5.0);
    }

    #[test]
    fn segment_snaps_to_end() {
        let mut s = Segment::new(c(0.0, 0.0), c(3.0, 4.0));
        assert_eq!(s.len(), 5.0);
        s.advance(2.0);
        assert!((s.point() - c(1.2, 1.6)).norm() < 1e-15);
        s.advance(10.0);
        assert!(s.done());
        assert_eq!(s.point(), c(3.0, 4.0));
    }
}
