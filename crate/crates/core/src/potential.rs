//! The cubic potential `V(λ; a, b) = 4λ³ − 2aλ − 28b` and its turning points.

use core::f64::consts::PI;

use crate::{c, Complex, Error, Result};

/// Relative separation below which two turning points count as coincident.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Coefficients `(a, b)` of the cubic potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub a: Complex,
    pub b: Complex,
}

/// A point of the `(a, b)` parameter plane.
pub type ParamPoint = Potential;

impl Potential {
    pub const fn new(a: Complex, b: Complex) -> Self {
        Potential { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        Potential::new(c(a, 0.0), c(b, 0.0))
    }

    #[inline]
    pub fn eval(&self, lambda: Complex) -> Complex {
        4.0 * lambda * lambda * lambda - 2.0 * self.a * lambda - 28.0 * self.b
    }

    #[inline]
    pub fn derivative(&self, lambda: Complex) -> Complex {
        12.0 * lambda * lambda - 2.0 * self.a
    }

    /// Taylor coefficients of `V` about `lambda`: `V(lambda + h) = Σ v[n] hⁿ`.
    #[inline]
    pub fn taylor(&self, lambda: Complex) -> [Complex; 4] {
        [self.eval(lambda), self.derivative(lambda), 12.0 * lambda, c(4.0, 0.0)]
    }

    /// The point `(x²a, x³b)`; the potential rescales as `V(xλ) = x³ V(λ)`.
    pub fn scaled(&self, x: f64) -> Self {
        Potential::new(self.a * (x * x), self.b * (x * x * x))
    }

    /// Distance to another parameter point (max of the two coordinate moduli).
    pub fn distance(&self, other: &Potential) -> f64 {
        (self.a - other.a).norm().max((self.b - other.b).norm())
    }

    pub fn turning_points(&self) -> Result<TurningPoints> {
        TurningPoints::of(self)
    }
}

/// The three zeros of `V`, in canonical order `[inner, upper, lower]`.
///
/// The inner vertex is the root with the smallest real part (ties broken by
/// the smaller imaginary part); of the other two, `upper` has the larger
/// imaginary part. In the Boutroux configuration the inner vertex is the one
/// joined to both others by Stokes lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    roots: [Complex; 3],
    discriminant: Complex,
}

impl TurningPoints {
    pub const INNER: usize = 0;
    pub const UPPER: usize = 1;
    pub const LOWER: usize = 2;

    pub fn of(pot: &Potential) -> Result<Self> {
        let mut roots = cubic_roots(pot);
        for r in roots.iter_mut() {
            polish(pot, r);
        }
        let sep = min_separation(&roots);
        let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        if !(sep >= DEGENERACY_THRESHOLD * (1.0 + scale)) {
            return Err(Error::DegenerateTurningPoints { separation: sep });
        }
        Ok(TurningPoints {
            roots: canonical_order(roots),
            discriminant: discriminant(pot),
        })
    }

    pub fn roots(&self) -> [Complex; 3] {
        self.roots
    }

    pub fn inner(&self) -> Complex {
        self.roots[Self::INNER]
    }

    pub fn upper(&self) -> Complex {
        self.roots[Self::UPPER]
    }

    pub fn lower(&self) -> Complex {
        self.roots[Self::LOWER]
    }

    pub fn discriminant(&self) -> Complex {
        self.discriminant
    }

    pub fn min_separation(&self) -> f64 {
        min_separation(&self.roots)
    }

    /// Largest root modulus.
    pub fn scale(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Distance from `lambda` to the nearest turning point, and its index.
    pub fn nearest(&self, lambda: Complex) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, r) in self.roots.iter().enumerate() {
            let d = (lambda - r).norm();
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

/// Discriminant of `4λ³ − 2aλ − 28b`.
pub fn discriminant(pot: &Potential) -> Complex {
    128.0 * pot.a * pot.a * pot.a - 338_688.0 * pot.b * pot.b
}

fn min_separation(r: &[Complex; 3]) -> f64 {
    (r[0] - r[1]).norm().min((r[0] - r[2]).norm()).min((r[1] - r[2]).norm())
}

// Cardano on the depressed cubic λ³ + pλ + q with p = −a/2, q = −7b.
fn cubic_roots(pot: &Potential) -> [Complex; 3] {
    let p = -pot.a / 2.0;
    let q = -7.0 * pot.b;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    if u.norm() == 0.0 {
        return [Complex::new(0.0, 0.0); 3];
    }
    let cr = u.powf(1.0 / 3.0);
    let omega = Complex::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [Complex::new(0.0, 0.0); 3];
    let mut w = Complex::new(1.0, 0.0);
    for slot in out.iter_mut() {
        let t = w * cr;
        *slot = t - p / (3.0 * t);
        w *= omega;
    }
    out
}

fn polish(pot: &Potential, root: &mut Complex) {
    for _ in 0..4 {
        let d = pot.derivative(*root);
        if d.norm() == 0.0 {
            return;
        }
        let step = pot.eval(*root) / d;
        if !step.is_finite() {
            return;
        }
        *root -= step;
        if step.norm() <= 4.0 * f64::EPSILON * root.norm().max(1.0) {
            return;
        }
    }
}

fn canonical_order(mut r: [Complex; 3]) -> [Complex; 3] {
    let key = |z: &Complex| (z.re, z.im);
    let mut inner = 0;
    for i in 1..3 {
        if key(&r[i]) < key(&r[inner]) {
            inner = i;
        }
    }
    r.swap(0, inner);
    if (r[2].im, r[2].re) > (r[1].im, r[1].re) {
        r.swap(1, 2);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vieta_at_anchor() {
        let pot = Potential::real(-2.34, -0.064);
        let tp = pot.turning_points().unwrap();
        let r = tp.roots();
        let sum = r[0] + r[1] + r[2];
        let prod = r[0] * r[1] * r[2];
        let pairs = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        assert!(sum.norm() < 1e-13);
        assert!((prod - 7.0 * pot.b).norm() < 1e-13);
        assert!((pairs + pot.a / 2.0).norm() < 1e-13);
        assert!(tp.inner().im.abs() < 1e-14 && tp.inner().re < 0.0);
        assert!(tp.upper().im > 0.0 && tp.lower().im < 0.0);
    }

    #[test]
    fn triple_root_is_degenerate() {
        let err = Potential::real(0.0, 0.0).turning_points().unwrap_err();
        assert_eq!(err.name(), "DegenerateTurningPoints");
    }

    #[test]
    fn cube_roots_of_unity() {
        let tp = Potential::real(0.0, 1.0 / 7.0).turning_points().unwrap();
        for k in 0..3 {
            let w = Complex::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(tp.roots().iter().any(|r| (r - w).norm() < 1e-13));
        }
        assert!((tp.discriminant() - discriminant(&Potential::real(0.0, 1.0 / 7.0))).norm() == 0.0);
    }

    #[test]
    fn double_root_is_degenerate() {
        // 4λ³ − 2aλ − 28b with a double root at 1: 4(λ−1)²(λ+2) = 4λ³ − 12λ + 8.
        let err = Potential::real(6.0, -8.0 / 28.0).turning_points().unwrap_err();
        assert_eq!(err.name(), "DegenerateTurningPoints");
    }
}
