//! Gauss–Chebyshev rules on `[-1, 1]` with node-doubling error control.
//!
//! Period integrands on a segment between two turning points behave like
//! `√(1 − t²)` (for `√V`) or `1/√(1 − t²)` (for its parameter derivatives)
//! at the endpoints, so the Chebyshev weights absorb the singularity and the
//! remaining factor is analytic.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::{Complex, Error, Result};

/// Weight of the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevKind {
    /// `∫ f(t) / √(1 − t²) dt`
    First,
    /// `∫ f(t) √(1 − t²) dt`
    Second,
}

/// Applies the `n`-node rule of the given kind.
pub fn gauss_chebyshev<F>(kind: ChebyshevKind, n: usize, mut f: F) -> Complex
where
    F: FnMut(f64) -> Complex,
{
    let mut acc = Complex::new(0.0, 0.0);
    match kind {
        ChebyshevKind::First => {
            let w = PI / n as f64;
            for j in 1..=n {
                let t = ((2 * j - 1) as f64 * PI / (2 * n) as f64).cos();
                acc += f(t);
            }
            acc * w
        }
        ChebyshevKind::Second => {
            let step = PI / (n + 1) as f64;
            for j in 1..=n {
                let th = j as f64 * step;
                let s = th.sin();
                acc += f(th.cos()) * (s * s);
            }
            acc * step
        }
    }
}

/// Converged integral together with the last node-doubling change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex,
    pub change: f64,
    pub nodes: usize,
}

/// Doubles the node count from `n0` until two successive rules agree to
/// `tol · max(1, |I|)`.
pub fn integrate<F>(kind: ChebyshevKind, n0: usize, n_max: usize, tol: f64, mut f: F) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex,
{
    let mut n = n0.max(2);
    let mut prev = gauss_chebyshev(kind, n, &mut f);
    loop {
        let n2 = 2 * n;
        let cur = gauss_chebyshev(kind, n2, &mut f);
        let change = (cur - prev).norm();
        if !change.is_finite() {
            return Err(Error::QuadratureNotConverged { change, nodes: n2 });
        }
        if change <= tol * cur.norm().max(1.0) {
            return Ok(Estimate { value: cur, change, nodes: n2 });
        }
        if n2 >= n_max {
            return Err(Error::QuadratureNotConverged { change, nodes: n2 });
        }
        prev = cur;
        n = n2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_area() {
        // ∫ √(1−t²) dt = π/2
        let v = gauss_chebyshev(ChebyshevKind::Second, 5, |_| Complex::new(1.0, 0.0));
        assert!((v.re - PI / 2.0).abs() < 1e-15);
        // ∫ 1/√(1−t²) dt = π, ∫ t²/√(1−t²) dt = π/2
        let v = gauss_chebyshev(ChebyshevKind::First, 4, |t| Complex::new(t * t, 0.0));
        assert!((v.re - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_integrand_converges() {
        // ∫ e^t / √(1−t²) dt = π I₀(1)
        let i0 = 1.266_065_877_752_008_4;
        let est = integrate(ChebyshevKind::First, 4, 1024, 1e-14, |t| Complex::new(t.exp(), 0.0)).unwrap();
        assert!((est.value.re - PI * i0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_reports_failure() {
        let err = integrate(ChebyshevKind::Second, 4, 64, 1e-14, |t| {
            Complex::new(1.0 / (1.0 - t).sqrt(), 0.0)
        })
        .unwrap_err();
        assert_eq!(err.name(), "QuadratureNotConverged");
    }
}
