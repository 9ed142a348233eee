//! Poles of the tritronquée solution of Painlevé I.
//!
//! The crate works on the cubic oscillator `ψ'' = V(λ; a, b) ψ` with
//! `V(λ; a, b) = 4λ³ − 2aλ − 28b` and ties three computations together:
//!
//! * [`periods`]: cycle periods `χ±₂` of `√V dλ` on the elliptic curve
//!   `μ² = V` and their derivatives in `(a, b)`;
//! * [`bsb`]: Newton solves of the Bohr–Sommerfeld–Boutroux system
//!   `χ₂ = iπ(2n−1)`, `χ₋₂ = iπ(2m−1)` and the rescaled q-sequences;
//! * [`monodromy`]: the exact linear-dependence conditions on the
//!   recessive solutions `ψ_k`, whose zeros in `(a, b)` are the poles;
//! * [`painleve`]: direct integration of `y'' = 6y² − z` through its
//!   poles, used as an independent check.
//!
//! [`stokes`] traces the Stokes complex of `V` and recognises the
//! configuration in which the periods are defined.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(rust_2018_idioms)]
// `!(x > tol)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bsb;
pub mod error;
mod linalg;
pub mod monodromy;
pub mod painleve;
pub mod periods;
pub mod potential;
pub mod quadrature;
pub mod stokes;
pub mod taylor;

pub use error::{Error, Result};
pub use potential::{ParamPoint, Potential, TurningPoints};

/// Double-precision complex number used throughout the crate.
pub type Complex = num_complex::Complex64;

pub(crate) const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
