//! Numerical verification of Ramanujan-type master theorems for the
//! Hermitian symmetric spaces SL(2,R)/SO(2) and SU(1,n)/S(U(1)×U(n)),
//! together with the scalar classical case.
//!
//! The crate is layered bottom-up:
//!
//! * [`special_fn`]: complex log-gamma, Gauss ₂F₁, Jacobi functions.
//! * [`quad`]: adaptive Gauss–Kronrod, vertical lines, rectangles, residues
//!   and certified series summation.
//! * [`su2`]: polynomial representations of SU(2) extended to SL(2,C).
//! * [`sl2`] and [`master_sl2`]: τ_n-spherical functions, spectral data and
//!   the SL(2,R) master theorem.
//! * [`su1n`] and [`master_su1n`]: χ_l-spherical functions, the
//!   c-function calculus and the SU(1,n) master theorem.
//! * [`hardy`]: the Hardy-class input functions shared by all master
//!   theorems.
//!
//! Grids of independent evaluations go through [`par`], which uses rayon
//! when the `parallel` feature is on and a plain iterator otherwise.

pub mod error;
pub mod hardy;
pub mod master_sl2;
pub mod master_su1n;
pub mod par;
pub mod profile;
pub mod quad;
pub mod sl2;
pub mod special_fn;
pub mod su1n;
pub mod su2;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Cx = num_complex::Complex64;

/// Shorthand constructor for a complex number.
#[inline]
pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}
