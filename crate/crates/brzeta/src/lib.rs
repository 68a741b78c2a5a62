//! Regularised and renormalised branched zeta values.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: exact rationals, Bernoulli numbers, formal constants and
//!   their numeric evaluation, rational reconstruction.
//! * [`linear`]: linear and affine forms on the coordinates `z_1, z_2, ...`,
//!   inner products and orthogonality.
//! * [`algebra`]: locality algebras, words, rooted forests, quasi-shuffles,
//!   flattening and the word/branched lifts of operators.
//! * [`germ`]: meromorphic germs with linear poles and the projections `π±`.
//! * [`symbol`]: polyhomogeneous symbols, finite parts and Euler–Maclaurin
//!   summation.
//! * [`zeta`]: the branched zeta pipeline (exact and numeric).
//! * [`cli`]: the command line front end.

pub mod algebra;
pub mod checks;
pub mod cli;
pub mod error;
pub mod germ;
pub mod linear;
pub mod numerics;
pub mod symbol;
pub mod zeta;

pub use error::{Error, Result};
pub use rug::{Float, Integer, Rational};
