//! Germs of polyhomogeneous symbols `Σ c(z) x^{α(z)}` on `[1, ∞)`, the finite
//! part at infinity, and the Euler–Maclaurin summation operators.

mod coefficient;
mod summation;
#[allow(clippy::module_inception)]
mod symbol;

pub use coefficient::{zeta_at_nonpositive, zeta_value, SpecialFactor, ZetaCoefficient};
pub use summation::{
    bernoulli_piece, boundary_piece, constant_piece, cutoff_integral, cutoff_sum, euler_maclaurin, falling_factorial,
    partial_sum_oracle, primitive_piece, SumOperator,
};
pub use symbol::{admissible, independent, SymbolGerm, Tail};

#[cfg(test)]
mod tests;
