//! Meromorphic germs at zero with linear poles: sums of
//! `P(z) / (Π L_i^{m_i} · Π (1 + ℓ_j)^{n_j})`, the holomorphic/polar
//! splitting for an inner product `Q`, and evaluation.

mod germ;
mod poly;
mod project;
mod reduce;
mod term;

pub use germ::{independent, Germ};
pub use poly::{Monomial, Poly};
pub use project::{decompose, project_minus, project_plus, project_plus_through, renormalised_value, Decomposition};
pub use reduce::partial_fraction_reduce;
pub use term::{GermTerm, Unknown};

use crate::algebra::LocalityStructure;
use crate::linear::InnerProduct;

/// Germs under `Q`-orthogonality, for the law checker.
#[derive(Clone, Debug, Default)]
pub struct GermLocality {
    pub q: InnerProduct,
}

impl LocalityStructure for GermLocality {
    type Elem = Germ;

    fn independent(&self, a: &Germ, b: &Germ) -> bool {
        independent(&self.q, a, b)
    }

    fn product(&self, a: &Germ, b: &Germ) -> Option<Germ> {
        Some(a.mul(b))
    }

    fn equal(&self, a: &Germ, b: &Germ) -> bool {
        a.equals(b).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests;
