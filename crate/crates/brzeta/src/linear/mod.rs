//! Linear and affine forms on `z_1, z_2, ...`, inner products, subspaces.

mod form;
mod inner;
pub mod matrix;
mod subspace;

pub use form::{AffineForm, LinearForm, Variable};
pub use inner::{inner, InnerProduct};
pub use subspace::{orthogonal_complement, spans_orthogonal, Subspace};
