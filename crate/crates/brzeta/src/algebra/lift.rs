use rug::Rational;

use super::{Forest, LinComb, Tree, Word};
use crate::Result;

/// A target for operator lifts: an algebra with an operator `P` and an
/// embedding of decorations.
pub trait OperatedAlgebra<D> {
    type Elem: Clone;

    fn unit(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, r: &Rational) -> Result<Self::Elem>;
    fn embed(&self, d: &D) -> Result<Self::Elem>;
    /// The operator `P`.
    fn apply(&self, x: &Self::Elem) -> Result<Self::Elem>;
}

/// `P̂^W(1) = 1`, `P̂^W(ωw) = P(ω • P̂^W(w))`.
pub fn word_lift<D, A: OperatedAlgebra<D>>(alg: &A, w: &Word<D>) -> Result<A::Elem> {
    let mut acc = alg.unit();
    for d in w.0.iter().rev() {
        let e = alg.embed(d)?;
        acc = alg.apply(&alg.mul(&e, &acc)?)?;
    }
    Ok(acc)
}

/// Linear extension of [`word_lift`].
pub fn word_lift_combination<D: Ord + Clone, A: OperatedAlgebra<D>>(alg: &A, c: &LinComb<Word<D>>) -> Result<A::Elem> {
    let mut acc: Option<A::Elem> = None;
    for (w, r) in c.iter() {
        let v = alg.scale(&word_lift(alg, w)?, r)?;
        acc = Some(match acc {
            None => v,
            Some(a) => alg.add(&a, &v)?,
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => alg.scale(&alg.unit(), &Rational::new()),
    }
}

/// `P̂(∅) = 1`, `P̂(F₁F₂) = P̂(F₁)•P̂(F₂)`, `P̂(B₊^ω F) = P(ω • P̂(F))`.
pub fn branched_lift<D, A>(alg: &A, f: &Forest<D>) -> Result<A::Elem>
where
    D: Clone + Ord + std::fmt::Debug,
    A: OperatedAlgebra<D>,
{
    let mut acc = alg.unit();
    for t in f.trees() {
        acc = alg.mul(&acc, &tree_lift(alg, t)?)?;
    }
    Ok(acc)
}

fn tree_lift<D, A>(alg: &A, t: &Tree<D>) -> Result<A::Elem>
where
    D: Clone + Ord + std::fmt::Debug,
    A: OperatedAlgebra<D>,
{
    let below = branched_lift(alg, &t.children_forest())?;
    let e = alg.embed(&t.decoration)?;
    alg.apply(&alg.mul(&e, &below)?)
}
