use std::collections::BTreeSet;

use rug::Rational;

use super::exact::flatten_for;
use crate::algebra::{EsLetter, Forest};
use crate::linear::LinearForm;
use crate::symbol::SumOperator;
use crate::Result;

/// Hyperplanes that may carry poles of `ζ^λ(F)`.
///
/// Every word of the flattening contributes `Σ z` over the labels of each
/// prefix whose weight meets the multiple zeta singularity criterion: a first
/// letter of weight 1, or a longer prefix of length `j` with integer total
/// weight at most `j`.
pub fn candidate_poles(f: &Forest<EsLetter>, op: SumOperator) -> Result<Vec<LinearForm>> {
    let words = flatten_for(f, op)?;
    let mut out = BTreeSet::new();
    for (w, _) in words.iter() {
        let mut labels: Vec<u32> = Vec::new();
        let mut weight = Rational::new();
        for (i, d) in w.letters().iter().enumerate() {
            labels.extend(d.labels.iter().copied());
            weight += &d.weight;
            let j = i + 1;
            let hit = if j == 1 { weight == 1 } else { *weight.denom() == 1 && weight <= j as i64 };
            if hit && !labels.is_empty() {
                out.insert(LinearForm::sum_of(&labels).normalized().1);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Bound on the pole order of the germ: the depth of the forest.
pub fn pole_order_bound(f: &Forest<EsLetter>) -> u32 {
    f.trees().iter().map(|t| t.depth() as u32).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tree;

    #[test]
    fn examples() {
        let one: Forest<EsLetter> = Tree::leaf(EsLetter::int(1, 1)).into();
        assert_eq!(candidate_poles(&one, SumOperator::Strict).unwrap(), vec![LinearForm::var(1)]);
        let two: Forest<EsLetter> = Tree::leaf(EsLetter::int(1, 2)).into();
        assert!(candidate_poles(&two, SumOperator::Strict).unwrap().is_empty());
        let ladder: Forest<EsLetter> = Tree::ladder(&[EsLetter::int(1, 0), EsLetter::int(2, 0)]).unwrap().into();
        assert_eq!(candidate_poles(&ladder, SumOperator::Strict).unwrap(), vec![LinearForm::sum_of(&[1, 2])]);
    }
}
