use std::collections::BTreeSet;

use rug::Rational;

use crate::algebra::{EsLetter, Forest, Tree};
use crate::linear::{AffineForm, LinearForm};
use crate::symbol::SymbolGerm;
use crate::Result;

/// Order `-s + Σ z_ℓ` of the summand attached to a letter.
pub fn letter_order(d: &EsLetter) -> AffineForm {
    let vars: Vec<u32> = d.labels.iter().copied().collect();
    AffineForm::new(LinearForm::sum_of(&vars), Rational::from(-&d.weight))
}

/// The symbol `x^{-s + z_ℓ}`.
pub fn decorate(d: &EsLetter) -> Result<SymbolGerm> {
    SymbolGerm::power(letter_order(d))
}

pub fn tree_vars(t: &Tree<EsLetter>) -> BTreeSet<u32> {
    t.decorations().iter().flat_map(|d| d.labels.iter().copied()).collect()
}

pub fn forest_vars(f: &Forest<EsLetter>) -> BTreeSet<u32> {
    f.decorations().iter().flat_map(|d| d.labels.iter().copied()).collect()
}

/// All weights are integers.
pub fn integer_weights(f: &Forest<EsLetter>) -> bool {
    f.decorations().iter().all(|d| *d.weight.denom() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int;

    #[test]
    fn examples() {
        let o = letter_order(&EsLetter::int(1, 2));
        assert_eq!(o, AffineForm::new(LinearForm::var(1), int(-2)));
        assert_eq!(letter_order(&EsLetter::int(3, 0)), AffineForm::new(LinearForm::var(3), int(0)));
        assert_eq!(letter_order(&EsLetter::int(1, -1)), AffineForm::new(LinearForm::var(1), int(1)));
        assert!(decorate(&EsLetter::int(1, 2)).is_ok());
    }
}
