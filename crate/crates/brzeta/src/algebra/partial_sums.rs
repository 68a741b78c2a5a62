use rug::Rational;

use super::{EsLetter, OperatedAlgebra, SumKind};
use crate::numerics::rat_pow;
use crate::{Error, Result};

/// Functions on `1..=n_max` with pointwise product and the partial-sum
/// operator `P(f)(n) = Σ_{m<n} f(m)` (strict) or `Σ_{m≤n} f(m)` (weak).
///
/// A decoration `(labels, s)` embeds as `n ↦ n^s`, so integer weights give
/// exact rational values.
#[derive(Clone, Debug)]
pub struct PartialSumAlgebra {
    pub n_max: usize,
    pub kind: SumKind,
}

impl PartialSumAlgebra {
    pub fn new(n_max: usize, kind: SumKind) -> Self {
        PartialSumAlgebra { n_max, kind }
    }

    pub fn rb_weight(&self) -> Rational {
        self.kind.rb_weight()
    }

    /// `n ↦ n^e` for an integer exponent.
    pub fn power(&self, e: i64) -> Result<Vec<Rational>> {
        (1..=self.n_max).map(|n| rat_pow(&Rational::from(n as u64), e)).collect()
    }

    pub fn partial_sum(&self, f: &[Rational]) -> Vec<Rational> {
        let mut out = Vec::with_capacity(f.len());
        let mut acc = Rational::new();
        for x in f {
            match self.kind {
                SumKind::Weak => {
                    acc += x;
                    out.push(acc.clone());
                }
                SumKind::Strict => {
                    out.push(acc.clone());
                    acc += x;
                }
            }
        }
        out
    }
}

impl OperatedAlgebra<EsLetter> for PartialSumAlgebra {
    type Elem = Vec<Rational>;

    fn unit(&self) -> Vec<Rational> {
        vec![Rational::from(1); self.n_max]
    }

    fn mul(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Result<Vec<Rational>> {
        Ok(a.iter().zip(b).map(|(x, y)| Rational::from(x * y)).collect())
    }

    fn add(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Result<Vec<Rational>> {
        Ok(a.iter().zip(b).map(|(x, y)| Rational::from(x + y)).collect())
    }

    fn scale(&self, a: &Vec<Rational>, r: &Rational) -> Result<Vec<Rational>> {
        Ok(a.iter().map(|x| Rational::from(x * r)).collect())
    }

    fn embed(&self, d: &EsLetter) -> Result<Vec<Rational>> {
        let e = crate::numerics::as_i64(&d.weight)
            .ok_or_else(|| Error::Unsupported("partial-sum algebra needs integer weights".into()))?;
        self.power(e)
    }

    fn apply(&self, x: &Vec<Rational>) -> Result<Vec<Rational>> {
        Ok(self.partial_sum(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{branched_lift, word_lift, Forest, Tree, Word};

    fn id(l: u32) -> EsLetter {
        EsLetter::int(l, 1)
    }

    fn one(l: u32) -> EsLetter {
        EsLetter::int(l, 0)
    }

    #[test]
    fn documented_word_lifts() {
        let alg = PartialSumAlgebra::new(4, SumKind::Strict);
        assert_eq!(word_lift(&alg, &Word(vec![one(1)])).unwrap()[3], 3);
        assert_eq!(word_lift(&alg, &Word(vec![id(1), id(2)])).unwrap()[3], 11);
        assert_eq!(word_lift(&alg, &Word(vec![one(1), one(2)])).unwrap()[3], 3);
    }

    #[test]
    fn documented_branched_lifts() {
        let alg = PartialSumAlgebra::new(4, SumKind::Strict);
        assert_eq!(branched_lift(&alg, &Forest::empty()).unwrap(), alg.unit());
        let corolla = Forest::from(Tree::new(one(1), vec![Tree::leaf(one(2)), Tree::leaf(one(3))]));
        assert_eq!(branched_lift(&alg, &corolla).unwrap()[3], 5);
        let ladder = Forest::from(Tree::ladder(&[id(1), id(2)]).unwrap());
        assert_eq!(branched_lift(&alg, &ladder).unwrap()[3], 11);
    }
}
