use std::collections::BTreeSet;
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::LocalityAlgebra;
use crate::{Error, Result};

/// A decoration `(label, weight)`, or a merged letter produced by
/// quasi-shuffles: a set of labels with the sum of their weights.
///
/// The summand attached to a letter is `n^{-s + Σ z_ℓ}` over its labels, so
/// merging two letters multiplies their summands.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EsLetter {
    pub labels: BTreeSet<u32>,
    #[serde(with = "crate::numerics::serde_rational")]
    pub weight: Rational,
}

impl EsLetter {
    pub fn new(label: u32, weight: Rational) -> Self {
        EsLetter { labels: [label].into(), weight }
    }

    pub fn int(label: u32, weight: i64) -> Self {
        EsLetter::new(label, Rational::from(weight))
    }

    pub fn is_unit(&self) -> bool {
        self.labels.is_empty() && self.weight == 0
    }

    /// The single label of an unmerged decoration.
    pub fn label(&self) -> Option<u32> {
        if self.labels.len() == 1 {
            self.labels.iter().next().copied()
        } else {
            None
        }
    }
}

impl fmt::Display for EsLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.is_empty() {
            return write!(f, "l=,s={}", self.weight);
        }
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        write!(f, "l={},s={}", labels.join("+"), self.weight)
    }
}

/// Decorations with independence "label sets are disjoint".
#[derive(Clone, Copy, Debug, Default)]
pub struct EsAlgebra;

impl LocalityAlgebra for EsAlgebra {
    type Elem = EsLetter;

    fn independent(&self, a: &EsLetter, b: &EsLetter) -> bool {
        a.labels.is_disjoint(&b.labels)
    }

    fn product(&self, a: &EsLetter, b: &EsLetter) -> Result<EsLetter> {
        if !self.independent(a, b) {
            return Err(Error::LocalityViolation { left: a.to_string(), right: b.to_string() });
        }
        Ok(EsLetter {
            labels: a.labels.union(&b.labels).copied().collect(),
            weight: Rational::from(&a.weight + &b.weight),
        })
    }

    fn unit(&self) -> EsLetter {
        EsLetter::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_display() {
        let a = EsLetter::int(2, 2);
        let b = EsLetter::int(3, 3);
        let ab = EsAlgebra.product(&a, &b).unwrap();
        assert_eq!(ab.to_string(), "l=2+3,s=5");
        assert!(EsAlgebra.product(&a, &a).is_err());
        assert!(EsAlgebra.independent(&EsAlgebra.unit(), &EsAlgebra.unit()));
    }
}
