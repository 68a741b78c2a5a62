use std::fmt::Debug;

use rug::Rational;

use super::{LocalityAlgebra, Word};

/// A set with an independence relation and a partial product, as seen by the
/// law checker.
pub trait LocalityStructure {
    type Elem: Clone + Debug;

    fn independent(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// `None` when the product is undefined.
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
}

#[derive(Clone, Debug, PartialEq)]
pub enum LawOutcome<E> {
    Pass { checked: usize },
    Fail { witness: Vec<E>, reason: String },
}

impl<E> LawOutcome<E> {
    pub fn passed(&self) -> bool {
        matches!(self, LawOutcome::Pass { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawReport<E> {
    pub closure: LawOutcome<E>,
    pub associativity: LawOutcome<E>,
    pub commutativity: Option<LawOutcome<E>>,
}

impl<E> LawReport<E> {
    pub fn passed(&self) -> bool {
        self.closure.passed() && self.associativity.passed() && self.commutativity.as_ref().is_none_or(|c| c.passed())
    }
}

/// Checks the locality semigroup laws on the given samples.
///
/// * closure: for every probe set `U`, the product of two independent
///   elements of `U^⊤` (polar set taken inside the samples) lies in `U^⊤`;
/// * associativity on pairwise independent triples;
/// * commutativity on independent pairs, when `commutative` is set.
pub fn check_locality_laws<S: LocalityStructure>(
    s: &S,
    samples: &[S::Elem],
    probes: &[Vec<S::Elem>],
    commutative: bool,
) -> LawReport<S::Elem> {
    LawReport {
        closure: closure(s, samples, probes),
        associativity: associativity(s, samples),
        commutativity: commutative.then(|| commutativity(s, samples)),
    }
}

fn closure<S: LocalityStructure>(s: &S, samples: &[S::Elem], probes: &[Vec<S::Elem>]) -> LawOutcome<S::Elem> {
    let mut checked = 0;
    for u in probes {
        let polar: Vec<&S::Elem> = samples.iter().filter(|x| u.iter().all(|y| s.independent(x, y))).collect();
        for x in &polar {
            for y in &polar {
                if !s.independent(x, y) {
                    continue;
                }
                let Some(p) = s.product(x, y) else {
                    return LawOutcome::Fail {
                        witness: vec![(*x).clone(), (*y).clone()],
                        reason: "product undefined on an independent pair".into(),
                    };
                };
                checked += 1;
                if let Some(bad) = u.iter().find(|v| !s.independent(&p, v)) {
                    return LawOutcome::Fail {
                        witness: vec![(*x).clone(), (*y).clone()],
                        reason: format!("product {p:?} is not independent of probe element {bad:?}"),
                    };
                }
            }
        }
    }
    LawOutcome::Pass { checked }
}

fn associativity<S: LocalityStructure>(s: &S, samples: &[S::Elem]) -> LawOutcome<S::Elem> {
    let mut checked = 0;
    for a in samples {
        for b in samples {
            if !s.independent(a, b) {
                continue;
            }
            for c in samples {
                if !s.independent(a, c) || !s.independent(b, c) {
                    continue;
                }
                let (Some(ab), Some(bc)) = (s.product(a, b), s.product(b, c)) else { continue };
                if !s.independent(&ab, c) || !s.independent(a, &bc) {
                    continue;
                }
                let (Some(l), Some(r)) = (s.product(&ab, c), s.product(a, &bc)) else { continue };
                checked += 1;
                if !s.equal(&l, &r) {
                    return LawOutcome::Fail {
                        witness: vec![a.clone(), b.clone(), c.clone()],
                        reason: format!("(ab)c = {l:?} but a(bc) = {r:?}"),
                    };
                }
            }
        }
    }
    LawOutcome::Pass { checked }
}

fn commutativity<S: LocalityStructure>(s: &S, samples: &[S::Elem]) -> LawOutcome<S::Elem> {
    let mut checked = 0;
    for a in samples {
        for b in samples {
            if !s.independent(a, b) {
                continue;
            }
            if let (Some(l), Some(r)) = (s.product(a, b), s.product(b, a)) {
                checked += 1;
                if !s.equal(&l, &r) {
                    return LawOutcome::Fail { witness: vec![a.clone(), b.clone()], reason: "ab ≠ ba".into() };
                }
            }
        }
    }
    LawOutcome::Pass { checked }
}

/// `(ℚ, +)` with `x ⊤ y ⇔ x + y ∉ ℤ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalSumsAwayFromIntegers;

impl LocalityStructure for RationalSumsAwayFromIntegers {
    type Elem = Rational;

    fn independent(&self, a: &Rational, b: &Rational) -> bool {
        *Rational::from(a + b).denom() != 1
    }

    fn product(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        self.independent(a, b).then(|| Rational::from(a + b))
    }

    fn equal(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
}

/// Words over a locality algebra of decorations under concatenation; two
/// words are independent when all their letters are.
#[derive(Clone, Debug)]
pub struct WordConcatenation<A>(pub A);

impl<A: LocalityAlgebra> LocalityStructure for WordConcatenation<A> {
    type Elem = Word<A::Elem>;

    fn independent(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.independent_of(b, &self.0)
    }

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        (self.independent(a, b) && a.is_proper(&self.0) && b.is_proper(&self.0)).then(|| a.concat(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EsAlgebra, EsLetter};
    use crate::numerics::rat;

    #[test]
    fn rational_counterexample() {
        let samples: Vec<Rational> = [rat(1, 3), rat(1, 5), rat(2, 7), rat(1, 2), rat(3, 4)].into();
        let report = check_locality_laws(&RationalSumsAwayFromIntegers, &samples, &[vec![rat(1, 3)]], true);
        match &report.closure {
            LawOutcome::Fail { witness, .. } => assert_eq!(witness, &vec![rat(1, 3), rat(1, 3)]),
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(!report.passed());
    }

    #[test]
    fn words_pass() {
        let letters: Vec<Word<EsLetter>> = (1..=4)
            .map(|i| Word(vec![EsLetter::int(i, i as i64)]))
            .chain([Word(vec![EsLetter::int(5, 1), EsLetter::int(6, 2)]), Word::empty()])
            .collect();
        let probes = vec![vec![letters[0].clone()], vec![letters[4].clone(), letters[1].clone()]];
        let report = check_locality_laws(&WordConcatenation(EsAlgebra), &letters, &probes, false);
        assert!(report.passed(), "{report:?}");
    }
}
