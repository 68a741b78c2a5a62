use std::collections::BTreeMap;

use brzeta::algebra::{flatten, quasi_shuffle, EsAlgebra, EsLetter, Forest, Tree, Word};
use brzeta::cli::parse_forest;
use brzeta::numerics::rational_reconstruct;
use brzeta::symbol::SumOperator;
use brzeta::zeta::{numeric_forest_value, numeric_words_value, NumericConfig};
use brzeta::Rational;
use proptest::prelude::*;

/// Forests as parent lists: vertex `i` hangs under `parent[i] < i` or is a root.
fn forest_strategy(max: usize) -> impl Strategy<Value = Forest<EsLetter>> {
    prop::collection::vec((any::<Option<prop::sample::Index>>(), -3i64..=3), 1..=max).prop_map(|vertices| {
        let parents: Vec<Option<usize>> =
            vertices.iter().enumerate().map(|(i, (p, _))| if i == 0 { None } else { p.map(|x| x.index(i)) }).collect();
        fn build(i: usize, parents: &[Option<usize>], vertices: &[(Option<prop::sample::Index>, i64)]) -> Tree<EsLetter> {
            let kids = (0..parents.len()).filter(|&j| parents[j] == Some(i)).map(|j| build(j, parents, vertices)).collect();
            Tree::new(EsLetter::int(i as u32 + 1, vertices[i].1), kids)
        }
        Forest::new((0..parents.len()).filter(|&i| parents[i].is_none()).map(|i| build(i, &parents, &vertices)).collect())
    })
}

fn word(ws: &[i64], first: u32) -> Word<EsLetter> {
    Word(ws.iter().enumerate().map(|(i, &w)| EsLetter::int(first + i as u32, w)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_forests_parse_back(f in forest_strategy(7)) {
        prop_assert_eq!(parse_forest(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn quasi_shuffle_commutes(a in prop::collection::vec(-2i64..=2, 0..=3), b in prop::collection::vec(-2i64..=2, 0..=3), l in -1i64..=1) {
        let (u, v) = (word(&a, 1), word(&b, 10));
        let lambda = Rational::from(l);
        prop_assert_eq!(quasi_shuffle(&lambda, &u, &v, &EsAlgebra).unwrap(), quasi_shuffle(&lambda, &v, &u, &EsAlgebra).unwrap());
    }

    /// Every word carries the forest's total weight.
    #[test]
    fn flattening_keeps_total_weight(f in forest_strategy(5), l in prop::sample::select(vec![-1i64, 1])) {
        let total: Rational = f.decorations().iter().map(|d| d.weight.clone()).sum();
        let words = flatten(&Rational::from(l), &f, &EsAlgebra).unwrap();
        prop_assert!(!words.is_empty());
        for (w, c) in words.iter() {
            let s: Rational = w.letters().iter().map(|d| d.weight.clone()).sum();
            prop_assert_eq!(&s, &total);
            prop_assert!(*c != 0);
        }
    }

    #[test]
    fn reconstruction_recovers_small_fractions(p in -1000i64..=1000, q in 1i64..=1000, e in -1e-13f64..1e-13) {
        let x = p as f64 / q as f64 + e;
        prop_assert_eq!(rational_reconstruct(x, q as u64, 2e-13 + 1e-15), Some(Rational::from((p, q))));
    }
}

#[test]
fn words_and_branches_agree_numerically() {
    let cfg = NumericConfig::default();
    let f = parse_forest("T(s=2)[T(s=3/2),T(s=-1/2)]").unwrap();
    let z: BTreeMap<u32, Rational> =
        [(1, Rational::from((1, 7))), (2, Rational::from((-1, 9))), (3, Rational::from((1, 11)))].into();
    for op in [SumOperator::Strict, SumOperator::Weak] {
        let words = flatten(&op.rb_weight(), &f, &EsAlgebra).unwrap();
        let a = numeric_forest_value(&f, op, &z, &cfg).unwrap();
        let b = numeric_words_value(&words, op, &z, &cfg).unwrap();
        assert!((a.to_f64() - b.to_f64()).abs() < 1e-25 * a.to_f64().abs().max(1.0), "{op:?}: {a} vs {b}");
    }
}
