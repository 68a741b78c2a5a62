use std::collections::BTreeMap;

use super::term::{GermTerm, TermKey};
use super::{Germ, Poly};
use crate::linear::matrix::solve_combination;
use crate::linear::LinearForm;

/// Rewrites every term so that its pole forms are linearly independent.
///
/// A relation `L_j = Σ c_i L_i` is used as `1 = Σ c_i L_i / L_j`: each split
/// lowers the multiplicity of some `L_i` and raises that of `L_j`.
pub fn partial_fraction_reduce(g: &Germ) -> Germ {
    let mut work: BTreeMap<TermKey, Poly> = BTreeMap::new();
    let mut done = Vec::new();
    let mut vague = Vec::new();
    for t in g.terms() {
        if t.unknown.is_some() {
            // keep remainders attached to their own known factor
            for r in partial_fraction_reduce(&Germ::from_terms(vec![GermTerm { unknown: None, ..t.clone() }])).terms() {
                vague.push(r.clone().with_unknown(t.unknown.clone().unwrap()));
            }
            continue;
        }
        work.entry(t.key()).or_default().add_assign(&t.num);
    }
    while let Some((key, num)) = work.pop_first() {
        if num.is_zero() {
            continue;
        }
        let forms: Vec<LinearForm> = key.0.iter().map(|(f, _)| f.clone()).collect();
        let relation = (1..forms.len()).find_map(|j| solve_combination(&forms[j], &forms[..j]).map(|c| (j, c)));
        let Some((j, coeffs)) = relation else {
            done.push(GermTerm::from_key(key, num));
            continue;
        };
        for (i, c) in coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let poles = shift(&key.0, i, j);
            let k = (poles, key.1.clone(), key.2.clone());
            work.entry(k).or_default().add_assign(&num.scale_rat(c));
        }
    }
    done.extend(vague);
    Germ::from_terms(done)
}

fn shift(poles: &[(LinearForm, u32)], down: usize, up: usize) -> Vec<(LinearForm, u32)> {
    let mut out = Vec::with_capacity(poles.len());
    for (k, (f, m)) in poles.iter().enumerate() {
        let m = if k == down {
            m - 1
        } else if k == up {
            m + 1
        } else {
            *m
        };
        if m > 0 {
            out.push((f.clone(), m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn z(i: u32) -> LinearForm {
        LinearForm::var(i)
    }

    fn independent_poles(g: &Germ) -> bool {
        g.terms().iter().all(|t| {
            let f: Vec<LinearForm> = t.poles.iter().map(|(f, _)| f.clone()).collect();
            crate::linear::Subspace::new(f.clone()).rank() == f.len()
        })
    }

    #[test]
    fn three_dependent_forms() {
        let s = &z(1) + &z(2);
        let g = Germ::from_terms(vec![GermTerm::new(Poly::one(), vec![(z(1), 1), (z(2), 1), (s, 1)], vec![]).unwrap()]);
        let r = partial_fraction_reduce(&g);
        assert!(independent_poles(&r));
        assert!(r.terms().len() >= 2);
        assert!(r.equals(&g).unwrap());
    }

    #[test]
    fn single_pole_unchanged() {
        let g = Germ::pole(&z(1)).unwrap();
        assert_eq!(partial_fraction_reduce(&g), g);
    }

    #[test]
    fn numerator_split_recombines() {
        let num = Poly::from_linear(&(&z(1) + &z(2)));
        let g = Germ::from_terms(vec![GermTerm::new(num, vec![(z(1), 1), (z(2), 1)], vec![]).unwrap()]);
        let expect = Germ::pole(&z(1)).unwrap().add(&Germ::pole(&z(2)).unwrap());
        assert!(partial_fraction_reduce(&g).equals(&expect).unwrap());
    }

    #[test]
    fn higher_multiplicity() {
        let d = &z(1) - &z(2).scale(&rat(1, 2));
        let g =
            Germ::from_terms(vec![GermTerm::new(Poly::var(3), vec![(z(1), 2), (z(2), 1), (d, 2)], vec![]).unwrap()]);
        let r = partial_fraction_reduce(&g);
        assert!(independent_poles(&r));
        assert!(r.equals(&g).unwrap());
    }
}
