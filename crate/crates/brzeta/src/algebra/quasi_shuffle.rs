use rug::Rational;

use super::{Forest, LinComb, LocalityAlgebra, Tree, Word};
use crate::{Error, Result};

/// `w1 ⋆_λ w2` by the leading-letter recursion
/// `(ωw)⋆(ω'w') = ω(w⋆ω'w') + ω'(ωw⋆w') + λ(ω·ω')(w⋆w')`.
pub fn quasi_shuffle<A: LocalityAlgebra>(
    lambda: &Rational,
    w1: &Word<A::Elem>,
    w2: &Word<A::Elem>,
    alg: &A,
) -> Result<LinComb<Word<A::Elem>>> {
    let mut out = LinComb::zero();
    shuffle_into(lambda, w1, w2, &Rational::from(1), alg, &mut out)?;
    Ok(out)
}

/// Adds `scale · (w1 ⋆_λ w2)` to `out`.
///
/// Each term of the recursion is a lattice path from `(0, 0)` to
/// `(|w1|, |w2|)` with horizontal, vertical and diagonal (merging) steps, so
/// the terms are produced by walking the paths directly.
fn shuffle_into<A: LocalityAlgebra>(
    lambda: &Rational,
    w1: &Word<A::Elem>,
    w2: &Word<A::Elem>,
    scale: &Rational,
    alg: &A,
    out: &mut LinComb<Word<A::Elem>>,
) -> Result<()> {
    w1.check_proper(alg)?;
    w2.check_proper(alg)?;
    for a in w1.letters() {
        for b in w2.letters() {
            if !alg.independent(a, b) {
                return Err(Error::LocalityViolation { left: a.to_string(), right: b.to_string() });
            }
        }
    }
    let (a, b) = (w1.letters(), w2.letters());
    let merged: Vec<Vec<A::Elem>> = if *lambda == 0 {
        Vec::new()
    } else {
        a.iter().map(|x| b.iter().map(|y| alg.product(x, y)).collect()).collect::<Result<_>>()?
    };
    let mut powers = vec![scale.clone()];
    for k in 0..a.len().min(b.len()) {
        let next = Rational::from(&powers[k] * lambda);
        powers.push(next);
    }
    let walk = Walk { a, b, merged: &merged, powers: &powers };
    let mut path = Vec::with_capacity(a.len() + b.len());
    walk.step(0, 0, 0, &mut path, out);
    Ok(())
}

struct Walk<'a, E> {
    a: &'a [E],
    b: &'a [E],
    merged: &'a [Vec<E>],
    powers: &'a [Rational],
}

impl<'a, E: Clone + Ord> Walk<'a, E> {
    fn step(&self, i: usize, j: usize, merges: usize, path: &mut Vec<&'a E>, out: &mut LinComb<Word<E>>) {
        if i == self.a.len() || j == self.b.len() {
            let rest = if i == self.a.len() { &self.b[j..] } else { &self.a[i..] };
            let letters = path.iter().map(|e| (*e).clone()).chain(rest.iter().cloned()).collect();
            out.add_term(Word(letters), self.powers[merges].clone());
            return;
        }
        path.push(&self.a[i]);
        self.step(i + 1, j, merges, path, out);
        path.pop();
        path.push(&self.b[j]);
        self.step(i, j + 1, merges, path, out);
        path.pop();
        if !self.merged.is_empty() {
            path.push(&self.merged[i][j]);
            self.step(i + 1, j + 1, merges + 1, path, out);
            path.pop();
        }
    }
}

/// Bilinear extension of `⋆_λ` to linear combinations of words.
pub fn star_combination<A: LocalityAlgebra>(
    lambda: &Rational,
    x: &LinComb<Word<A::Elem>>,
    y: &LinComb<Word<A::Elem>>,
    alg: &A,
) -> Result<LinComb<Word<A::Elem>>> {
    let mut out = LinComb::zero();
    for (u, cu) in x.iter() {
        for (v, cv) in y.iter() {
            shuffle_into(lambda, u, v, &Rational::from(cu * cv), alg, &mut out)?;
        }
    }
    Ok(out)
}

/// The flattening `f_λ`: `f(1) = 1`, `f(B₊^ω F) = ω ⊔ f(F)`, `f(F₁F₂) = f(F₁) ⋆_λ f(F₂)`.
pub fn flatten<A: LocalityAlgebra>(lambda: &Rational, f: &Forest<A::Elem>, alg: &A) -> Result<LinComb<Word<A::Elem>>> {
    f.check_proper(alg)?;
    flatten_unchecked(lambda, f, alg)
}

fn flatten_unchecked<A: LocalityAlgebra>(
    lambda: &Rational,
    f: &Forest<A::Elem>,
    alg: &A,
) -> Result<LinComb<Word<A::Elem>>> {
    let mut acc = LinComb::single(Word::empty());
    for t in f.trees() {
        let ft = flatten_tree(lambda, t, alg)?;
        acc = star_combination(lambda, &acc, &ft, alg)?;
    }
    Ok(acc)
}

fn flatten_tree<A: LocalityAlgebra>(lambda: &Rational, t: &Tree<A::Elem>, alg: &A) -> Result<LinComb<Word<A::Elem>>> {
    let below = flatten_unchecked(lambda, &t.children_forest(), alg)?;
    Ok(below.map_terms(|w| w.prepend(t.decoration.clone())))
}

/// `(a⊔w) ◇_λ (b⊔w') = (a·b) ⊔ (w ⋆_λ w')` on nonempty words.
pub fn diamond_product<A: LocalityAlgebra>(
    lambda: &Rational,
    u: &Word<A::Elem>,
    v: &Word<A::Elem>,
    alg: &A,
) -> Result<LinComb<Word<A::Elem>>> {
    let (Some((a, w)), Some((b, w2))) = (u.letters().split_first(), v.letters().split_first()) else {
        return Err(Error::Invalid("the diamond product is defined on nonempty words".into()));
    };
    if !u.independent_of(v, alg) {
        return Err(Error::LocalityViolation { left: u.to_string(), right: v.to_string() });
    }
    let head = alg.product(a, b)?;
    let tail = quasi_shuffle(lambda, &Word(w.to_vec()), &Word(w2.to_vec()), alg)?;
    Ok(tail.map_terms(|t| t.prepend(head.clone())))
}

pub fn diamond_product_combination<A: LocalityAlgebra>(
    lambda: &Rational,
    x: &LinComb<Word<A::Elem>>,
    y: &LinComb<Word<A::Elem>>,
    alg: &A,
) -> Result<LinComb<Word<A::Elem>>> {
    let mut out = LinComb::zero();
    for (u, cu) in x.iter() {
        for (v, cv) in y.iter() {
            out.add_scaled(&diamond_product(lambda, u, v, alg)?, &Rational::from(cu * cv));
        }
    }
    Ok(out)
}

/// `P_A(w) = 1_Ω ⊔ w`.
pub fn free_rb_operator<A: LocalityAlgebra>(w: &Word<A::Elem>, alg: &A) -> Word<A::Elem> {
    w.prepend(alg.unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EsAlgebra, EsLetter};

    fn l(i: u32) -> EsLetter {
        EsLetter::int(i, i as i64)
    }

    fn w(v: &[u32]) -> Word<EsLetter> {
        Word(v.iter().map(|&i| l(i)).collect())
    }

    fn merged(a: u32, b: u32) -> EsLetter {
        EsAlgebra.product(&l(a), &l(b)).unwrap()
    }

    #[test]
    fn unit_and_single_letters() {
        let lam = Rational::from(1);
        let r = quasi_shuffle(&lam, &Word::empty(), &w(&[1, 2]), &EsAlgebra).unwrap();
        assert_eq!(r, LinComb::single(w(&[1, 2])));
        let r = quasi_shuffle(&lam, &w(&[1]), &w(&[2]), &EsAlgebra).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.coefficient(&Word(vec![merged(1, 2)])), 1);
    }

    #[test]
    fn shuffle_of_two_and_one() {
        let r = quasi_shuffle(&Rational::new(), &w(&[1, 2]), &w(&[3]), &EsAlgebra).unwrap();
        let mut want = LinComb::zero();
        for x in [w(&[1, 2, 3]), w(&[1, 3, 2]), w(&[3, 1, 2])] {
            want.add_term(x, Rational::from(1));
        }
        assert_eq!(r, want);
    }

    #[test]
    fn flatten_corolla() {
        let lam = Rational::from(-1);
        let f = Forest::from(Tree::new(l(3), vec![Tree::leaf(l(1)), Tree::leaf(l(2))]));
        let r = flatten(&lam, &f, &EsAlgebra).unwrap();
        assert_eq!(r.coefficient(&w(&[3, 1, 2])), 1);
        assert_eq!(r.coefficient(&w(&[3, 2, 1])), 1);
        assert_eq!(r.coefficient(&Word(vec![l(3), merged(1, 2)])), -1);
        assert_eq!(flatten(&lam, &Forest::empty(), &EsAlgebra).unwrap(), LinComb::single(Word::empty()));
    }

    #[test]
    fn diamond_examples() {
        let lam = Rational::from(1);
        let r = diamond_product(&lam, &w(&[1]), &w(&[2]), &EsAlgebra).unwrap();
        assert_eq!(r, LinComb::single(Word(vec![merged(1, 2)])));
        let r = diamond_product(&lam, &w(&[1, 3]), &w(&[2]), &EsAlgebra).unwrap();
        assert_eq!(r, LinComb::single(Word(vec![merged(1, 2), l(3)])));
        let p = free_rb_operator(&w(&[1]), &EsAlgebra);
        assert!(p.letters()[0].is_unit());
    }

    #[test]
    fn dependent_inputs_are_rejected() {
        let r = quasi_shuffle(&Rational::from(1), &w(&[1]), &w(&[1]), &EsAlgebra);
        assert!(matches!(r, Err(Error::LocalityViolation { .. })));
    }
}
