use std::collections::BTreeSet;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::matrix::{rank, rows_of, vars_of};
use super::{inner, InnerProduct, LinearForm};
use crate::{Error, Result};

/// Span of a (possibly redundant) list of linear forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    pub spanning: Vec<LinearForm>,
}

impl Subspace {
    pub fn new(spanning: Vec<LinearForm>) -> Self {
        Subspace { spanning: spanning.into_iter().filter(|f| !f.is_zero()).collect() }
    }

    pub fn coordinates<I: IntoIterator<Item = u32>>(vars: I) -> Self {
        Subspace::new(vars.into_iter().map(LinearForm::var).collect())
    }

    pub fn rank(&self) -> usize {
        let vars = vars_of(&self.spanning);
        rank(&rows_of(&self.spanning, &vars))
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.spanning.iter().flat_map(|f| f.vars()).collect()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.spanning.clone();
        v.extend(other.spanning.iter().cloned());
        Subspace::new(v)
    }

    /// Membership of a form in the span.
    pub fn contains(&self, f: &LinearForm) -> bool {
        f.is_zero() || super::matrix::solve_combination(f, &self.spanning).is_some()
    }

    /// `self ⊆ other` as spans.
    pub fn is_within(&self, other: &Subspace) -> bool {
        self.spanning.iter().all(|f| other.contains(f))
    }
}

/// Every spanning pair is `Q`-orthogonal (hence the spans are).
pub fn spans_orthogonal(q: &InnerProduct, a: &Subspace, b: &Subspace) -> bool {
    if q.is_identity() {
        let va = a.vars();
        if b.spanning.iter().all(|f| f.vars().is_disjoint(&va)) {
            return true;
        }
    }
    a.spanning.iter().all(|x| b.spanning.iter().all(|y| inner(q, x, y) == 0))
}

/// Basis of the `Q`-orthogonal complement of `inside` within the span of the
/// ambient coordinates, by Gram–Schmidt over ℚ without normalisation.
///
/// Complement vectors are produced by sweeping the ambient coordinates in
/// increasing index order and are scaled to have leading coefficient 1.
pub fn orthogonal_complement(q: &InnerProduct, inside: &Subspace, ambient: &BTreeSet<u32>) -> Result<Subspace> {
    if !inside.vars().is_subset(ambient) {
        return Err(Error::Invalid("ambient does not contain the support of the subspace".into()));
    }
    let mut basis: Vec<(LinearForm, Rational)> = Vec::new();
    let reduce = |v: &LinearForm, basis: &[(LinearForm, Rational)]| {
        let mut w = v.clone();
        for (b, bb) in basis {
            let c = inner(q, v, b);
            if c != 0 {
                w = &w - &b.scale(&Rational::from(&c / bb));
            }
        }
        w
    };
    for f in &inside.spanning {
        let w = reduce(f, &basis);
        if !w.is_zero() {
            let n = inner(q, &w, &w);
            basis.push((w, n));
        }
    }
    let mut out = Vec::new();
    for &i in ambient {
        let w = reduce(&LinearForm::var(i), &basis);
        if !w.is_zero() {
            let n = inner(q, &w, &w);
            if n <= 0 {
                return Err(Error::NotPositiveDefinite(format!("zero norm for {w}")));
            }
            basis.push((w.clone(), n));
            out.push(w.normalized().1);
        }
    }
    Ok(Subspace { spanning: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn z(i: u32) -> LinearForm {
        LinearForm::var(i)
    }

    #[test]
    fn orthogonality_examples() {
        let q = InnerProduct::identity();
        assert!(spans_orthogonal(&q, &Subspace::new(vec![z(1)]), &Subspace::new(vec![z(2)])));
        assert!(spans_orthogonal(&q, &Subspace::new(vec![&z(1) + &z(2)]), &Subspace::new(vec![&z(1) - &z(2)])));
        assert!(!spans_orthogonal(&q, &Subspace::new(vec![z(1)]), &Subspace::new(vec![&z(1) + &z(2)])));
    }

    #[test]
    fn complement_examples() {
        let q = InnerProduct::identity();
        let amb: BTreeSet<u32> = [1, 2].into();
        let c = orthogonal_complement(&q, &Subspace::new(vec![&z(1) + &z(2)]), &amb).unwrap();
        assert_eq!(c.spanning, vec![&z(1) - &z(2)]);
        let c = orthogonal_complement(&q, &Subspace::default(), &[1].into()).unwrap();
        assert_eq!(c.spanning, vec![z(1)]);
        let c = orthogonal_complement(&q, &Subspace::new(vec![z(1), z(2)]), &amb).unwrap();
        assert!(c.spanning.is_empty());
        assert!(orthogonal_complement(&q, &Subspace::new(vec![z(3)]), &amb).is_err());
    }

    #[test]
    fn complement_with_custom_q() {
        let q = InnerProduct::from_entries([(1, 2, rat(1, 3))]).unwrap();
        let amb: BTreeSet<u32> = [1, 2, 3].into();
        let inside = Subspace::new(vec![&z(1) + &z(3)]);
        let c = orthogonal_complement(&q, &inside, &amb).unwrap();
        assert_eq!(inside.rank() + c.rank(), 3);
        for f in &c.spanning {
            assert_eq!(inner(&q, f, &inside.spanning[0]), 0);
        }
        let _ = rat(0, 1);
    }
}
