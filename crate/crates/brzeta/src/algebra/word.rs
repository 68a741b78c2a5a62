use std::fmt;

use super::LocalityAlgebra;
use crate::{Error, Result};

/// A word in decorations; the empty word is the unit `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<D>(pub Vec<D>);

impl<D: Clone + fmt::Debug> Word<D> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[D] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prepend(&self, d: D) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(d);
        v.extend(self.0.iter().cloned());
        Word(v)
    }

    pub fn concat(&self, other: &Word<D>) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// All pairs of letters (at distinct positions) are independent.
    pub fn is_proper<A: LocalityAlgebra<Elem = D>>(&self, alg: &A) -> bool
    where
        D: fmt::Display,
    {
        let n = self.0.len();
        (0..n).all(|i| (i + 1..n).all(|j| alg.independent(&self.0[i], &self.0[j])))
    }

    /// Every letter of `self` is independent of every letter of `other`.
    pub fn independent_of<A: LocalityAlgebra<Elem = D>>(&self, other: &Word<D>, alg: &A) -> bool {
        self.0.iter().all(|a| other.0.iter().all(|b| alg.independent(a, b)))
    }

    pub fn check_proper<A: LocalityAlgebra<Elem = D>>(&self, alg: &A) -> Result<()>
    where
        D: fmt::Display,
    {
        let n = self.0.len();
        for i in 0..n {
            for j in i + 1..n {
                if !alg.independent(&self.0[i], &self.0[j]) {
                    return Err(Error::LocalityViolation { left: self.0[i].to_string(), right: self.0[j].to_string() });
                }
            }
        }
        Ok(())
    }
}

impl<D: fmt::Display> fmt::Display for Word<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}
