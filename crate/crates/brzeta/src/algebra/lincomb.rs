use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::numerics::CoeffPoly;

/// Scalars for formal linear combinations.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for CoeffPoly {
    fn zero() -> Self {
        CoeffPoly::zero()
    }
    fn one() -> Self {
        CoeffPoly::one()
    }
    fn is_zero(&self) -> bool {
        CoeffPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(r: &Rational) -> Self {
        CoeffPoly::from_rational(r.clone())
    }
}

/// Finite formal linear combination with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<T: Ord, S = Rational> {
    terms: BTreeMap<T, S>,
}

impl<T: Ord, S> Default for LinComb<T, S> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<T: Ord + Clone, S: Scalar> LinComb<T, S> {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(t: T) -> Self {
        let mut c = LinComb::zero();
        c.add_term(t, S::one());
        c
    }

    pub fn add_term(&mut self, t: T, s: S) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(e) => {
                *e = e.add(&s);
                if e.is_zero() {
                    self.terms.remove(&t);
                }
            }
            None => {
                self.terms.insert(t, s);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<T, S>, s: &S) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.mul(s));
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = LinComb::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn coefficient(&self, t: &T) -> S {
        self.terms.get(t).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_terms<U: Ord + Clone, F: Fn(&T) -> U>(&self, f: F) -> LinComb<U, S> {
        let mut out = LinComb::zero();
        for (t, c) in &self.terms {
            out.add_term(f(t), c.clone());
        }
        out
    }
}

impl<T: Ord + Clone + fmt::Display, S: Scalar> fmt::Display for LinComb<T, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == S::one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "({c})·{t}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut c: LinComb<u32> = LinComb::single(3);
        c.add_term(3, Rational::from(-1));
        assert!(c.is_empty());
        c.add_term(1, Rational::from(2));
        assert_eq!(c.coefficient(&1), 2);
        assert_eq!(c.scale(&Rational::from(0)).len(), 0);
    }
}
