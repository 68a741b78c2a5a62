use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rug::{Float, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{constant_numeric_value, FormalConstant};
use crate::Result;

/// A monomial in formal constants: sorted `(constant, power)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstMonomial(pub Vec<(FormalConstant, u32)>);

impl ConstMonomial {
    pub fn one() -> Self {
        ConstMonomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &ConstMonomial) -> ConstMonomial {
        let mut map: BTreeMap<FormalConstant, u32> = self.0.iter().cloned().collect();
        for (c, p) in &other.0 {
            *map.entry(c.clone()).or_insert(0) += p;
        }
        ConstMonomial(map.into_iter().collect())
    }
}

impl fmt::Display for ConstMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, p)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *p == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{p}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in formal constants with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffPoly {
    terms: BTreeMap<ConstMonomial, Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn one() -> Self {
        CoeffPoly::from_rational(Rational::from(1))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut p = CoeffPoly::zero();
        if r != 0 {
            p.terms.insert(ConstMonomial::one(), r);
        }
        p
    }

    pub fn constant(c: FormalConstant) -> Self {
        CoeffPoly::monomial(ConstMonomial(vec![(c, 1)]), Rational::from(1))
    }

    pub fn monomial(m: ConstMonomial, r: Rational) -> Self {
        let mut p = CoeffPoly::zero();
        if r != 0 {
            p.terms.insert(m, r);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&ConstMonomial::one()).is_some_and(|r| *r == 1)
    }

    /// True when no formal constant survives.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The coefficient of the empty monomial.
    pub fn rational_part(&self) -> Rational {
        self.terms.get(&ConstMonomial::one()).cloned().unwrap_or_default()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConstMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Formal constants appearing with nonzero coefficient.
    pub fn constants(&self) -> Vec<FormalConstant> {
        let mut out: Vec<FormalConstant> = self.terms.keys().flat_map(|m| m.0.iter().map(|(c, _)| c.clone())).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn add_term(&mut self, m: ConstMonomial, r: Rational) {
        if r == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += r;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, r: &Rational) -> CoeffPoly {
        if *r == 0 {
            return CoeffPoly::zero();
        }
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(c * r))).collect() }
    }

    pub fn numeric_value(&self, precision_bits: u32) -> Result<Float> {
        let mut acc = Float::new(precision_bits);
        for (m, r) in &self.terms {
            let mut t = Float::with_val(precision_bits, r);
            for (c, p) in &m.0 {
                let v = constant_numeric_value(c, precision_bits)?;
                for _ in 0..*p {
                    t *= &v;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl From<Rational> for CoeffPoly {
    fn from(r: Rational) -> Self {
        CoeffPoly::from_rational(r)
    }
}

impl From<i64> for CoeffPoly {
    fn from(n: i64) -> Self {
        CoeffPoly::from_rational(Rational::from(n))
    }
}

impl AddAssign<&CoeffPoly> for CoeffPoly {
    fn add_assign(&mut self, rhs: &CoeffPoly) {
        for (m, r) in &rhs.terms {
            self.add_term(m.clone(), r.clone());
        }
    }
}

impl Add<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m, r)| (m.clone(), Rational::from(-r))).collect() }
    }
}

impl Sub<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        self + &(-rhs)
    }
}

impl Mul<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (m1, r1) = self.terms.iter().next().unwrap();
            let (m2, r2) = rhs.terms.iter().next().unwrap();
            return CoeffPoly::monomial(m1.mul(m2), Rational::from(r1 * r2));
        }
        let mut out = CoeffPoly::zero();
        for (m1, r1) in &self.terms {
            for (m2, r2) in &rhs.terms {
                out.add_term(m1.mul(m2), Rational::from(r1 * r2));
            }
        }
        out
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, r)) in self.terms.iter().enumerate() {
            let neg = *r < 0;
            let abs = Rational::from(r.abs_ref());
            if i > 0 {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}·{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Entry(Vec<(FormalConstant, u32)>, String);

impl Serialize for CoeffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = self.terms.iter().map(|(m, r)| Entry(m.0.clone(), r.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let v: Vec<Entry> = Vec::deserialize(d)?;
        let mut out = CoeffPoly::zero();
        for Entry(m, r) in v {
            let r = super::parse_rational(&r).map_err(D::Error::custom)?;
            out.add_term(ConstMonomial(m), r);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn arithmetic() {
        let g = CoeffPoly::constant(FormalConstant::EulerGamma);
        let a = &CoeffPoly::from(rat(1, 2)) + &g;
        let sq = &a * &a;
        assert_eq!(sq.rational_part(), rat(1, 4));
        assert!(!sq.is_rational());
        let back = &sq - &sq;
        assert!(back.is_zero());
        assert!(CoeffPoly::from(rat(3, 4)).is_rational());
        assert_eq!(format!("{}", a), "1/2 + γ");
    }

    #[test]
    fn numeric() {
        let a = &CoeffPoly::from(2) * &CoeffPoly::constant(FormalConstant::EulerGamma);
        let v = a.numeric_value(128).unwrap().to_f64();
        assert!((v - 2.0 * 0.5772156649015329).abs() < 1e-14);
    }

    #[test]
    fn json() {
        let a = &CoeffPoly::from(rat(-1, 12)) + &CoeffPoly::constant(FormalConstant::zeta_at(3));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<CoeffPoly>(&s).unwrap(), a);
    }
}
