use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::parse_rational;
use crate::{Error, Result};

/// The coordinate `z_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable(pub u32);

impl Variable {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            Err(Error::Invalid("variable indices start at 1".into()))
        } else {
            Ok(Variable(index))
        }
    }
}

/// Homogeneous linear form `Σ c_i z_i` with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: BTreeMap<u32, Rational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn var(i: u32) -> Self {
        LinearForm::from_pairs([(i, Rational::from(1))])
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Rational)>>(pairs: I) -> Self {
        let mut f = LinearForm::zero();
        for (i, c) in pairs {
            f.add_coeff(i, &c);
        }
        f
    }

    /// Sum of the given coordinates.
    pub fn sum_of(vars: &[u32]) -> Self {
        LinearForm::from_pairs(vars.iter().map(|&v| (v, Rational::from(1))))
    }

    pub fn add_coeff(&mut self, i: u32, c: &Rational) {
        if *c == 0 {
            return;
        }
        let e = self.coeffs.entry(i).or_default();
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn coeff(&self, i: u32) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn scale(&self, r: &Rational) -> LinearForm {
        if *r == 0 {
            return LinearForm::zero();
        }
        LinearForm { coeffs: self.coeffs.iter().map(|(i, c)| (*i, Rational::from(c * r))).collect() }
    }

    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Rational {
        let mut acc = Rational::new();
        for (i, c) in &self.coeffs {
            if let Some(x) = point.get(i) {
                acc += Rational::from(c * x);
            }
        }
        acc
    }

    pub fn eval_f64(&self, point: &BTreeMap<u32, f64>) -> f64 {
        self.coeffs.iter().map(|(i, c)| c.to_f64() * point.get(i).copied().unwrap_or(0.0)).sum()
    }

    /// Lowest-index coordinate and its coefficient.
    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.coeffs.iter().next().map(|(i, c)| (*i, c))
    }

    /// Returns `(c, L')` with `self = c·L'` and the leading coefficient of `L'` equal to 1.
    pub fn normalized(&self) -> (Rational, LinearForm) {
        match self.leading() {
            None => (Rational::from(1), LinearForm::zero()),
            Some((_, c)) => {
                let c = c.clone();
                let inv = Rational::from(c.recip_ref());
                (c, self.scale(&inv))
            }
        }
    }

    /// Replace each variable index through `map` (missing indices are kept).
    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> LinearForm {
        LinearForm::from_pairs(self.coeffs.iter().map(|(i, c)| (*map.get(i).unwrap_or(i), c.clone())))
    }
}

impl Add<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_coeff(*i, c);
        }
        out
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&Rational::from(-1))
    }
}

impl Sub<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Mul<&Rational> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: &Rational) -> LinearForm {
        self.scale(rhs)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, what: &str) -> fmt::Result {
    let neg = *c < 0;
    let abs = Rational::from(c.abs_ref());
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { "-" } else { "+" })?;
    }
    if what.is_empty() {
        write!(f, "{abs}")
    } else if abs == 1 {
        write!(f, "{what}")
    } else {
        write!(f, "{abs}{what}")
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.coeffs.iter().enumerate() {
            write_coeff(f, k == 0, c, &format!("z{i}"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SparseEntry(u32, String);

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<SparseEntry> = self.coeffs.iter().map(|(i, c)| SparseEntry(*i, c.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<SparseEntry> = Vec::deserialize(d)?;
        let mut f = LinearForm::zero();
        for SparseEntry(i, c) in v {
            if i == 0 {
                return Err(D::Error::custom("variable indices start at 1"));
            }
            f.add_coeff(i, &parse_rational(&c).map_err(D::Error::custom)?);
        }
        Ok(f)
    }
}

/// `ℓ(z) + c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    pub linear: LinearForm,
    #[serde(with = "crate::numerics::serde_rational")]
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(linear: LinearForm, constant: Rational) -> Self {
        AffineForm { linear, constant }
    }

    pub fn constant(c: Rational) -> Self {
        AffineForm { linear: LinearForm::zero(), constant: c }
    }

    pub fn is_unit_at_zero(&self) -> bool {
        self.constant != 0
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant == 0
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_zero()
    }

    pub fn shift(&self, c: &Rational) -> AffineForm {
        AffineForm { linear: self.linear.clone(), constant: Rational::from(&self.constant + c) }
    }

    pub fn scale(&self, r: &Rational) -> AffineForm {
        AffineForm { linear: self.linear.scale(r), constant: Rational::from(&self.constant * r) }
    }

    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Rational {
        self.linear.eval(point) + &self.constant
    }
}

impl Add<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        AffineForm { linear: &self.linear + &rhs.linear, constant: Rational::from(&self.constant + &rhs.constant) }
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.linear.is_zero() {
            return write!(f, "{}", self.constant);
        }
        write!(f, "{}", self.linear)?;
        if self.constant != 0 {
            write_coeff(f, false, &self.constant, "")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn zeros_are_not_stored() {
        let a = LinearForm::var(1);
        let b = &a - &a;
        assert!(b.is_zero());
        assert_eq!(b, LinearForm::zero());
    }

    #[test]
    fn normalisation() {
        let f = LinearForm::from_pairs([(2, rat(-3, 1)), (5, rat(6, 1))]);
        let (c, g) = f.normalized();
        assert_eq!(c, rat(-3, 1));
        assert_eq!(g, LinearForm::from_pairs([(2, rat(1, 1)), (5, rat(-2, 1))]));
        assert_eq!(format!("{g}"), "z2 - 2z5");
    }

    #[test]
    fn affine_display_and_json() {
        let a = AffineForm::new(LinearForm::var(1), rat(-2, 1));
        assert_eq!(format!("{a}"), "z1 - 2");
        assert!(a.is_unit_at_zero());
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<AffineForm>(&s).unwrap(), a);
    }
}
