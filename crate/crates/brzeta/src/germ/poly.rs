use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linear::LinearForm;
use crate::numerics::CoeffPoly;

/// Monomial `Π z_i^{e_i}` as sorted `(i, e_i)` pairs with `e_i > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn from_exponents<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in pairs {
            if e > 0 {
                *map.entry(i).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, i: u32) -> u32 {
        self.0.iter().find(|(v, _)| *v == i).map_or(0, |(_, e)| *e)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes variable `i`, returning its exponent and the rest.
    pub fn split_var(&self, i: u32) -> (u32, Monomial) {
        let e = self.exponent(i);
        (e, Monomial(self.0.iter().copied().filter(|(v, _)| *v != i).collect()))
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "z{i}")?;
            } else {
                write!(f, "z{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in the coordinates with formal-constant coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, CoeffPoly>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(CoeffPoly::one())
    }

    pub fn constant(c: CoeffPoly) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_rational(r: Rational) -> Self {
        Poly::constant(CoeffPoly::from_rational(r))
    }

    pub fn var(i: u32) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(i), CoeffPoly::one());
        p
    }

    pub fn monomial(m: Monomial, c: CoeffPoly) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_linear(l: &LinearForm) -> Self {
        let mut p = Poly::zero();
        for (i, c) in l.iter() {
            p.add_term(Monomial::var(i), CoeffPoly::from_rational(c.clone()));
        }
        p
    }

    /// `c + ℓ`.
    pub fn from_affine(l: &LinearForm, c: &Rational) -> Self {
        let mut p = Poly::from_linear(l);
        p.add_term(Monomial::one(), CoeffPoly::from_rational(c.clone()));
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: CoeffPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> CoeffPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> CoeffPoly {
        self.coefficient(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    /// Keeps monomials of total degree `≤ max`.
    pub fn truncate(&self, max: i64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.degree() as i64) <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffPoly) -> Poly {
        let mut out = Poly::zero();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> Poly {
        if *r == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, i64::MAX)
    }

    /// Product keeping only monomials of degree `≤ max`.
    pub fn mul_truncated(&self, other: &Poly, max: i64) -> Poly {
        let mut acc: HashMap<Monomial, CoeffPoly> = HashMap::new();
        for (m1, c1) in &self.terms {
            let d1 = m1.degree() as i64;
            for (m2, c2) in &other.terms {
                if d1 + m2.degree() as i64 > max {
                    continue;
                }
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(e) => *e += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `z_i ↦ map[i]`; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<u32, Poly>) -> Poly {
        let mut powers: HashMap<(u32, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(i, e) in &m.0 {
                match map.get(&i) {
                    Some(img) => {
                        let p = powers.entry((i, e)).or_insert_with(|| img.pow(e)).clone();
                        t = t.mul(&p);
                    }
                    None => kept.push((i, e)),
                }
            }
            if !kept.is_empty() {
                t = t.mul(&Poly::monomial(Monomial(kept), CoeffPoly::one()));
            }
            out.add_assign(&t);
        }
        out
    }

    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> CoeffPoly {
        let mut acc = CoeffPoly::zero();
        for (m, c) in &self.terms {
            let mut r = Rational::from(1);
            for &(i, e) in &m.0 {
                let x = point.get(&i).cloned().unwrap_or_default();
                for _ in 0..e {
                    r *= &x;
                }
            }
            acc += &c.scale(&r);
        }
        acc
    }

    /// Exact quotient by a nonzero linear form, if it divides.
    pub fn divide_by_linear(&self, l: &LinearForm) -> Option<Poly> {
        let (v, c) = l.leading()?;
        let c = c.clone();
        let rest = Poly::from_linear(&(l - &LinearForm::from_pairs([(v, c.clone())])));
        // coefficients a_k of z_v^k
        let mut a: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, coef) in &self.terms {
            let (e, mrest) = m.split_var(v);
            a.entry(e).or_default().add_term(mrest, coef.clone());
        }
        let Some(&d) = a.keys().next_back() else { return Some(Poly::zero()) };
        if d == 0 {
            return None;
        }
        let inv = Rational::from(c.recip_ref());
        let mut q: BTreeMap<u32, Poly> = BTreeMap::new();
        // q_{k-1} = (a_k - rest·q_k)/c
        let mut prev = Poly::zero();
        for k in (1..=d).rev() {
            let ak = a.get(&k).cloned().unwrap_or_default();
            let qk1 = ak.sub(&rest.mul(&prev)).scale_rat(&inv);
            q.insert(k - 1, qk1.clone());
            prev = qk1;
        }
        let a0 = a.get(&0).cloned().unwrap_or_default();
        if !a0.sub(&rest.mul(&prev)).is_zero() {
            return None;
        }
        let mut out = Poly::zero();
        for (k, p) in q {
            let zk = if k == 0 { Poly::one() } else { Poly::monomial(Monomial(vec![(v, k)]), CoeffPoly::one()) };
            out.add_assign(&p.mul(&zk));
        }
        Some(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let simple = c.is_rational();
            match (m.is_one(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) if simple => write!(f, "{c}·{m}")?,
                (false, false) => write!(f, "({c})·{m}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&Monomial, &CoeffPoly)> = self.terms.iter().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(Monomial, CoeffPoly)> = Vec::deserialize(d)?;
        let mut p = Poly::zero();
        for (m, c) in v {
            p.add_term(Monomial::from_exponents(m.0), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn division_by_linear_forms() {
        let l = &LinearForm::var(1) + &LinearForm::var(2);
        let p = Poly::from_linear(&l).mul(&Poly::from_linear(&(&LinearForm::var(1) - &LinearForm::var(3))));
        let q = p.divide_by_linear(&l).unwrap();
        assert_eq!(q, Poly::from_linear(&(&LinearForm::var(1) - &LinearForm::var(3))));
        assert!(Poly::var(1).divide_by_linear(&l).is_none());
        let two_l = l.scale(&rat(2, 1));
        assert_eq!(Poly::from_linear(&l).divide_by_linear(&two_l).unwrap(), Poly::from_rational(rat(1, 2)));
    }

    #[test]
    fn substitution() {
        let p = Poly::var(1).mul(&Poly::var(2));
        let mut map = BTreeMap::new();
        map.insert(1, Poly::var(3).add(&Poly::one()));
        let s = p.substitute(&map);
        assert_eq!(s, Poly::var(3).mul(&Poly::var(2)).add(&Poly::var(2)));
    }
}
