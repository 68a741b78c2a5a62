use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::ZetaCoefficient;
use crate::germ::{Germ, Poly};
use crate::linear::{spans_orthogonal, AffineForm, InnerProduct, LinearForm, Subspace};
use crate::numerics::{as_i64, rat_pow, CoeffPoly};
use crate::{Error, Result};

/// Whether `x^α` may appear in a symbol: nonconstant, or a polynomial power.
pub fn admissible(order: &AffineForm) -> bool {
    !order.linear.is_zero() || as_i64(&order.constant).is_some_and(|n| n >= 0)
}

/// Discarded pieces: for each linear part `ℓ`, pieces of order `ℓ + c` with
/// `c ≤ bound` may be missing. A bound for `ℓ = 0` means unknown polynomial
/// (in particular constant) pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tail {
    bounds: BTreeMap<LinearForm, Rational>,
}

impl Tail {
    pub fn none() -> Self {
        Tail::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bounds(&self) -> impl Iterator<Item = (&LinearForm, &Rational)> {
        self.bounds.iter()
    }

    pub fn bound(&self, l: &LinearForm) -> Option<&Rational> {
        self.bounds.get(l)
    }

    pub fn insert(&mut self, order: &AffineForm) {
        if order.linear.is_zero() && order.constant < 0 {
            return;
        }
        let e = self.bounds.entry(order.linear.clone()).or_insert_with(|| order.constant.clone());
        if *e < order.constant {
            *e = order.constant.clone();
        }
    }

    pub fn merge(&mut self, other: &Tail) {
        for (l, c) in &other.bounds {
            self.insert(&AffineForm::new(l.clone(), c.clone()));
        }
    }

    fn orders(&self) -> Vec<AffineForm> {
        self.bounds.iter().map(|(l, c)| AffineForm::new(l.clone(), c.clone())).collect()
    }

    /// Whether a constant (order 0) piece may be missing.
    pub fn hides_constant(&self) -> bool {
        self.bounds.get(&LinearForm::zero()).is_some_and(|c| *c >= 0)
    }
}

impl Serialize for Tail {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.orders().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tail {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<AffineForm> = Vec::deserialize(d)?;
        let mut t = Tail::none();
        for o in &v {
            t.insert(o);
        }
        Ok(t)
    }
}

/// A germ of polyhomogeneous symbols `Σ c_α(z) x^{α(z)}` with explicit orders,
/// plus a record of what was truncated.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolGerm {
    #[serde(with = "piece_list")]
    pieces: BTreeMap<AffineForm, ZetaCoefficient>,
    tail: Tail,
}

mod piece_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<AffineForm, ZetaCoefficient>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&AffineForm, &ZetaCoefficient)> = m.iter().collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<AffineForm, ZetaCoefficient>, D::Error> {
        let v: Vec<(AffineForm, ZetaCoefficient)> = Vec::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

impl SymbolGerm {
    pub fn zero() -> Self {
        SymbolGerm::default()
    }

    pub fn one() -> Self {
        SymbolGerm::monomial(AffineForm::constant(Rational::new()), ZetaCoefficient::one()).expect("x^0 is admissible")
    }

    /// `c · x^{order}`.
    pub fn monomial(order: AffineForm, c: ZetaCoefficient) -> Result<Self> {
        let mut s = SymbolGerm::zero();
        s.add_piece(order, c)?;
        Ok(s)
    }

    /// `x^{order}` with unit coefficient.
    pub fn power(order: AffineForm) -> Result<Self> {
        SymbolGerm::monomial(order, ZetaCoefficient::one())
    }

    /// Polynomial `Σ c_i x^i`, coefficients lowest degree first.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        let mut s = SymbolGerm::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if *c != 0 {
                s.add_piece(AffineForm::constant(Rational::from(i)), ZetaCoefficient::from_rational(c.clone()))
                    .expect("polynomial orders are admissible");
            }
        }
        s
    }

    pub fn add_piece(&mut self, order: AffineForm, c: ZetaCoefficient) -> Result<()> {
        if !admissible(&order) {
            return Err(Error::InadmissibleOrder(order.to_string()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.pieces.entry(order.clone()).or_default();
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.pieces.remove(&order);
        }
        Ok(())
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&AffineForm, &ZetaCoefficient)> {
        self.pieces.iter()
    }

    pub fn piece(&self, order: &AffineForm) -> Option<&ZetaCoefficient> {
        self.pieces.get(order)
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn tail_mut(&mut self) -> &mut Tail {
        &mut self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn add(&self, other: &SymbolGerm) -> SymbolGerm {
        let mut out = self.clone();
        for (o, c) in &other.pieces {
            out.add_piece(o.clone(), c.clone()).expect("orders already admissible");
        }
        out.tail.merge(&other.tail);
        out
    }

    pub fn scale(&self, c: &ZetaCoefficient) -> SymbolGerm {
        let mut out = SymbolGerm { pieces: BTreeMap::new(), tail: self.tail.clone() };
        for (o, d) in &self.pieces {
            out.add_piece(o.clone(), d.mul(c)).expect("orders already admissible");
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> SymbolGerm {
        self.scale(&ZetaCoefficient::from_rational(r.clone()))
    }

    /// Order forms and coefficient supports.
    pub fn support(&self) -> Subspace {
        let mut forms = Vec::new();
        for (o, c) in &self.pieces {
            if !o.linear.is_zero() {
                forms.push(o.linear.clone());
            }
            forms.extend(c.forms());
        }
        for (l, _) in self.tail.bounds() {
            if !l.is_zero() {
                forms.push(l.clone());
            }
        }
        Subspace::new(forms)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.support().vars()
    }

    /// Product of `Q`-independent symbols.
    pub fn mul(&self, other: &SymbolGerm, q: &InnerProduct) -> Result<SymbolGerm> {
        if !independent(q, self, other) {
            return Err(Error::LocalityViolation { left: self.to_string(), right: other.to_string() });
        }
        self.mul_unchecked(other)
    }

    /// Product without the independence check; orders are still checked.
    pub fn mul_unchecked(&self, other: &SymbolGerm) -> Result<SymbolGerm> {
        let mut out = SymbolGerm::zero();
        for (oa, ca) in &self.pieces {
            for (ob, cb) in &other.pieces {
                out.add_piece(oa + ob, ca.mul(cb))?;
            }
        }
        for t in self.tail.orders() {
            for ob in other.pieces.keys() {
                out.tail.insert(&(&t + ob));
            }
            for u in other.tail.orders() {
                out.tail.insert(&(&t + &u));
            }
        }
        for u in other.tail.orders() {
            for oa in self.pieces.keys() {
                out.tail.insert(&(oa + &u));
            }
        }
        Ok(out)
    }

    /// The coefficient of `x^0`.
    pub fn fp_infinity(&self) -> Result<ZetaCoefficient> {
        if self.tail.hides_constant() {
            return Err(Error::InsufficientDepth("the constant piece was truncated".into()));
        }
        Ok(self.pieces.get(&AffineForm::constant(Rational::new())).cloned().unwrap_or_default())
    }

    /// Pull-back by `x ↦ x + a`, re-expanded to `depth` binomial terms per piece.
    pub fn shift_expansion(&self, a: &Rational, depth: u32) -> Result<SymbolGerm> {
        if *a == 0 {
            return Ok(self.clone());
        }
        let mut out = SymbolGerm { pieces: BTreeMap::new(), tail: self.tail.clone() };
        for (o, c) in &self.pieces {
            let polynomial = o.linear.is_zero();
            let top = if polynomial { as_i64(&o.constant).unwrap_or(0) as u32 } else { depth };
            // C(β, i) a^i as a germ in z
            let mut binom = Poly::one();
            let beta = Poly::from_affine(&o.linear, &o.constant);
            let mut a_pow = Rational::from(1);
            for i in 0..=top {
                let coeff = Germ::from_poly(binom.scale_rat(&a_pow));
                out.add_piece(o.shift(&Rational::from(-(i as i64))), c.mul_germ(&coeff))?;
                let next = beta.sub(&Poly::from_rational(Rational::from(i)));
                binom = binom.mul(&next).scale_rat(&Rational::from((1, i + 1)));
                a_pow *= a;
            }
            if !polynomial {
                out.tail.insert(&o.shift(&Rational::from(-(depth as i64) - 1)));
            }
        }
        Ok(out)
    }

    /// `d/dx`.
    pub fn differentiate(&self) -> SymbolGerm {
        let mut out = SymbolGerm::zero();
        for (o, c) in &self.pieces {
            if o.linear.is_zero() && o.constant == 0 {
                continue;
            }
            let alpha = Germ::from_poly(Poly::from_affine(&o.linear, &o.constant));
            out.add_piece(o.shift(&Rational::from(-1)), c.mul_germ(&alpha)).expect("derivative orders stay admissible");
        }
        for t in self.tail.orders() {
            out.tail.insert(&t.shift(&Rational::from(-1)));
        }
        out
    }

    /// Exact value at the integer `n` and rational point `z`; every order
    /// must be an integer there.
    pub fn evaluate_exact(&self, n: &Integer, z: &BTreeMap<u32, Rational>) -> Result<CoeffPoly> {
        if !self.is_exact() {
            return Err(Error::InsufficientDepth("cannot evaluate a truncated symbol".into()));
        }
        let x = Rational::from(n);
        let mut acc = CoeffPoly::zero();
        for (o, c) in &self.pieces {
            let e = o.eval(z);
            let Some(e) = as_i64(&e) else {
                return Err(Error::Unsupported(format!("non-integer order {e} in exact evaluation")));
            };
            let p = rat_pow(&x, e)?;
            acc += &c.evaluate_exact(z)?.scale(&p);
        }
        Ok(acc)
    }

    /// Numeric value of the retained pieces at `x` and the point `z`.
    pub fn evaluate_numeric(&self, x: &Float, z: &BTreeMap<u32, Rational>, bits: u32) -> Result<Float> {
        let lx = Float::with_val(bits, x.ln_ref());
        let mut acc = Float::new(bits);
        for (o, c) in &self.pieces {
            let e = Float::with_val(bits, o.eval(z));
            let p = Float::with_val(bits, (e * &lx).exp_ref());
            acc += c.evaluate_numeric(z, bits)? * p;
        }
        Ok(acc)
    }
}

/// Independence of symbols: `Q`-orthogonal supports.
pub fn independent(q: &InnerProduct, a: &SymbolGerm, b: &SymbolGerm) -> bool {
    spans_orthogonal(q, &a.support(), &b.support())
}

impl fmt::Display for SymbolGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() && self.tail.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (o, c) in &self.pieces {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·x^({o})")?;
        }
        for (l, c) in self.tail.bounds() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "O(x^({}))", AffineForm::new(l.clone(), c.clone()))?;
        }
        Ok(())
    }
}
