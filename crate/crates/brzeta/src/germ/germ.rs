use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::term::{GermTerm, TermKey, Unknown};
use super::Poly;
use crate::linear::{spans_orthogonal, AffineForm, InnerProduct, LinearForm, Subspace};
use crate::numerics::{binomial, parse_rational, CoeffPoly};
use crate::{Error, Result};

/// Finite sum of [`GermTerm`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Germ {
    terms: Vec<GermTerm>,
}

impl Germ {
    pub fn zero() -> Self {
        Germ::default()
    }

    pub fn one() -> Self {
        Germ::from_poly(Poly::one())
    }

    pub fn constant(c: CoeffPoly) -> Self {
        Germ::from_poly(Poly::constant(c))
    }

    pub fn from_rational(r: Rational) -> Self {
        Germ::from_poly(Poly::from_rational(r))
    }

    pub fn from_poly(p: Poly) -> Self {
        Germ::from_terms(vec![GermTerm::polynomial(p)])
    }

    pub fn var(i: u32) -> Self {
        Germ::from_poly(Poly::var(i))
    }

    pub fn linear(l: &LinearForm) -> Self {
        Germ::from_poly(Poly::from_linear(l))
    }

    /// `1/L`.
    pub fn pole(l: &LinearForm) -> Result<Self> {
        Ok(Germ::from_terms(vec![GermTerm::new(Poly::one(), vec![(l.clone(), 1)], vec![])?]))
    }

    /// `1/a` for an affine form; a pole when `a(0) = 0`, a unit otherwise.
    pub fn reciprocal(a: &AffineForm) -> Result<Self> {
        if a.linear.is_zero() {
            if a.constant == 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(Germ::from_rational(Rational::from(a.constant.recip_ref())));
        }
        if a.is_homogeneous() {
            Germ::pole(&a.linear)
        } else {
            Ok(Germ::from_terms(vec![GermTerm::new(Poly::one(), vec![], vec![(a.clone(), 1)])?]))
        }
    }

    /// A lone remainder: unknown data in `support` of homogeneous degree `≥ min_degree`.
    pub fn remainder(support: BTreeSet<u32>, min_degree: i64, holomorphic: bool) -> Self {
        Germ::from_terms(vec![GermTerm::polynomial(Poly::one()).with_unknown(Unknown {
            support,
            min_degree,
            holomorphic,
        })])
    }

    pub fn from_terms(terms: Vec<GermTerm>) -> Self {
        let mut g = Germ { terms };
        g.simplify();
        g
    }

    pub fn terms(&self) -> &[GermTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges terms with equal denominators and drops zero numerators.
    pub fn simplify(&mut self) {
        // Terms carrying a remainder stand for distinct unknowns and are only
        // deduplicated up to a rational factor, never added.
        let mut map: BTreeMap<TermKey, Poly> = BTreeMap::new();
        let mut vague: Vec<GermTerm> = Vec::new();
        for t in self.terms.drain(..) {
            let t = if t.poles.is_empty() { t } else { t.cancel() };
            if t.num.is_zero() {
                continue;
            }
            if t.unknown.is_some() {
                if !vague.iter().any(|v| v.key() == t.key() && proportional(&v.num, &t.num)) {
                    vague.push(t);
                }
                continue;
            }
            map.entry(t.key()).or_default().add_assign(&t.num);
        }
        let mut terms: Vec<GermTerm> =
            map.into_iter().filter(|(_, p)| !p.is_zero()).map(|(k, p)| GermTerm::from_key(k, p)).collect();
        vague.sort_by_key(|a| a.key());
        terms.extend(vague);
        self.terms = terms;
    }

    pub fn add(&self, other: &Germ) -> Germ {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Germ::from_terms(t)
    }

    pub fn neg(&self) -> Germ {
        self.scale_rat(&Rational::from(-1))
    }

    pub fn sub(&self, other: &Germ) -> Germ {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffPoly) -> Germ {
        Germ::from_terms(self.terms.iter().map(|t| GermTerm { num: t.num.scale(c), ..t.clone() }).collect())
    }

    pub fn scale_rat(&self, r: &Rational) -> Germ {
        Germ::from_terms(self.terms.iter().map(|t| GermTerm { num: t.num.scale_rat(r), ..t.clone() }).collect())
    }

    pub fn mul(&self, other: &Germ) -> Germ {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.mul(b));
            }
        }
        Germ::from_terms(out)
    }

    pub fn mul_poly(&self, p: &Poly) -> Germ {
        Germ::from_terms(self.terms.iter().map(|t| GermTerm { num: t.num.mul(p), ..t.clone() }).collect())
    }

    /// Span of every form syntactically present.
    pub fn support(&self) -> Subspace {
        Subspace::new(self.terms.iter().flat_map(|t| t.forms()).collect())
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms.iter().flat_map(|t| t.vars()).collect()
    }

    pub fn has_units(&self) -> bool {
        self.terms.iter().any(|t| !t.units.is_empty())
    }

    pub fn has_unknown(&self) -> bool {
        self.terms.iter().any(|t| t.unknown.is_some())
    }

    pub fn max_pole_order(&self) -> u32 {
        self.terms.iter().map(|t| t.pole_order()).max().unwrap_or(0)
    }

    /// Lowest homogeneous degree over all terms (`None` for the zero germ).
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.iter().filter_map(|t| t.min_degree()).min()
    }

    /// Largest degree through which the germ is known exactly; `None` when exact.
    pub fn trusted_degree(&self) -> Option<i64> {
        self.terms.iter().filter(|t| t.unknown.is_some()).filter_map(|t| t.min_degree()).min().map(|d| d - 1)
    }

    /// Known terms of the germ, i.e. with the remainders dropped.
    pub fn known_part(&self) -> Germ {
        Germ { terms: self.terms.iter().filter(|t| t.unknown.is_none()).cloned().collect() }
    }

    /// Replaces unit factors by geometric series so that every homogeneous
    /// component of degree `≤ through` is exact. Dropped data becomes a remainder.
    pub fn expand_units(&self, through: i64) -> Germ {
        let mut out = Vec::new();
        let mut dropped: BTreeSet<u32> = BTreeSet::new();
        let mut any_dropped = false;
        for t in &self.terms {
            if t.unknown.is_some() || t.units.is_empty() {
                out.push(t.clone());
                continue;
            }
            let order = t.pole_order() as i64;
            let Some(nmin) = t.num.min_degree() else { continue };
            let budget = through - (nmin as i64 - order);
            let num_cap = through + order;
            if budget < 0 {
                any_dropped = true;
                dropped.extend(t.vars());
                continue;
            }
            let mut series = Poly::one();
            for (l, m) in &t.units {
                series = series.mul_truncated(&unit_series(l, *m, budget as u32), budget);
            }
            let num = t.num.mul_truncated(&series, num_cap);
            any_dropped = true;
            dropped.extend(t.vars());
            out.push(GermTerm { num, poles: t.poles.clone(), units: Vec::new(), unknown: None });
        }
        let mut g = Germ::from_terms(out);
        if any_dropped {
            g = g.add(&Germ::remainder(dropped, through + 1, false));
        }
        g
    }

    /// Constant term of a holomorphic germ.
    pub fn evaluate_zero(&self) -> Result<CoeffPoly> {
        let mut acc = CoeffPoly::zero();
        for t in &self.terms {
            if let Some(u) = &t.unknown {
                let kmin = t.known_min_degree().unwrap_or(0).max(0);
                if u.holomorphic && t.poles.is_empty() && u.min_degree + kmin >= 1 {
                    continue;
                }
                return Err(Error::InsufficientTruncation(format!("constant term of {t} is not determined")));
            }
            let c = t.cancel();
            if !c.poles.is_empty() {
                return Err(Error::PoleAtPoint(format!("term {c} has a pole at 0")));
            }
            acc += &c.num.constant_term();
        }
        Ok(acc)
    }

    pub fn evaluate_point(&self, z: &BTreeMap<u32, Rational>) -> Result<CoeffPoly> {
        let mut acc = CoeffPoly::zero();
        for t in &self.terms {
            acc += &t.evaluate_point(z)?;
        }
        Ok(acc)
    }

    /// Exact equality as rational functions, by clearing all denominators.
    /// Germs carrying remainders are compared through their trusted degree only.
    pub fn equals(&self, other: &Germ) -> Result<bool> {
        let d = self.sub(other);
        if let Some(t) = d.trusted_degree() {
            return d.agrees_through(&Germ::zero(), t);
        }
        // factor key: (form, constant) with constant 0 for poles, 1 for units
        let mut denom: BTreeMap<(LinearForm, bool), u32> = BTreeMap::new();
        for t in d.terms() {
            for (f, m) in &t.poles {
                let e = denom.entry((f.clone(), false)).or_insert(0);
                *e = (*e).max(*m);
            }
            for (f, m) in &t.units {
                let e = denom.entry((f.clone(), true)).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut total = Poly::zero();
        for t in d.terms() {
            let mut p = t.num.clone();
            for ((f, unit), m) in &denom {
                let list = if *unit { &t.units } else { &t.poles };
                let have = list.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if *m > have {
                    let factor = if *unit { Poly::from_affine(f, &Rational::from(1)) } else { Poly::from_linear(f) };
                    p = p.mul(&factor.pow(m - have));
                }
            }
            total.add_assign(&p);
        }
        Ok(total.is_zero())
    }

    /// Whether `self − other` has no homogeneous component of degree `≤ through`.
    pub fn agrees_through(&self, other: &Germ, through: i64) -> Result<bool> {
        let d = self.sub(other);
        if let Some(t) = d.trusted_degree() {
            if t < through {
                return Err(Error::InsufficientTruncation(format!("difference trusted only through degree {t}")));
            }
        }
        let d = d.expand_units(through).known_part();
        let mut denom: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for t in d.terms() {
            for (f, m) in &t.poles {
                let e = denom.entry(f.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let order: i64 = denom.values().map(|m| *m as i64).sum();
        let cap = through + order;
        let mut total = Poly::zero();
        for t in d.terms() {
            let mut p = t.num.truncate(cap);
            for (f, m) in &denom {
                let have = t.poles.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if *m > have {
                    p = p.mul_truncated(&Poly::from_linear(f).pow(m - have), cap);
                }
            }
            total.add_assign(&p);
        }
        Ok(total.truncate(cap).is_zero())
    }
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    let Some((m, ca)) = a.terms().next() else { return b.is_zero() };
    let cb = b.coefficient(m);
    let (Some(ra), Some(rb)) = (ca.as_rational(), cb.as_rational()) else { return a == b };
    if rb == 0 {
        return false;
    }
    let r = Rational::from(&rb / &ra);
    a.scale_rat(&r) == *b
}

/// Truncated `(1 + ℓ)^{-m}`.
fn unit_series(l: &LinearForm, m: u32, through: u32) -> Poly {
    let lp = Poly::from_linear(l);
    let mut out = Poly::zero();
    let mut power = Poly::one();
    for n in 0..=through {
        // C(m+n-1, n) (-1)^n
        let c = Rational::from(binomial(m + n - 1, n));
        let c = if n % 2 == 1 { -c } else { c };
        out.add_assign(&power.scale_rat(&c));
        power = power.mul(&lp);
    }
    out
}

/// Both germs have `Q`-orthogonal supports.
pub fn independent(q: &InnerProduct, a: &Germ, b: &Germ) -> bool {
    spans_orthogonal(q, &a.support(), &b.support())
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    num: Poly,
    poles: Vec<(LinearForm, u32)>,
    units: Vec<(LinearForm, String, u32)>,
    trusted_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    remainder: Option<Unknown>,
}

#[derive(Serialize, Deserialize)]
struct GermJson {
    terms: Vec<TermJson>,
}

impl Serialize for Germ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|t| TermJson {
                num: t.num.clone(),
                poles: t.poles.clone(),
                units: t.units.iter().map(|(f, m)| (f.clone(), "1".to_string(), *m)).collect(),
                trusted_degree: t.unknown.as_ref().and_then(|_| t.min_degree()).map(|d| d - 1),
                remainder: t.unknown.clone(),
            })
            .collect();
        GermJson { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Germ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let g = GermJson::deserialize(d)?;
        let mut terms = Vec::new();
        for t in g.terms {
            let mut units = Vec::new();
            for (f, c, m) in t.units {
                let c = parse_rational(&c).map_err(D::Error::custom)?;
                units.push((AffineForm::new(f, c), m));
            }
            let mut term = GermTerm::new(t.num, t.poles, units).map_err(D::Error::custom)?;
            if let Some(u) = t.remainder {
                term = term.with_unknown(u);
            }
            terms.push(term);
        }
        Ok(Germ::from_terms(terms))
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
