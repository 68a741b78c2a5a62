use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::germ::{Germ, Poly};
use crate::linear::{AffineForm, LinearForm};
use crate::numerics::{as_i64, bernoulli, factorial, special, CoeffPoly, FormalConstant};
use crate::{Error, Result};

/// Transcendental factor of a coefficient, with a nonconstant argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "argument", rename_all = "snake_case")]
pub enum SpecialFactor {
    /// `ζ(a(z))`
    Zeta(AffineForm),
    /// `∫_0^1 χ(y) y^{a(z)} dy`
    ChiMoment(AffineForm),
}

impl SpecialFactor {
    pub fn argument(&self) -> &AffineForm {
        match self {
            SpecialFactor::Zeta(a) | SpecialFactor::ChiMoment(a) => a,
        }
    }

    /// Lower bound for the homogeneous degree of the factor's Laurent expansion.
    pub fn min_degree(&self) -> i64 {
        match self {
            SpecialFactor::Zeta(a) => match as_i64(&a.constant) {
                Some(1) => -1,
                Some(m) if m < 0 && m % 2 == 0 => 1,
                _ => 0,
            },
            SpecialFactor::ChiMoment(_) => 0,
        }
    }

    /// Laurent expansion through homogeneous degree `through`.
    pub fn expand(&self, through: i64) -> Result<Germ> {
        let a = self.argument();
        let l = &a.linear;
        let lp = Poly::from_linear(l);
        let mut out = Poly::zero();
        let mut power = Poly::one();
        match self {
            SpecialFactor::Zeta(_) => {
                let Some(m) = as_i64(&a.constant) else {
                    return Err(Error::Unsupported(format!("ζ expansion at the non-integer point {}", a.constant)));
                };
                for n in 0..=through {
                    let c = zeta_taylor_coefficient(m, n as u32);
                    out.add_assign(&power.scale(&c));
                    power = power.mul(&lp);
                }
                let mut g = Germ::from_poly(out);
                if m == 1 && through >= -1 {
                    g = g.add(&Germ::pole(l)?);
                }
                Ok(g)
            }
            SpecialFactor::ChiMoment(_) => {
                for j in 0..=through {
                    let c = CoeffPoly::constant(FormalConstant::ChiMoment {
                        exponent: a.constant.clone(),
                        log_power: j as u32,
                    })
                    .scale(&Rational::from((1, factorial(j as u32))));
                    out.add_assign(&power.scale(&c));
                    power = power.mul(&lp);
                }
                Ok(Germ::from_poly(out))
            }
        }
    }

    /// Exact value at a point where the argument is an integer (for ζ).
    pub fn evaluate_exact(&self, z: &BTreeMap<u32, Rational>) -> Result<CoeffPoly> {
        let v = self.argument().eval(z);
        match self {
            SpecialFactor::Zeta(_) => zeta_value(&v),
            SpecialFactor::ChiMoment(_) => {
                Ok(CoeffPoly::constant(FormalConstant::ChiMoment { exponent: v, log_power: 0 }))
            }
        }
    }

    pub fn evaluate_numeric(&self, z: &BTreeMap<u32, Rational>, bits: u32) -> Result<Float> {
        let v = Float::with_val(bits, self.argument().eval(z));
        match self {
            SpecialFactor::Zeta(_) => {
                if v == 1 {
                    return Err(Error::PoleAtPoint("ζ(1)".into()));
                }
                Ok(special::zeta(&v, bits))
            }
            SpecialFactor::ChiMoment(_) => Ok(special::chi_moment(&v, 0, bits)),
        }
    }
}

/// `ζ(m)` for an integer `m ≤ 0` as a rational.
pub fn zeta_at_nonpositive(m: i64) -> Rational {
    debug_assert!(m <= 0);
    if m == 0 {
        return Rational::from((-1, 2));
    }
    let k = (1 - m) as usize;
    -bernoulli(k) / Rational::from(k)
}

/// `ζ(v)` as an exact coefficient: rational for `v ≤ 0`, formal for `v ≥ 2`.
pub fn zeta_value(v: &Rational) -> Result<CoeffPoly> {
    match as_i64(v) {
        Some(1) => Err(Error::PoleAtPoint("ζ(1)".into())),
        Some(m) if m <= 0 => Ok(CoeffPoly::from_rational(zeta_at_nonpositive(m))),
        Some(m) => Ok(CoeffPoly::constant(FormalConstant::zeta_at(m))),
        None => Err(Error::Unsupported(format!("exact ζ at the non-integer point {v}"))),
    }
}

/// Coefficient of `ε^n` in `ζ(m + ε)` (regular part when `m = 1`).
fn zeta_taylor_coefficient(m: i64, n: u32) -> CoeffPoly {
    let inv_fact = Rational::from((1, factorial(n)));
    if m == 1 {
        // ζ(1+ε) = 1/ε + Σ (-1)^n γ_n ε^n / n!
        let c = CoeffPoly::constant(FormalConstant::stieltjes(n));
        return c.scale(&if n % 2 == 1 { -inv_fact } else { inv_fact });
    }
    if n == 0 {
        return zeta_value(&Rational::from(m)).expect("integer point other than 1");
    }
    CoeffPoly::constant(FormalConstant::zeta_deriv(n, m)).scale(&inv_fact)
}

/// Sum of germs times products of [`SpecialFactor`]s.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZetaCoefficient {
    terms: BTreeMap<Vec<SpecialFactor>, Germ>,
}

impl ZetaCoefficient {
    pub fn zero() -> Self {
        ZetaCoefficient::default()
    }

    pub fn one() -> Self {
        ZetaCoefficient::from_germ(Germ::one())
    }

    pub fn from_germ(g: Germ) -> Self {
        let mut c = ZetaCoefficient::zero();
        c.add_term(Vec::new(), g);
        c
    }

    pub fn from_rational(r: Rational) -> Self {
        ZetaCoefficient::from_germ(Germ::from_rational(r))
    }

    /// `ζ(a(z))`; constant arguments are evaluated on the spot.
    pub fn zeta(a: &AffineForm) -> Result<Self> {
        if a.linear.is_zero() {
            return Ok(ZetaCoefficient::from_germ(Germ::constant(zeta_value(&a.constant)?)));
        }
        Ok(ZetaCoefficient::special(SpecialFactor::Zeta(a.clone())))
    }

    pub fn chi_moment(a: &AffineForm) -> Self {
        if a.linear.is_zero() {
            return ZetaCoefficient::from_germ(Germ::constant(CoeffPoly::constant(FormalConstant::ChiMoment {
                exponent: a.constant.clone(),
                log_power: 0,
            })));
        }
        ZetaCoefficient::special(SpecialFactor::ChiMoment(a.clone()))
    }

    pub fn special(f: SpecialFactor) -> Self {
        let mut c = ZetaCoefficient::zero();
        c.add_term(vec![f], Germ::one());
        c
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<SpecialFactor>, &Germ)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut factors: Vec<SpecialFactor>, g: Germ) {
        factors.sort();
        let slot = self.terms.entry(factors.clone()).or_default();
        *slot = slot.add(&g);
        if slot.is_zero() {
            self.terms.remove(&factors);
        }
    }

    pub fn add(&self, other: &ZetaCoefficient) -> ZetaCoefficient {
        let mut out = self.clone();
        for (f, g) in &other.terms {
            out.add_term(f.clone(), g.clone());
        }
        out
    }

    pub fn neg(&self) -> ZetaCoefficient {
        self.scale_rat(&Rational::from(-1))
    }

    pub fn mul(&self, other: &ZetaCoefficient) -> ZetaCoefficient {
        let mut out = ZetaCoefficient::zero();
        for (fa, ga) in &self.terms {
            for (fb, gb) in &other.terms {
                let mut f = fa.clone();
                f.extend(fb.iter().cloned());
                out.add_term(f, ga.mul(gb));
            }
        }
        out
    }

    pub fn mul_germ(&self, g: &Germ) -> ZetaCoefficient {
        let mut out = ZetaCoefficient::zero();
        for (f, h) in &self.terms {
            out.add_term(f.clone(), h.mul(g));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> ZetaCoefficient {
        let mut out = ZetaCoefficient::zero();
        if *r == 0 {
            return out;
        }
        for (f, h) in &self.terms {
            out.add_term(f.clone(), h.scale_rat(r));
        }
        out
    }

    /// Linear forms spanning the dependence of the coefficient.
    pub fn forms(&self) -> Vec<LinearForm> {
        let mut out = Vec::new();
        for (f, g) in &self.terms {
            out.extend(f.iter().map(|s| s.argument().linear.clone()));
            out.extend(g.support().spanning);
        }
        out
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.forms().iter().flat_map(|f| f.vars()).collect()
    }

    /// Lower bound for the homogeneous degree of every term's Laurent expansion.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms
            .iter()
            .filter_map(|(f, g)| g.min_degree().map(|d| d + f.iter().map(SpecialFactor::min_degree).sum::<i64>()))
            .min()
    }

    /// Germ exact through homogeneous degree `through`; dropped data becomes a
    /// remainder supported on the coefficient's variables.
    pub fn expand(&self, through: i64) -> Result<Germ> {
        let mut out = Germ::zero();
        let mut dropped = BTreeSet::new();
        for (factors, g) in &self.terms {
            let Some(gmin) = g.min_degree() else { continue };
            let mins: Vec<i64> = factors.iter().map(SpecialFactor::min_degree).collect();
            let total: i64 = gmin + mins.iter().sum::<i64>();
            let vars: BTreeSet<u32> = factors.iter().flat_map(|f| f.argument().linear.vars()).chain(g.vars()).collect();
            if total > through {
                dropped.extend(vars);
                continue;
            }
            let mut prod = g.clone();
            for (f, m) in factors.iter().zip(&mins) {
                let budget = through - (total - m);
                prod = prod.mul(&f.expand(budget)?);
            }
            if !factors.is_empty() {
                dropped.extend(vars);
            }
            out = out.add(&prod);
        }
        if !dropped.is_empty() {
            out = out.add(&Germ::remainder(dropped, through + 1, false));
        }
        Ok(out)
    }

    pub fn evaluate_exact(&self, z: &BTreeMap<u32, Rational>) -> Result<CoeffPoly> {
        let mut acc = CoeffPoly::zero();
        for (factors, g) in &self.terms {
            let mut v = g.evaluate_point(z)?;
            for f in factors {
                v = &v * &f.evaluate_exact(z)?;
            }
            acc += &v;
        }
        Ok(acc)
    }

    pub fn evaluate_numeric(&self, z: &BTreeMap<u32, Rational>, bits: u32) -> Result<Float> {
        let mut acc = Float::new(bits);
        for (factors, g) in &self.terms {
            let mut v = g.evaluate_point(z)?.numeric_value(bits)?;
            for f in factors {
                v *= f.evaluate_numeric(z, bits)?;
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Display for SpecialFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialFactor::Zeta(a) => write!(f, "ζ({a})"),
            SpecialFactor::ChiMoment(a) => write!(f, "χ[{a}]"),
        }
    }
}

impl fmt::Display for ZetaCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (factors, g)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            for s in factors {
                write!(f, "{s}·")?;
            }
            write!(f, "[{g}]")?;
        }
        Ok(())
    }
}

impl Serialize for ZetaCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&Vec<SpecialFactor>, &Germ)> = self.terms.iter().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZetaCoefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(Vec<SpecialFactor>, Germ)> = Vec::deserialize(d)?;
        let mut c = ZetaCoefficient::zero();
        for (f, g) in v {
            c.add_term(f, g);
        }
        Ok(c)
    }
}
