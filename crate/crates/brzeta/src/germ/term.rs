use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::linear::{AffineForm, LinearForm};
use crate::numerics::{rat_pow, CoeffPoly};
use crate::{Error, Result};

/// An unknown factor standing for discarded higher-order data: some germ
/// in the `support` coordinates whose homogeneous components all have degree
/// at least `min_degree`. `holomorphic` records that it has no poles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Unknown {
    pub support: BTreeSet<u32>,
    pub min_degree: i64,
    pub holomorphic: bool,
}

impl Unknown {
    pub fn mul(&self, other: &Unknown) -> Unknown {
        Unknown {
            support: self.support.union(&other.support).copied().collect(),
            min_degree: self.min_degree + other.min_degree,
            holomorphic: self.holomorphic && other.holomorphic,
        }
    }
}

/// `num / (Π L_i^{m_i} · Π (1 + ℓ_j)^{n_j})`, optionally times an [`Unknown`].
///
/// Pole forms are normalised to leading coefficient 1 and unit forms to
/// constant 1; the scalars are absorbed into the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermTerm {
    pub num: Poly,
    pub poles: Vec<(LinearForm, u32)>,
    pub units: Vec<(LinearForm, u32)>,
    pub unknown: Option<Unknown>,
}

pub(crate) type TermKey = (Vec<(LinearForm, u32)>, Vec<(LinearForm, u32)>, Option<Unknown>);

fn merge(list: Vec<(LinearForm, u32)>) -> Vec<(LinearForm, u32)> {
    let mut map: BTreeMap<LinearForm, u32> = BTreeMap::new();
    for (f, m) in list {
        if m > 0 {
            *map.entry(f).or_insert(0) += m;
        }
    }
    map.into_iter().collect()
}

impl GermTerm {
    pub fn polynomial(num: Poly) -> Self {
        GermTerm { num, poles: Vec::new(), units: Vec::new(), unknown: None }
    }

    /// Builds and normalises a term. Pole forms must be nonzero; unit forms
    /// must have nonzero constant.
    pub fn new(num: Poly, poles: Vec<(LinearForm, u32)>, units: Vec<(AffineForm, u32)>) -> Result<Self> {
        let mut scale = Rational::from(1);
        let mut ps = Vec::new();
        for (f, m) in poles {
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let (c, g) = f.normalized();
            scale *= rat_pow(&c, -(m as i64))?;
            ps.push((g, m));
        }
        let mut us = Vec::new();
        for (a, m) in units {
            if !a.is_unit_at_zero() {
                return Err(Error::Invalid(format!("unit form {a} vanishes at zero")));
            }
            scale *= rat_pow(&a.constant, -(m as i64))?;
            if !a.linear.is_zero() {
                let inv = Rational::from(a.constant.recip_ref());
                us.push((a.linear.scale(&inv), m));
            }
        }
        Ok(GermTerm { num: num.scale_rat(&scale), poles: merge(ps), units: merge(us), unknown: None })
    }

    pub fn with_unknown(mut self, u: Unknown) -> Self {
        self.unknown = Some(match self.unknown {
            None => u,
            Some(v) => v.mul(&u),
        });
        self
    }

    pub(crate) fn key(&self) -> TermKey {
        (self.poles.clone(), self.units.clone(), self.unknown.clone())
    }

    pub(crate) fn from_key(key: TermKey, num: Poly) -> Self {
        GermTerm { num, poles: key.0, units: key.1, unknown: key.2 }
    }

    pub fn pole_order(&self) -> u32 {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    /// Lowest homogeneous degree present in the known part (units count as degree ≥ 0).
    pub fn known_min_degree(&self) -> Option<i64> {
        self.num.min_degree().map(|d| d as i64 - self.pole_order() as i64)
    }

    pub fn min_degree(&self) -> Option<i64> {
        let k = self.known_min_degree()?;
        Some(k + self.unknown.as_ref().map_or(0, |u| u.min_degree))
    }

    pub fn mul(&self, other: &GermTerm) -> GermTerm {
        let mut poles = self.poles.clone();
        poles.extend(other.poles.iter().cloned());
        let mut units = self.units.clone();
        units.extend(other.units.iter().cloned());
        let unknown = match (&self.unknown, &other.unknown) {
            (None, None) => None,
            (Some(u), None) | (None, Some(u)) => Some(u.clone()),
            (Some(u), Some(v)) => Some(u.mul(v)),
        };
        GermTerm { num: self.num.mul(&other.num), poles: merge(poles), units: merge(units), unknown }
    }

    /// Variables of the known part.
    pub fn known_vars(&self) -> BTreeSet<u32> {
        let mut v = self.num.vars();
        for (f, _) in self.poles.iter().chain(self.units.iter()) {
            v.extend(f.vars());
        }
        v
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut v = self.known_vars();
        if let Some(u) = &self.unknown {
            v.extend(u.support.iter().copied());
        }
        v
    }

    /// Linear forms spanning the syntactic dependence space of the term.
    pub fn forms(&self) -> Vec<LinearForm> {
        let mut out: Vec<LinearForm> = self.num.vars().into_iter().map(LinearForm::var).collect();
        out.extend(self.poles.iter().map(|(f, _)| f.clone()));
        out.extend(self.units.iter().map(|(f, _)| f.clone()));
        if let Some(u) = &self.unknown {
            out.extend(u.support.iter().map(|&i| LinearForm::var(i)));
        }
        out
    }

    /// Divides the numerator by pole forms where it is exactly divisible.
    pub fn cancel(&self) -> GermTerm {
        let mut num = self.num.clone();
        let mut poles = Vec::new();
        for (f, m) in &self.poles {
            let mut left = *m;
            while left > 0 {
                match num.divide_by_linear(f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                poles.push((f.clone(), left));
            }
        }
        GermTerm { num, poles, units: self.units.clone(), unknown: self.unknown.clone() }
    }

    pub fn evaluate_point(&self, z: &BTreeMap<u32, Rational>) -> Result<CoeffPoly> {
        if self.unknown.is_some() {
            return Err(Error::InsufficientTruncation("cannot evaluate an unknown remainder".into()));
        }
        let mut denom = Rational::from(1);
        for (f, m) in &self.poles {
            let v = f.eval(z);
            if v == 0 {
                return Err(Error::PoleAtPoint(format!("{f} vanishes")));
            }
            denom *= rat_pow(&v, *m as i64)?;
        }
        for (f, m) in &self.units {
            let v = f.eval(z) + 1u32;
            if v == 0 {
                return Err(Error::PoleAtPoint(format!("1 + {f} vanishes")));
            }
            denom *= rat_pow(&v, *m as i64)?;
        }
        Ok(self.num.eval(z).scale(&denom.recip()))
    }
}

impl fmt::Display for GermTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if !self.poles.is_empty() || !self.units.is_empty() {
            write!(f, "/(")?;
            let mut first = true;
            for (l, m) in &self.poles {
                if !first {
                    write!(f, "·")?;
                }
                first = false;
                write!(f, "({l})")?;
                if *m > 1 {
                    write!(f, "^{m}")?;
                }
            }
            for (l, m) in &self.units {
                if !first {
                    write!(f, "·")?;
                }
                first = false;
                write!(f, "(1 + {l})")?;
                if *m > 1 {
                    write!(f, "^{m}")?;
                }
            }
            write!(f, ")")?;
        }
        if let Some(u) = &self.unknown {
            let s: Vec<String> = u.support.iter().map(|i| format!("z{i}")).collect();
            write!(f, "·R[{}; deg ≥ {}{}]", s.join(","), u.min_degree, if u.holomorphic { "; hol" } else { "" })?;
        }
        Ok(())
    }
}
