use std::collections::{BTreeMap, BTreeSet};

use super::term::{GermTerm, Unknown};
use super::{partial_fraction_reduce, Germ, Poly};
use crate::linear::matrix::{inverse, rows_of};
use crate::linear::{orthogonal_complement, spans_orthogonal, InnerProduct, LinearForm, Subspace};
use crate::numerics::CoeffPoly;
use crate::{Error, Result};

/// Scratch variable indices for adapted coordinates.
const SCRATCH: u32 = 0x4000_0000;

/// Holomorphic and polar parts of a germ.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub holomorphic: Germ,
    pub polar: Germ,
}

/// Splits `g` into `π₊(g) + π₋(g)`. Unit factors are expanded so that the
/// holomorphic part is exact through homogeneous degree `through`.
pub fn decompose(q: &InnerProduct, g: &Germ, through: i64) -> Result<Decomposition> {
    let g = if g.has_units() { g.expand_units(through) } else { g.clone() };
    let mut hol = Vec::new();
    let mut polar = Vec::new();
    let mut vague = Vec::new();
    for t in partial_fraction_reduce(&g).terms() {
        if t.unknown.is_some() {
            vague.push(t.clone());
            continue;
        }
        let (h, p) = decompose_term(q, &t.num, &t.poles)?;
        hol.push(GermTerm::polynomial(h));
        polar.extend(p);
    }
    let mut holomorphic = Germ::from_terms(hol);
    let mut polar = Germ::from_terms(polar);
    for t in vague {
        let u = t.unknown.clone().unwrap();
        let known = GermTerm { unknown: None, ..t.clone() };
        if known.poles.is_empty() && known.units.is_empty() && u.holomorphic {
            holomorphic = holomorphic.add(&Germ::from_terms(vec![t]));
            continue;
        }
        let unknown_space = Subspace::coordinates(u.support.iter().copied());
        if !spans_orthogonal(q, &Subspace::new(known.forms()), &unknown_space) {
            return Err(Error::InsufficientTruncation(format!("remainder of {t} is entangled with its polar factor")));
        }
        // π₊(K·U) = π₊(K)·π₊(U) for independent factors
        let plus_u = Unknown { support: u.support.clone(), min_degree: u.min_degree.max(0), holomorphic: true };
        let known_plus = project_plus_through(q, &Germ::from_terms(vec![known]), through - plus_u.min_degree)?;
        let h = Germ::from_terms(known_plus.terms().iter().map(|k| k.clone().with_unknown(plus_u.clone())).collect());
        polar = polar.add(&Germ::from_terms(vec![t])).sub(&h);
        holomorphic = holomorphic.add(&h);
    }
    Ok(Decomposition { holomorphic, polar })
}

/// `π₊` exact through the trusted degree of `g` (degree 0 when `g` is exact).
pub fn project_plus(q: &InnerProduct, g: &Germ) -> Result<Germ> {
    project_plus_through(q, g, g.trusted_degree().unwrap_or(0).max(0))
}

pub fn project_plus_through(q: &InnerProduct, g: &Germ, through: i64) -> Result<Germ> {
    Ok(decompose(q, g, through)?.holomorphic)
}

pub fn project_minus(q: &InnerProduct, g: &Germ) -> Result<Germ> {
    Ok(decompose(q, g, g.trusted_degree().unwrap_or(0).max(0))?.polar)
}

/// Renormalised value `ev₀ ∘ π₊`.
pub fn renormalised_value(q: &InnerProduct, g: &Germ) -> Result<CoeffPoly> {
    project_plus_through(q, g, 0)?.evaluate_zero()
}

type PoleList = Vec<(LinearForm, u32)>;

/// Decomposes `num / Π L_i^{m_i}` with independent `L_i`.
fn decompose_term(q: &InnerProduct, num: &Poly, poles: &PoleList) -> Result<(Poly, Vec<GermTerm>)> {
    if poles.is_empty() {
        return Ok((num.clone(), Vec::new()));
    }
    let pole_forms: Vec<LinearForm> = poles.iter().map(|(f, _)| f.clone()).collect();
    let mut ambient: BTreeSet<u32> = num.vars();
    for f in &pole_forms {
        ambient.extend(f.vars());
    }
    let complement = orthogonal_complement(q, &Subspace::new(pole_forms.clone()), &ambient)?;
    let mut basis = pole_forms.clone();
    basis.extend(complement.spanning);
    let vars: Vec<u32> = ambient.iter().copied().collect();
    if basis.len() != vars.len() {
        return Err(Error::Invalid("pole forms are not independent".into()));
    }
    let inv = inverse(&rows_of(&basis, &vars)).ok_or_else(|| Error::Invalid("singular adapted basis".into()))?;
    let k = poles.len();
    // z_a = Σ_r inv[a][r] w_r
    let mut to_w: BTreeMap<u32, Poly> = BTreeMap::new();
    for (a, v) in vars.iter().enumerate() {
        let mut p = Poly::zero();
        for (r, c) in inv[a].iter().enumerate() {
            if *c != 0 {
                p.add_assign(&Poly::var(SCRATCH + r as u32).scale_rat(c));
            }
        }
        to_w.insert(*v, p);
    }
    let in_w = num.substitute(&to_w);
    let mut powers = Powers::new(&basis);
    let mut hol = Poly::zero();
    let mut polar: BTreeMap<PoleList, Poly> = BTreeMap::new();
    let mut mixed: BTreeMap<PoleList, Poly> = BTreeMap::new();
    for (mono, c) in in_w.terms() {
        let a: Vec<u32> = (0..basis.len()).map(|r| mono.exponent(SCRATCH + r as u32)).collect();
        let remaining: PoleList =
            (0..k).filter(|&r| a[r] < poles[r].1).map(|r| (basis[r].clone(), poles[r].1 - a[r])).collect();
        let leftover = (0..k).any(|r| a[r] > poles[r].1);
        let mut back = Poly::constant(c.clone());
        for r in 0..basis.len() {
            let e = if r < k { a[r].saturating_sub(poles[r].1) } else { a[r] };
            if e > 0 {
                back = back.mul(powers.get(r, e));
            }
        }
        if remaining.is_empty() {
            hol.add_assign(&back);
        } else if !leftover {
            polar.entry(remaining).or_default().add_assign(&back);
        } else {
            mixed.entry(remaining).or_default().add_assign(&back);
        }
    }
    let mut out: Vec<GermTerm> =
        polar.into_iter().map(|(p, n)| GermTerm { num: n, poles: p, units: vec![], unknown: None }).collect();
    for (p, n) in mixed {
        let (h, more) = decompose_term(q, &n, &p)?;
        hol.add_assign(&h);
        out.extend(more);
    }
    Ok((hol, out))
}

/// Cached powers of the adapted basis forms as polynomials in `z`.
struct Powers<'a> {
    basis: &'a [LinearForm],
    cache: BTreeMap<(usize, u32), Poly>,
}

impl<'a> Powers<'a> {
    fn new(basis: &'a [LinearForm]) -> Self {
        Powers { basis, cache: BTreeMap::new() }
    }

    fn get(&mut self, r: usize, e: u32) -> &Poly {
        if !self.cache.contains_key(&(r, e)) {
            let p = if e == 1 {
                Poly::from_linear(&self.basis[r])
            } else {
                let lower = self.get(r, e - 1).clone();
                lower.mul(&Poly::from_linear(&self.basis[r]))
            };
            self.cache.insert((r, e), p);
        }
        &self.cache[&(r, e)]
    }
}
