//! Germs from numeric values.
//!
//! [`fit_germ`] is a plain least-squares fit on the ansatz `z^m / Π L`.
//! [`numeric_renormalised`] uses the splitting instead: the degree-zero part
//! of a germ with linear poles is a constant plus polar germs
//! `h(u) / Π L^e`, with `u` coordinates orthogonal to the `L`s, and the
//! renormalised value is that constant. The degree-zero part along a ray
//! `t·w` is the `t^0` Laurent coefficient, read off from samples on a small
//! Chebyshev grid in `t`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::decorate::forest_vars;
use super::exact::flatten_for;
use super::numeric::{numeric_forest_value, numeric_words_value, NumericConfig};
use super::poles::{candidate_poles, pole_order_bound};
use crate::algebra::{EsLetter, Forest, LinComb, Word};
use crate::germ::{renormalised_value, Germ, Monomial, Poly};
use crate::linear::matrix::{rank, rows_of};
use crate::linear::{orthogonal_complement, spans_orthogonal, InnerProduct, LinearForm, Subspace};
use crate::symbol::SumOperator;
use crate::{Error, Result};

/// Knobs for fitting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub numeric: NumericConfig,
    /// Chebyshev nodes per ray.
    pub nodes: u32,
    /// Half-width of the grid in `t`, as `1/radius_inverse`.
    pub radius_inverse: u32,
    /// Rays beyond the number of unknowns.
    pub extra_rays: u32,
    pub seed: u64,
    /// Columns whose independent part falls below this (relative) are dropped.
    pub drop_tolerance: f64,
    /// Kept columns this close to dependent make the model ill-conditioned.
    pub condition_floor: f64,
    /// Fitted coefficients below this are set to zero.
    pub snap: f64,
    /// Overrides the pole order bound derived from the forest.
    #[serde(default)]
    pub max_pole_order: Option<u32>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            numeric: NumericConfig { precision_bits: 128, cutoff: 48, depth: 24 },
            nodes: 12,
            radius_inverse: 16,
            extra_rays: 8,
            seed: 0x5eed,
            drop_tolerance: 1e-24,
            condition_floor: 1e-12,
            snap: 1e-30,
            max_pole_order: None,
        }
    }
}

impl FitConfig {
    /// About `1e-13` on trees with three vertices, at half the cost.
    pub fn fast() -> Self {
        FitConfig {
            numeric: NumericConfig { precision_bits: 96, cutoff: 32, depth: 16 },
            nodes: 10,
            ..FitConfig::default()
        }
    }
}

/// A least-squares solution by modified Gram–Schmidt in column order;
/// dependent columns get no coefficient.
struct LeastSquares {
    coefficients: Vec<Option<Float>>,
    residual: f64,
}

fn dot(a: &[Float], b: &[Float], prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for (x, y) in a.iter().zip(b) {
        acc += Float::with_val(prec, x * y);
    }
    acc
}

fn solve_least_squares(cols: &[Vec<Float>], y: &[Float], prec: u32, cfg: &FitConfig) -> Result<LeastSquares> {
    let mut q: Vec<Vec<Float>> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut scales: Vec<Float> = Vec::new();
    // r[(i, j)]: component of column j along q_i
    let mut r: BTreeMap<(usize, usize), Float> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        let norm = dot(col, col, prec).sqrt();
        if norm.is_zero() || !norm.is_finite() {
            continue;
        }
        let mut v: Vec<Float> = col.iter().map(|x| Float::with_val(prec, x / &norm)).collect();
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let c = dot(qi, &v, prec);
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk -= Float::with_val(prec, &c * qk);
                }
                *r.entry((i, kept.len())).or_insert_with(|| Float::with_val(prec, 0)) += c;
            }
        }
        let nv = dot(&v, &v, prec).sqrt();
        if nv.to_f64() < cfg.drop_tolerance {
            for i in 0..q.len() {
                r.remove(&(i, kept.len()));
            }
            continue;
        }
        if nv.to_f64() < cfg.condition_floor {
            return Err(Error::IllConditioned(format!("column {j} is nearly dependent ({:e})", nv.to_f64())));
        }
        for vk in v.iter_mut() {
            *vk /= &nv;
        }
        r.insert((q.len(), kept.len()), nv);
        q.push(v);
        kept.push(j);
        scales.push(norm);
    }
    let n = kept.len();
    let b: Vec<Float> = q.iter().map(|qi| dot(qi, y, prec)).collect();
    let mut x = vec![Float::with_val(prec, 0); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for k in i + 1..n {
            acc -= Float::with_val(prec, &r[&(i, k)] * &x[k]);
        }
        x[i] = acc / &r[&(i, i)];
    }
    let mut coefficients = vec![None; cols.len()];
    for (slot, (j, s)) in kept.iter().zip(&scales).enumerate() {
        let mut c = Float::with_val(prec, &x[slot] / s);
        if c.clone().abs().to_f64() < cfg.snap {
            c = Float::with_val(prec, 0);
        }
        coefficients[*j] = Some(c);
    }
    let mut res = Float::with_val(prec, 0);
    for (row, yv) in y.iter().enumerate() {
        let mut fit = Float::with_val(prec, 0);
        for (j, c) in coefficients.iter().enumerate() {
            if let Some(c) = c {
                fit += Float::with_val(prec, c * &cols[j][row]);
            }
        }
        res += Float::with_val(prec, yv - &fit).square();
    }
    let scale = dot(y, y, prec).sqrt().to_f64().max(1.0);
    Ok(LeastSquares { coefficients, residual: res.sqrt().to_f64() / scale })
}

/// Float serialised as a decimal string.
mod float_text {
    use rug::Float;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string_radix(10, None))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Float, D::Error> {
        let text = String::deserialize(d)?;
        let v = Float::parse(&text).map_err(serde::de::Error::custom)?;
        Ok(Float::with_val(128, v))
    }
}

/// `coefficient · z^numerator / Π poles`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedTerm {
    pub numerator: Monomial,
    pub poles: Vec<LinearForm>,
    #[serde(with = "float_text")]
    pub coefficient: Float,
}

impl FittedTerm {
    /// The term with coefficient 1 as an exact germ.
    pub fn basis_germ(&self) -> Result<Germ> {
        let mut g = Germ::from_poly(Poly::monomial(self.numerator.clone(), 1.into()));
        for l in &self.poles {
            g = g.mul(&Germ::pole(l)?);
        }
        Ok(g)
    }
}

/// A germ with floating-point coefficients on a linear-pole ansatz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedGerm {
    pub terms: Vec<FittedTerm>,
    /// Root-mean-square misfit relative to the sample norm (at least 1).
    pub residual: f64,
}

impl FittedGerm {
    pub fn evaluate(&self, z: &BTreeMap<u32, Rational>, prec: u32) -> Result<Float> {
        let mut acc = Float::with_val(prec, 0);
        for t in &self.terms {
            acc += Float::with_val(prec, &t.coefficient * basis_value(&t.numerator, &t.poles, z, prec)?);
        }
        Ok(acc)
    }

    /// `ev₀ ∘ π₊` applied term by term.
    pub fn renormalised_value(&self, q: &InnerProduct, prec: u32) -> Result<Float> {
        let mut acc = Float::with_val(prec, 0);
        for t in &self.terms {
            let v = renormalised_value(q, &t.basis_germ()?)?.numeric_value(prec)?;
            acc += Float::with_val(prec, &t.coefficient * v);
        }
        Ok(acc)
    }
}

fn basis_value(m: &Monomial, poles: &[LinearForm], z: &BTreeMap<u32, Rational>, prec: u32) -> Result<Float> {
    let mut v = Rational::from(1);
    for (i, e) in &m.0 {
        let x = z.get(i).cloned().unwrap_or_default();
        v *= x.pow(*e);
    }
    for l in poles {
        let d = l.eval(z);
        if d == 0 {
            return Err(Error::PoleAtPoint(format!("{l} vanishes at the sample")));
        }
        v /= d;
    }
    Ok(Float::with_val(prec, v))
}

/// Multisets of `0..n` with at most `k` elements, smallest first.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for i in start..n {
                let mut c: Vec<usize> = m.clone();
                c.push(i);
                next.push(c);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Exponent vectors of total degree `d` in `k` slots.
fn compositions(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Least-squares fit of `Σ c_{m,D} z^m / Π_{L∈D} L(z)` over monomials of total
/// degree at most `degree_bound` and pole multisets of size at most
/// `max_pole_order`.
///
/// Columns are taken in order of increasing pole count, then increasing
/// degree; a column that depends on earlier ones is left out, so the
/// representation is the one using the fewest poles.
pub fn fit_germ(
    samples: &[(BTreeMap<u32, Rational>, Float)],
    poles: &[LinearForm],
    degree_bound: u32,
    max_pole_order: u32,
    cfg: &FitConfig,
) -> Result<FittedGerm> {
    let prec = cfg.numeric.precision_bits;
    let vars: Vec<u32> = samples
        .iter()
        .flat_map(|(z, _)| z.keys().copied())
        .chain(poles.iter().flat_map(|l| l.vars()))
        .collect::<BTreeSet<u32>>()
        .into_iter()
        .collect();
    let poles: Vec<LinearForm> = poles.iter().map(|l| l.normalized().1).collect();
    let mut basis: Vec<(Monomial, Vec<LinearForm>)> = Vec::new();
    for d in multisets(poles.len(), max_pole_order as usize) {
        for deg in 0..=degree_bound {
            for e in compositions(vars.len(), deg) {
                let m = Monomial::from_exponents(vars.iter().copied().zip(e));
                basis.push((m, d.iter().map(|&i| poles[i].clone()).collect()));
            }
        }
    }
    if samples.len() < basis.len() {
        return Err(Error::Invalid(format!("{} samples for {} unknowns", samples.len(), basis.len())));
    }
    let cols: Vec<Vec<Float>> = basis
        .iter()
        .map(|(m, d)| samples.iter().map(|(z, _)| basis_value(m, d, z, prec)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let y: Vec<Float> = samples.iter().map(|(_, v)| Float::with_val(prec, v)).collect();
    let ls = solve_least_squares(&cols, &y, prec, cfg)?;
    let terms = basis
        .into_iter()
        .zip(ls.coefficients)
        .filter_map(|((numerator, poles), c)| {
            c.filter(|c| !c.is_zero()).map(|coefficient| FittedTerm { numerator, poles, coefficient })
        })
        .collect();
    Ok(FittedGerm { terms, residual: ls.residual })
}

/// Outcome of a numeric renormalisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericRenormalised {
    #[serde(with = "float_text")]
    pub value: Float,
    /// Largest relative misfit over the fitted blocks.
    pub residual: f64,
    /// Trees grouped into blocks whose variables are not mutually orthogonal.
    pub blocks: usize,
    pub rays: usize,
    pub unknowns: usize,
}

/// Polar ansatz on one block of variables.
struct PolarColumn {
    /// Indices into the candidate pole list, with multiplicities.
    poles: Vec<(usize, u32)>,
    /// Exponents of the complement coordinates.
    complement: Vec<LinearForm>,
    exponents: Vec<u32>,
}

fn polar_columns(q: &InnerProduct, poles: &[LinearForm], vars: &BTreeSet<u32>, order: u32) -> Result<Vec<PolarColumn>> {
    let var_list: Vec<u32> = vars.iter().copied().collect();
    let mut out = Vec::new();
    let n = poles.len();
    for mask in 1u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if subset.len() as u32 > order {
            continue;
        }
        let forms: Vec<LinearForm> = subset.iter().map(|&i| poles[i].clone()).collect();
        if rank(&rows_of(&forms, &var_list)) < forms.len() {
            continue;
        }
        let complement = orthogonal_complement(q, &Subspace::new(forms), vars)?.spanning;
        // exponents ≥ 1 on the subset, total at most `order`
        for total in subset.len() as u32..=order {
            for extra in compositions(subset.len(), total - subset.len() as u32) {
                let mults: Vec<(usize, u32)> = subset.iter().zip(&extra).map(|(&i, e)| (i, e + 1)).collect();
                for exponents in compositions(complement.len(), total) {
                    out.push(PolarColumn { poles: mults.clone(), complement: complement.clone(), exponents });
                }
            }
        }
    }
    Ok(out)
}

fn polar_value(c: &PolarColumn, poles: &[LinearForm], w: &BTreeMap<u32, Rational>) -> Rational {
    let mut v = Rational::from(1);
    for (u, e) in c.complement.iter().zip(&c.exponents) {
        v *= u.eval(w).pow(*e);
    }
    for (i, m) in &c.poles {
        v /= poles[*i].eval(w).pow(*m);
    }
    v
}

/// Rational approximations of the Chebyshev nodes on `[-ρ, ρ]`.
fn chebyshev_nodes(m: u32, radius_inverse: u32) -> Vec<Rational> {
    (0..m)
        .map(|i| {
            let x = (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * m) as f64).cos();
            let num = (x * 65536.0).round() as i64;
            Rational::from((num, 65536 * i64::from(radius_inverse)))
        })
        .collect()
}

/// Coefficient of `t^k` in the interpolating polynomial through the samples.
fn interpolated_coefficient(ts: &[Rational], hs: &[Float], k: usize, prec: u32) -> Float {
    let n = ts.len();
    let t: Vec<Float> = ts.iter().map(|x| Float::with_val(prec, x)).collect();
    // Newton divided differences
    let mut dd: Vec<Float> = hs.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = Float::with_val(prec, &dd[i] - &dd[i - 1]);
            let den = Float::with_val(prec, &t[i] - &t[i - level]);
            dd[i] = num / den;
        }
    }
    // expand Σ dd[i] Π_{j<i} (x - t_j) into monomial coefficients (Horner)
    let mut poly = vec![Float::with_val(prec, 0); n];
    for i in (0..n).rev() {
        // poly ← poly·(x - t_i) + dd[i]
        let mut next = vec![Float::with_val(prec, 0); n];
        for (d, c) in poly.iter().enumerate() {
            if d + 1 < n {
                next[d + 1] += c;
            }
            next[d] -= Float::with_val(prec, c * &t[i]);
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly.swap_remove(k)
}

fn random_ray(rng: &mut ChaCha8Rng, vars: &BTreeSet<u32>, poles: &[LinearForm]) -> BTreeMap<u32, Rational> {
    loop {
        let raw: Vec<i64> = vars
            .iter()
            .map(|_| {
                let v: i64 = rng.gen_range(1..=12);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let norm: i64 = raw.iter().map(|x| x.abs()).sum();
        let w: BTreeMap<u32, Rational> =
            vars.iter().copied().zip(raw.iter().map(|&x| Rational::from((x, norm)))).collect();
        if poles.iter().all(|l| l.eval(&w).abs() >= (1, 20)) {
            return w;
        }
    }
}

/// Where numeric values of a block come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericRoute {
    /// Nested sums over the trees themselves.
    Branched,
    /// The flattening into words, each summed as a ladder.
    Words,
}

enum Source<'a> {
    Branched(&'a Forest<EsLetter>),
    Words(LinComb<Word<EsLetter>>),
}

impl Source<'_> {
    fn value(&self, op: SumOperator, z: &BTreeMap<u32, Rational>, cfg: &NumericConfig) -> Result<Float> {
        match self {
            Source::Branched(f) => numeric_forest_value(f, op, z, cfg),
            Source::Words(w) => numeric_words_value(w, op, z, cfg),
        }
    }
}

/// The degree-zero part of the germ along `w`.
fn degree_zero_along(
    src: &Source,
    op: SumOperator,
    w: &BTreeMap<u32, Rational>,
    order: u32,
    cfg: &FitConfig,
) -> Result<Float> {
    let prec = cfg.numeric.precision_bits;
    let ts = chebyshev_nodes(cfg.nodes, cfg.radius_inverse);
    let mut hs = Vec::with_capacity(ts.len());
    for t in &ts {
        let z: BTreeMap<u32, Rational> = w.iter().map(|(i, x)| (*i, Rational::from(x * t))).collect();
        let g = src.value(op, &z, &cfg.numeric)?;
        hs.push(g * Float::with_val(prec, t).pow(order));
    }
    Ok(interpolated_coefficient(&ts, &hs, order as usize, prec))
}

fn renormalise_block(
    f: &Forest<EsLetter>,
    op: SumOperator,
    q: &InnerProduct,
    route: NumericRoute,
    cfg: &FitConfig,
) -> Result<(Float, f64, usize, usize)> {
    let prec = cfg.numeric.precision_bits;
    let src = match route {
        NumericRoute::Branched => Source::Branched(f),
        NumericRoute::Words => Source::Words(flatten_for(f, op)?),
    };
    let vars = forest_vars(f);
    let poles = candidate_poles(f, op)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if poles.is_empty() {
        // the limit along one ray; at z = 0 itself integer orders collide
        let w = random_ray(&mut rng, &vars, &poles);
        return Ok((degree_zero_along(&src, op, &w, 0, cfg)?, 0.0, 1, 1));
    }
    let order = cfg.max_pole_order.unwrap_or_else(|| pole_order_bound(f));
    let columns = polar_columns(q, &poles, &vars, order)?;
    let unknowns = columns.len() + 1;
    let n_rays = unknowns + cfg.extra_rays as usize;
    let rays: Vec<_> = (0..n_rays).map(|_| random_ray(&mut rng, &vars, &poles)).collect();
    let values = rays.par_iter().map(|w| degree_zero_along(&src, op, w, order, cfg)).collect::<Result<Vec<Float>>>()?;
    let mut cols = vec![vec![Float::with_val(prec, 1); n_rays]];
    for c in &columns {
        cols.push(rays.iter().map(|w| Float::with_val(prec, polar_value(c, &poles, w))).collect());
    }
    let ls = solve_least_squares(&cols, &values, prec, cfg)?;
    let value = ls.coefficients[0].clone().ok_or_else(|| Error::IllConditioned("constant column dropped".into()))?;
    Ok((value, ls.residual, n_rays, unknowns))
}

/// Blocks of trees: connected components of "supports not `Q`-orthogonal".
pub fn orthogonal_blocks(f: &Forest<EsLetter>, q: &InnerProduct) -> Vec<Forest<EsLetter>> {
    let trees = f.trees();
    let supports: Vec<Subspace> = trees.iter().map(|t| Subspace::coordinates(forest_vars(&t.clone().into()))).collect();
    let mut block: Vec<usize> = (0..trees.len()).collect();
    for i in 0..trees.len() {
        for j in 0..i {
            if !spans_orthogonal(q, &supports[i], &supports[j]) {
                let (a, b) = (block[i], block[j]);
                for x in block.iter_mut() {
                    if *x == a {
                        *x = b;
                    }
                }
            }
        }
    }
    let ids: BTreeSet<usize> = block.iter().copied().collect();
    ids.into_iter()
        .map(|id| Forest::new(trees.iter().zip(&block).filter(|(_, b)| **b == id).map(|(t, _)| t.clone()).collect()))
        .collect()
}

/// `ev₀ ∘ π₊` of the germ of `ζ^λ(F)`, from numeric values only.
///
/// Blocks of mutually `Q`-orthogonal trees are renormalised separately and
/// multiplied, which is the locality property of the projection.
pub fn numeric_renormalised(
    f: &Forest<EsLetter>,
    op: SumOperator,
    q: &InnerProduct,
    route: NumericRoute,
    cfg: &FitConfig,
) -> Result<NumericRenormalised> {
    let prec = cfg.numeric.precision_bits;
    let blocks = orthogonal_blocks(f, q);
    let mut out = NumericRenormalised {
        value: Float::with_val(prec, 1),
        residual: 0.0,
        blocks: blocks.len(),
        rays: 0,
        unknowns: 0,
    };
    for b in &blocks {
        let (v, res, rays, unknowns) = renormalise_block(b, op, q, route, cfg)?;
        out.value *= v;
        out.residual = out.residual.max(res);
        out.rays += rays;
        out.unknowns += unknowns;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tree;
    use crate::numerics::{constant_numeric_value, rat, FormalConstant};

    fn point(a: i64, b: i64, d: i64) -> BTreeMap<u32, Rational> {
        [(1, rat(a, d)), (2, rat(b, d))].into()
    }

    #[test]
    fn synthetic_round_trip() {
        let cfg = FitConfig::default();
        let l = LinearForm::sum_of(&[1, 2]);
        let mut samples = Vec::new();
        for a in 1..5 {
            for b in 1..4 {
                let z = point(2 * a, 2 * b - 7, 17);
                let v = Rational::from(2) + Rational::from(l.eval(&z).recip_ref());
                samples.push((z, Float::with_val(128, v)));
            }
        }
        let g = fit_germ(&samples, std::slice::from_ref(&l), 0, 1, &cfg).unwrap();
        assert!(g.residual < 1e-20);
        assert_eq!(g.terms.len(), 2);
        for t in &g.terms {
            let want = if t.poles.is_empty() { 2.0 } else { 1.0 };
            assert!((t.coefficient.to_f64() - want).abs() < 1e-10);
        }
        let z = point(1, 1, 3);
        assert!((g.evaluate(&z, 128).unwrap().to_f64() - 3.5).abs() < 1e-10);
    }

    #[test]
    fn polynomial_fit() {
        let cfg = FitConfig::default();
        let samples: Vec<_> = (0..12)
            .map(|i| {
                let z = point(i - 5, 3 - i * i % 7, 11);
                let v = Rational::from(1) + Rational::from(&z[&1] * 3) - Rational::from(&z[&1] * &z[&2]);
                (z, Float::with_val(128, v))
            })
            .collect();
        let g = fit_germ(&samples, &[], 2, 0, &cfg).unwrap();
        assert!(g.residual < 1e-9);
    }

    #[test]
    fn zeta_near_one() {
        let cfg = FitConfig::default();
        let t = Tree::leaf(EsLetter::int(1, 1));
        let f: Forest<EsLetter> = t.into();
        let samples: Vec<_> = (1..=16)
            .map(|i| {
                let x = rat(if i % 2 == 0 { i } else { -i }, 400);
                let z: BTreeMap<u32, Rational> = [(1, x)].into();
                let v = numeric_forest_value(&f, SumOperator::Strict, &z, &cfg.numeric).unwrap();
                (z, v)
            })
            .collect();
        let g = fit_germ(&samples, &[LinearForm::var(1)], 6, 1, &cfg).unwrap();
        let gamma = constant_numeric_value(&FormalConstant::EulerGamma, 128).unwrap().to_f64();
        let mut seen = 0;
        for t in &g.terms {
            if !t.poles.is_empty() && t.numerator.is_one() {
                assert!((t.coefficient.to_f64() + 1.0).abs() < 1e-9);
                seen += 1;
            }
            if t.poles.is_empty() && t.numerator.is_one() {
                assert!((t.coefficient.to_f64() - gamma).abs() < 1e-9);
                seen += 1;
            }
        }
        assert_eq!(seen, 2);
    }

    #[test]
    fn renormalised_gamma() {
        let cfg = FitConfig::default();
        let f: Forest<EsLetter> = Tree::leaf(EsLetter::int(1, 1)).into();
        let r = numeric_renormalised(&f, SumOperator::Strict, &InnerProduct::identity(), NumericRoute::Branched, &cfg)
            .unwrap();
        let gamma = constant_numeric_value(&FormalConstant::EulerGamma, 128).unwrap().to_f64();
        assert!((r.value.to_f64() - gamma).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn renormalised_double_zero() {
        let cfg = FitConfig::default();
        let f: Forest<EsLetter> = Tree::ladder(&[EsLetter::int(1, 0), EsLetter::int(2, 0)]).unwrap().into();
        let r = numeric_renormalised(&f, SumOperator::Strict, &InnerProduct::identity(), NumericRoute::Branched, &cfg)
            .unwrap();
        assert!((r.value.to_f64() - 0.375).abs() < 1e-12, "{} residual {}", r.value, r.residual);
    }
}
