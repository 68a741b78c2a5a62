//! Numeric branched zeta values at a rational point.
//!
//! Every vertex carries its partial sums `S(m)` twice: directly for
//! `m ≤ cutoff`, and as an asymptotic expansion `Σ c·m^α·log^j m` with exact
//! orders. Children's expansions multiply; Euler–Maclaurin sums them; the
//! constant of the new expansion is read off by matching the direct value at
//! the cutoff. The value of the tree is the constant of the root.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rug::ops::Pow;
use rug::Assign;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::decorate::letter_order;
use crate::algebra::{EsAlgebra, EsLetter, Forest, LinComb, Tree, Word};
use crate::numerics::bernoulli;
use crate::symbol::SumOperator;
use crate::{Error, Result};

/// Accuracy knobs of the numeric engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub precision_bits: u32,
    /// Largest argument summed directly.
    pub cutoff: u32,
    /// Expansions keep orders down to `-depth` (plus headroom for positive orders).
    pub depth: u32,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { precision_bits: 128, cutoff: 40, depth: 36 }
    }
}

/// An order `class + n` with the class an exact fractional part in `[0, 1)`,
/// and a power of `log`.
type Key = (usize, i64, u32);

/// Partial sums of one vertex.
#[derive(Clone, Debug)]
struct Expansion {
    pieces: BTreeMap<Key, Float>,
    /// `S(0), S(1), ..., S(cutoff)`.
    direct: Vec<Float>,
}

/// Fractional parts of the orders met so far; class 0 is the integers.
#[derive(Default)]
struct Classes {
    fracs: Vec<Rational>,
    sums: HashMap<(usize, usize), (usize, i64)>,
}

impl Classes {
    fn of(&mut self, r: &Rational) -> (usize, i64) {
        let whole = r.clone().floor();
        let frac = Rational::from(r - &whole);
        let n = whole.numer().to_i64().expect("order fits in i64");
        let c = match self.fracs.iter().position(|f| *f == frac) {
            Some(c) => c,
            None => {
                self.fracs.push(frac);
                self.fracs.len() - 1
            }
        };
        (c, n)
    }

    fn add(&mut self, a: usize, b: usize) -> (usize, i64) {
        if let Some(x) = self.sums.get(&(a, b)) {
            return *x;
        }
        let s = Rational::from(&self.fracs[a] + &self.fracs[b]);
        let x = self.of(&s);
        self.sums.insert((a, b), x);
        x
    }
}

struct Engine<'a> {
    op: SumOperator,
    z: &'a BTreeMap<u32, Rational>,
    prec: u32,
    cutoff: u32,
    /// Lowest integer part kept.
    floor: i64,
    /// `B_k / k!`
    bernoulli: Vec<Float>,
    log_cutoff: Float,
    classes: RefCell<Classes>,
}

fn binom(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

impl<'a> Engine<'a> {
    fn new(op: SumOperator, z: &'a BTreeMap<u32, Rational>, t: &Tree<EsLetter>, cfg: &NumericConfig) -> Result<Self> {
        if op == SumOperator::Integral {
            return Err(Error::Unsupported("branched values are defined for sums".into()));
        }
        if cfg.cutoff < 8 || cfg.precision_bits < 53 {
            return Err(Error::Invalid("numeric engine needs cutoff ≥ 8 and precision ≥ 53 bits".into()));
        }
        let prec = cfg.precision_bits;
        let headroom: i64 = t
            .decorations()
            .iter()
            .map(|d| {
                let a = letter_order(d).eval(z);
                a.ceil().numer().to_i64().unwrap_or(0).max(0) + 1
            })
            .sum();
        let floor = -(i64::from(cfg.depth) + headroom);
        let k_max = (i64::from(cfg.depth) + 3 * headroom + 8) as usize;
        // B_k / k!
        let mut fact = Rational::from(1);
        let bernoulli = (0..=k_max)
            .map(|k| {
                if k > 1 {
                    fact *= k as u32;
                }
                Float::with_val(prec, bernoulli(k) / &fact)
            })
            .collect();
        let log_cutoff = Float::with_val(prec, cfg.cutoff).ln();
        let classes = RefCell::new(Classes { fracs: vec![Rational::new()], sums: HashMap::new() });
        Ok(Engine { op, z, prec, cutoff: cfg.cutoff, floor, bernoulli, log_cutoff, classes })
    }

    fn order(&self, c: usize, n: i64) -> Float {
        Float::with_val(self.prec, &self.classes.borrow().fracs[c]) + n
    }

    /// `cutoff^α · log^j cutoff`, with `cutoff^{class}` memoised.
    fn power_at_cutoff(&self, (c, n, j): Key, memo: &mut HashMap<usize, Float>) -> Float {
        let base = memo.entry(c).or_insert_with(|| {
            let f = Float::with_val(self.prec, &self.classes.borrow().fracs[c]);
            Float::with_val(self.prec, self.cutoff).pow(f)
        });
        let e = i32::try_from(n).expect("small order");
        let mut v = Float::with_val(self.prec, self.cutoff).pow(e) * &*base;
        for _ in 0..j {
            v *= &self.log_cutoff;
        }
        v
    }

    fn add(map: &mut BTreeMap<Key, Float>, key: Key, c: Float) {
        if c.is_zero() {
            return;
        }
        match map.get_mut(&key) {
            Some(x) => *x += c,
            None => {
                map.insert(key, c);
            }
        }
    }

    fn multiply(&self, a: &Expansion, b: &Expansion) -> Expansion {
        let mut pieces = BTreeMap::new();
        let mut classes = self.classes.borrow_mut();
        for ((ca_, na, ja), ca) in &a.pieces {
            for ((cb_, nb, jb), cb) in &b.pieces {
                let (c, carry) = classes.add(*ca_, *cb_);
                let n = na + nb + carry;
                if n < self.floor {
                    continue;
                }
                Self::add(&mut pieces, (c, n, ja + jb), Float::with_val(self.prec, ca * cb));
            }
        }
        let direct = a.direct.iter().zip(&b.direct).map(|(x, y)| Float::with_val(self.prec, x * y)).collect();
        Expansion { pieces, direct }
    }

    fn power(&self, alpha: &Rational) -> Expansion {
        let (c, n) = self.classes.borrow_mut().of(alpha);
        let mut pieces = BTreeMap::new();
        pieces.insert((c, n, 0), Float::with_val(self.prec, 1));
        let a = Float::with_val(self.prec, alpha);
        let direct = (0..=self.cutoff)
            .map(|m| if m == 0 { Float::with_val(self.prec, 0) } else { Float::with_val(self.prec, m).pow(&a) })
            .collect();
        Expansion { pieces, direct }
    }

    /// `Σ_{n ≤ m}` or `Σ_{n < m}` of a summand given by its expansion.
    fn sum(&self, f: &Expansion) -> Expansion {
        let p = self.prec;
        let mut out: BTreeMap<Key, Float> = BTreeMap::new();
        let kappa = Float::with_val(p, self.op.boundary());
        for (&(cl, n, j), c) in &f.pieces {
            if cl == 0 && n == -1 {
                Self::add(&mut out, (0, 0, j + 1), Float::with_val(p, c / (j + 1)));
            } else {
                // ∂^r (α+1)^{-1} = (-1)^r r! (α+1)^{-r-1}
                let inv = self.order(cl, n + 1).recip();
                let mut d = inv.clone();
                for r in 0..=j {
                    let i = j - r;
                    let term = Float::with_val(p, c * &d) * binom(j, i);
                    Self::add(&mut out, (cl, n + 1, i), term);
                    d = Float::with_val(p, &d * &inv) * (-(r as i64 + 1));
                }
            }
            Self::add(&mut out, (cl, n, j), Float::with_val(p, c * &kappa));
            // Taylor coefficients in t of (α + t)_{k-1}, up to t^j
            let mut ff: Vec<Float> = vec![Float::with_val(p, 1)];
            ff.resize(j as usize + 1, Float::with_val(p, 0));
            let mut shift = self.order(cl, n + 1);
            let mut scale = Float::new(p);
            let mut term = Float::new(p);
            let mut m = n;
            for k in 2..self.bernoulli.len() {
                // multiply by (α - (k-2) + t)
                shift -= 1u32;
                for r in (0..=j as usize).rev() {
                    ff[r] *= &shift;
                    if r > 0 {
                        let (lo, hi) = ff.split_at_mut(r);
                        hi[0] += &lo[r - 1];
                    }
                }
                m -= 1;
                if m < self.floor {
                    break;
                }
                let b = &self.bernoulli[k];
                if b.is_zero() {
                    continue;
                }
                scale.assign(b * c);
                // ∂^{j-i} of (α)_{k-1} = (j-i)! · ff[j-i]
                let mut rfact = 1u64;
                for r in 0..=j {
                    if r > 0 {
                        rfact *= u64::from(r);
                    }
                    let i = j - r;
                    term.assign(&scale * &ff[r as usize]);
                    if rfact * binom(j, i) != 1 {
                        term *= rfact * binom(j, i);
                    }
                    Self::add(&mut out, (cl, m, i), term.clone());
                }
            }
        }
        let mut direct = Vec::with_capacity(f.direct.len());
        let mut acc = Float::with_val(p, 0);
        for m in 0..=self.cutoff as usize {
            match self.op {
                SumOperator::Weak => {
                    acc += &f.direct[m];
                    direct.push(acc.clone());
                }
                _ => {
                    direct.push(acc.clone());
                    acc += &f.direct[m];
                }
            }
        }
        let zero: Key = (0, 0, 0);
        let mut rest = Float::with_val(p, 0);
        let mut memo = HashMap::new();
        for (&key, c) in &out {
            if key != zero {
                rest += Float::with_val(p, c * self.power_at_cutoff(key, &mut memo));
            }
        }
        out.insert(zero, Float::with_val(p, &direct[self.cutoff as usize] - &rest));
        Expansion { pieces: out, direct }
    }

    fn vertex(&self, t: &Tree<EsLetter>) -> Result<Expansion> {
        let mut f = self.power(&letter_order(&t.decoration).eval(self.z));
        for c in t.children() {
            let s = self.vertex(c)?;
            f = self.multiply(&f, &s);
        }
        Ok(self.sum(&f))
    }

    fn value(&self, t: &Tree<EsLetter>) -> Result<Float> {
        let s = self.vertex(t)?;
        let v = s.pieces.get(&(0, 0, 0)).cloned().unwrap_or_else(|| Float::with_val(self.prec, 0));
        if !v.is_finite() {
            return Err(Error::IllConditioned("non-finite value; the point may sit on a pole".into()));
        }
        Ok(v)
    }
}

/// `ζ^λ(T)` at the point `z` (coordinates missing from `z` are 0).
pub fn numeric_tree_value(
    t: &Tree<EsLetter>,
    op: SumOperator,
    z: &BTreeMap<u32, Rational>,
    cfg: &NumericConfig,
) -> Result<Float> {
    Engine::new(op, z, t, cfg)?.value(t)
}

/// Product of the tree values.
pub fn numeric_forest_value(
    f: &Forest<EsLetter>,
    op: SumOperator,
    z: &BTreeMap<u32, Rational>,
    cfg: &NumericConfig,
) -> Result<Float> {
    f.check_proper(&EsAlgebra)?;
    let mut v = Float::with_val(cfg.precision_bits, 1);
    for t in f.trees() {
        v *= numeric_tree_value(t, op, z, cfg)?;
    }
    Ok(v)
}

/// The value of a word read as a ladder, root first.
pub fn numeric_word_value(
    w: &Word<EsLetter>,
    op: SumOperator,
    z: &BTreeMap<u32, Rational>,
    cfg: &NumericConfig,
) -> Result<Float> {
    match Tree::ladder(w.letters()) {
        Some(t) => numeric_tree_value(&t, op, z, cfg),
        None => Ok(Float::with_val(cfg.precision_bits, 1)),
    }
}

/// `Σ c_w ζ(w)` at `z`.
pub fn numeric_words_value(
    words: &LinComb<Word<EsLetter>>,
    op: SumOperator,
    z: &BTreeMap<u32, Rational>,
    cfg: &NumericConfig,
) -> Result<Float> {
    let mut seen: HashMap<&Word<EsLetter>, Float> = HashMap::new();
    let mut acc = Float::with_val(cfg.precision_bits, 0);
    for (w, c) in words.iter() {
        if !seen.contains_key(w) {
            seen.insert(w, numeric_word_value(w, op, z, cfg)?);
        }
        acc += Float::with_val(cfg.precision_bits, &seen[w] * c);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, special};

    fn ladder(ws: &[i64]) -> Tree<EsLetter> {
        let l: Vec<EsLetter> = ws.iter().enumerate().map(|(i, &s)| EsLetter::int(i as u32 + 1, s)).collect();
        Tree::ladder(&l).unwrap()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() < tol
    }

    #[test]
    fn classical_values() {
        let cfg = NumericConfig::default();
        let z = BTreeMap::new();
        let z3 = special::zeta(&Float::with_val(128, 3), 128).to_f64();
        let v = numeric_tree_value(&ladder(&[2, 1]), SumOperator::Strict, &z, &cfg).unwrap();
        assert!(close(&v, z3, 1e-20), "{v}");
        let v = numeric_tree_value(&ladder(&[2, 2]), SumOperator::Strict, &z, &cfg).unwrap();
        assert!(close(&v, 0.811_742_425_283_353_6, 1e-18), "{v}");
        let v = numeric_tree_value(&ladder(&[2]), SumOperator::Weak, &z, &cfg).unwrap();
        assert!(close(&v, std::f64::consts::PI.powi(2) / 6.0, 1e-15), "{v}");
    }

    #[test]
    fn continuation_in_one_variable() {
        let cfg = NumericConfig::default();
        let z: BTreeMap<u32, Rational> = [(1, rat(1, 10))].into();
        let v = numeric_tree_value(&ladder(&[1]), SumOperator::Strict, &z, &cfg).unwrap();
        let want = special::zeta(&Float::with_val(128, rat(9, 10)), 128);
        assert!((v - want).abs() < 1e-25);
        let z: BTreeMap<u32, Rational> = [(1, rat(-1, 7))].into();
        let v = numeric_tree_value(&ladder(&[-1]), SumOperator::Weak, &z, &cfg).unwrap();
        let want = special::zeta(&Float::with_val(128, Rational::from((-6, 7))), 128);
        assert!((v - want).abs() < 1e-25);
    }

    #[test]
    fn strict_and_weak_differ_by_merged_word() {
        // ζ⋆(a,b) = ζ(a,b) + ζ(a+b) on the ladder
        let cfg = NumericConfig::default();
        let z: BTreeMap<u32, Rational> = [(1, rat(1, 9)), (2, rat(-1, 5))].into();
        let t = ladder(&[0, -1]);
        let weak = numeric_tree_value(&t, SumOperator::Weak, &z, &cfg).unwrap();
        let strict = numeric_tree_value(&t, SumOperator::Strict, &z, &cfg).unwrap();
        let merged = EsLetter { labels: [1, 2].into(), weight: rat(-1, 1) };
        let one = numeric_tree_value(&Tree::leaf(merged), SumOperator::Strict, &z, &cfg).unwrap();
        assert!((weak - strict - one).abs() < 1e-25);
    }
}
