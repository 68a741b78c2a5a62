//! Exact branched zeta germs for integer weights.
//!
//! Each vertex sums the product of its decoration and its children's sums with
//! the Euler–Maclaurin operator. Only the degree-zero part of the final germ is
//! wanted, so every piece whose coefficient can no longer reach degree zero is
//! dropped. Reachability is decided on the constant parts of the orders: a
//! piece of order `ℓ + a` can only gain a pole further up when some later sum
//! sees an order with constant part `-1`.

use std::collections::{BTreeSet, HashMap};

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::decorate::{integer_weights, letter_order, tree_vars};
use crate::algebra::{flatten, EsAlgebra, EsLetter, Forest, LinComb, Tree, Word};
use crate::germ::Germ;
use crate::linear::AffineForm;
use crate::numerics::as_i64;
use crate::symbol::{
    bernoulli_piece, boundary_piece, constant_piece, euler_maclaurin, primitive_piece, SumOperator, SymbolGerm,
    ZetaCoefficient,
};
use crate::{Error, Result};

/// Limits for the exact engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactConfig {
    /// Give up when the Bernoulli terms have not settled by this index.
    pub max_bernoulli: u32,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { max_bernoulli: 200 }
    }
}

/// Integer constants an order may take: finitely many points plus at most
/// one downward ray `{m, m-1, m-2, ...}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct OrderSet {
    points: BTreeSet<i64>,
    ray: Option<i64>,
}

impl OrderSet {
    fn point(a: i64) -> Self {
        OrderSet { points: [a].into(), ray: None }
    }

    fn normalize(mut self) -> Self {
        if let Some(m) = self.ray {
            self.points.retain(|&p| p > m);
        }
        self
    }

    fn contains(&self, x: i64) -> bool {
        self.points.contains(&x) || self.ray.is_some_and(|m| x <= m)
    }

    fn max(&self) -> i64 {
        let p = self.points.iter().next_back().copied();
        p.into_iter().chain(self.ray).max().unwrap_or(i64::MIN / 4)
    }

    fn shift(&self, c: i64) -> Self {
        OrderSet { points: self.points.iter().map(|p| p + c).collect(), ray: self.ray.map(|m| m + c) }
    }

    fn plus(&self, o: &OrderSet) -> Self {
        let mut points = BTreeSet::new();
        for a in &self.points {
            for b in &o.points {
                points.insert(a + b);
            }
        }
        let mut ray: Option<i64> = None;
        let mut bump = |m: i64| ray = Some(ray.map_or(m, |r| r.max(m)));
        if let Some(m) = self.ray {
            o.points.iter().for_each(|b| bump(m + b));
            if let Some(n) = o.ray {
                bump(m + n);
            }
        }
        if let Some(n) = o.ray {
            self.points.iter().for_each(|a| bump(a + n));
        }
        OrderSet { points, ray }.normalize()
    }

    /// Orders present after summing: the constant plus everything below `a + 1`.
    fn summed(&self) -> Self {
        let top = if self.points.is_empty() && self.ray.is_none() { None } else { Some(self.max() + 1) };
        OrderSet { points: [0].into(), ray: top }.normalize()
    }
}

/// Static data for one vertex.
struct Info {
    /// Constant part of the decoration order, `-s`.
    d: i64,
    /// Orders leaving it.
    out: OrderSet,
    /// Lower bound for coefficient degrees leaving it.
    dmin: i64,
    children: Vec<Info>,
}

fn build_info(t: &Tree<EsLetter>) -> Result<Info> {
    let d = as_i64(&letter_order(&t.decoration).constant)
        .ok_or_else(|| Error::Unsupported("exact mode needs integer weights".into()))?;
    let children: Vec<Info> = t.children().iter().map(build_info).collect::<Result<_>>()?;
    let mut pre = OrderSet::point(d);
    let mut dmin = 0;
    for c in &children {
        pre = pre.plus(&c.out);
        dmin += c.dmin;
    }
    if pre.contains(-1) {
        dmin -= 1;
    }
    let out = pre.summed();
    Ok(Info { d, out, dmin, children })
}

/// What an ancestor contributes: its decoration and its other children.
#[derive(Clone, Debug)]
struct Level {
    d: i64,
    siblings: OrderSet,
    sibling_dmin: i64,
}

fn child_levels(info: &Info, i: usize, above: &[Level]) -> Vec<Level> {
    let mut siblings = OrderSet::point(0);
    let mut sibling_dmin = 0;
    for (j, c) in info.children.iter().enumerate() {
        if j != i {
            siblings = siblings.plus(&c.out);
            sibling_dmin += c.dmin;
        }
    }
    let mut v = vec![Level { d: info.d, siblings, sibling_dmin }];
    v.extend(above.iter().cloned());
    v
}

/// Number of poles a piece with these order constants can still pick up.
fn future_poles(start: OrderSet, levels: &[Level]) -> i64 {
    let mut incoming = start;
    let mut count = 0;
    for l in levels {
        let a = incoming.shift(l.d).plus(&l.siblings);
        if a.contains(-1) {
            count += 1;
        }
        incoming = a.summed();
    }
    count
}

/// Below this constant part, nothing beneath any ancestor reaches `-1` again.
fn stable_threshold(levels: &[Level]) -> i64 {
    -2 - levels.iter().map(|l| (l.d + l.siblings.max()).max(0) + 1).sum::<i64>()
}

struct Context<'a> {
    op: SumOperator,
    cfg: &'a ExactConfig,
}

impl Context<'_> {
    fn keep(&self, a: i64, c: &ZetaCoefficient, levels: &[Level]) -> bool {
        let Some(deg) = c.min_degree() else { return false };
        let sib: i64 = levels.iter().map(|l| l.sibling_dmin).sum();
        deg + sib - future_poles(OrderSet::point(a), levels) <= 0
    }

    fn product_below(&self, t: &Tree<EsLetter>, info: &Info, levels: &[Level]) -> Result<SymbolGerm> {
        let mut pre = SymbolGerm::power(letter_order(&t.decoration))?;
        for (i, (c, ci)) in t.children().iter().zip(&info.children).enumerate() {
            let s = self.sum_vertex(c, ci, &child_levels(info, i, levels))?;
            pre = pre.mul_unchecked(&s)?;
        }
        Ok(pre)
    }

    fn sum_vertex(&self, t: &Tree<EsLetter>, info: &Info, levels: &[Level]) -> Result<SymbolGerm> {
        let pre = self.product_below(t, info, levels)?;
        let sib: i64 = levels.iter().map(|l| l.sibling_dmin).sum();
        let stable = stable_threshold(levels);
        let mut out = SymbolGerm::zero();
        let push = |out: &mut SymbolGerm, o: AffineForm, c: ZetaCoefficient| -> Result<()> {
            let a = as_i64(&o.constant).expect("integer orders");
            if self.keep(a, &c, levels) {
                out.add_piece(o, c)?;
            }
            Ok(())
        };
        for (alpha, c) in pre.pieces() {
            let a0 = as_i64(&alpha.constant).expect("integer orders");
            let Some(deg) = c.min_degree() else { continue };
            let here = i64::from(a0 == -1);
            if deg - here + sib - future_poles(OrderSet::point(a0).summed(), levels) > 0 {
                continue;
            }
            if alpha.linear.is_zero() {
                let single = SymbolGerm::monomial(alpha.clone(), c.clone())?;
                for (o, p) in euler_maclaurin(self.op, &single, 2)?.pieces() {
                    push(&mut out, o.clone(), p.clone())?;
                }
                continue;
            }
            push(&mut out, AffineForm::constant(Rational::new()), constant_piece(self.op, c, alpha)?)?;
            let (o, p) = primitive_piece(c, alpha)?;
            push(&mut out, o, p)?;
            if let Some((o, p)) = boundary_piece(self.op, c, alpha) {
                push(&mut out, o, p)?;
            }
            if self.op == SumOperator::Integral {
                continue;
            }
            let mut settled = false;
            for k in 2..=self.cfg.max_bernoulli {
                let k_ = i64::from(k);
                let ak = a0 - k_ + 1;
                let vanish = i64::from(a0 >= 0 && a0 <= k_ - 2);
                let lower = deg + vanish + sib - future_poles(OrderSet::point(ak), levels);
                let steady = ak < stable && (a0 < 0 || k_ >= a0 + 2);
                if lower <= 0 {
                    if steady {
                        return Err(Error::Unsupported(format!(
                            "infinite Euler–Maclaurin tail for x^({alpha}) reaches degree zero"
                        )));
                    }
                    if let Some((o, p)) = bernoulli_piece(self.op, c, alpha, k) {
                        push(&mut out, o, p)?;
                    }
                } else if steady {
                    settled = true;
                    break;
                }
            }
            if !settled {
                return Err(Error::Unsupported("Euler–Maclaurin terms did not settle".into()));
            }
        }
        Ok(out)
    }

    /// Regularised value at the root: the constant of the root sum.
    fn root_value(&self, t: &Tree<EsLetter>, info: &Info) -> Result<ZetaCoefficient> {
        let pre = self.product_below(t, info, &[])?;
        let mut acc = ZetaCoefficient::zero();
        for (alpha, c) in pre.pieces() {
            if alpha.linear.is_zero() {
                let single = SymbolGerm::monomial(alpha.clone(), c.clone())?;
                acc = acc.add(&euler_maclaurin(self.op, &single, 2)?.fp_infinity()?);
            } else {
                acc = acc.add(&constant_piece(self.op, c, alpha)?);
            }
        }
        Ok(acc)
    }
}

/// The germ of `ζ^λ(T)` near zero, exact through degree 0; higher degrees are
/// covered by a remainder on the tree's variables.
pub fn exact_tree_germ(t: &Tree<EsLetter>, op: SumOperator, cfg: &ExactConfig) -> Result<Germ> {
    if op == SumOperator::Integral {
        return Err(Error::Unsupported("branched values are defined for sums".into()));
    }
    let forest: Forest<EsLetter> = t.clone().into();
    if !integer_weights(&forest) {
        return Err(Error::Unsupported("exact mode needs integer weights".into()));
    }
    let info = build_info(t)?;
    let ctx = Context { op, cfg };
    let value = ctx.root_value(t, &info)?;
    let g = value.expand(0)?;
    Ok(g.add(&Germ::remainder(tree_vars(t), 1, false)))
}

/// Product of the tree germs.
pub fn exact_forest_germ(f: &Forest<EsLetter>, op: SumOperator, cfg: &ExactConfig) -> Result<Germ> {
    f.check_proper(&EsAlgebra)?;
    let mut g = Germ::one();
    for t in f.trees() {
        g = g.mul(&exact_tree_germ(t, op, cfg)?);
    }
    Ok(g)
}

/// `Σ c_w ζ(w)` over a combination of words, each read as a ladder.
pub fn exact_words_germ(words: &LinComb<Word<EsLetter>>, op: SumOperator, cfg: &ExactConfig) -> Result<Germ> {
    let mut cache: HashMap<&Word<EsLetter>, Germ> = HashMap::new();
    let mut acc = Germ::zero();
    for (w, c) in words.iter() {
        if w.is_empty() {
            acc = acc.add(&Germ::from_rational(c.clone()));
            continue;
        }
        if !cache.contains_key(w) {
            let t = Tree::ladder(w.letters()).expect("nonempty word");
            cache.insert(w, exact_tree_germ(&t, op, cfg)?);
        }
        acc = acc.add(&cache[w].scale_rat(c));
    }
    Ok(acc)
}

/// The flattening of a forest matching the operator.
pub fn flatten_for(f: &Forest<EsLetter>, op: SumOperator) -> Result<LinComb<Word<EsLetter>>> {
    flatten(&op.rb_weight(), f, &EsAlgebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::renormalised_value;
    use crate::linear::InnerProduct;
    use crate::numerics::{rat, CoeffPoly};

    fn value(f: &Forest<EsLetter>, op: SumOperator) -> CoeffPoly {
        let g = exact_forest_germ(f, op, &ExactConfig::default()).unwrap();
        renormalised_value(&InnerProduct::identity(), &g).unwrap()
    }

    fn leaf(l: u32, s: i64) -> Tree<EsLetter> {
        Tree::leaf(EsLetter::int(l, s))
    }

    #[test]
    fn order_sets() {
        let a = OrderSet::point(2).plus(&OrderSet { points: [0].into(), ray: Some(-3) });
        assert!(a.contains(2) && a.contains(-1) && !a.contains(0) && !a.contains(1));
        let s = OrderSet::point(-2).summed();
        assert!(s.contains(0) && s.contains(-1) && !s.contains(1));
    }

    #[test]
    fn depth_one_values() {
        for (s, v) in [(0, rat(-1, 2)), (-1, rat(-1, 12)), (-2, rat(0, 1)), (-3, rat(1, 120))] {
            let f: Forest<EsLetter> = leaf(1, s).into();
            assert_eq!(value(&f, SumOperator::Strict).as_rational(), Some(v.clone()), "s = {s}");
            assert_eq!(value(&f, SumOperator::Weak).as_rational(), Some(v), "s = {s}");
        }
    }

    #[test]
    fn tree_and_words_agree() {
        let cfg = ExactConfig::default();
        let t = Tree::new(EsLetter::int(1, -1), vec![leaf(2, 0), leaf(3, -2)]);
        let f: Forest<EsLetter> = t.into();
        for op in [SumOperator::Strict, SumOperator::Weak] {
            let a = exact_forest_germ(&f, op, &cfg).unwrap();
            let b = exact_words_germ(&flatten_for(&f, op).unwrap(), op, &cfg).unwrap();
            assert!(a.agrees_through(&b, 0).unwrap(), "{op:?}");
        }
    }

    #[test]
    fn non_integer_weight_is_unsupported() {
        let t = Tree::leaf(EsLetter::new(1, rat(1, 2)));
        assert!(matches!(
            exact_tree_germ(&t, SumOperator::Strict, &ExactConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }
}

#[cfg(test)]
mod coverage {
    use super::*;
    use crate::germ::renormalised_value;
    use crate::linear::InnerProduct;

    fn shapes(weights: &[i64]) -> Vec<Tree<EsLetter>> {
        let l = |i: u32, s: i64| EsLetter::int(i, s);
        let mut out = Vec::new();
        for &a in weights {
            out.push(Tree::leaf(l(1, a)));
            for &b in weights {
                out.push(Tree::new(l(1, a), vec![Tree::leaf(l(2, b))]));
                for &c in weights {
                    out.push(Tree::ladder(&[l(1, a), l(2, b), l(3, c)]).unwrap());
                    out.push(Tree::new(l(1, a), vec![Tree::leaf(l(2, b)), Tree::leaf(l(3, c))]));
                }
            }
        }
        out
    }

    #[test]
    fn small_trees_nonpositive() {
        let q = InnerProduct::identity();
        for t in shapes(&[0, -1, -2]) {
            for op in [SumOperator::Strict, SumOperator::Weak] {
                let g = exact_tree_germ(&t, op, &ExactConfig::default());
                let g = g.unwrap_or_else(|e| panic!("{t} {op:?}: {e}"));
                let v = renormalised_value(&q, &g).unwrap_or_else(|e| panic!("{t} {op:?}: {e}"));
                if t.decorations().iter().all(|d| d.weight <= -1) {
                    assert!(v.is_rational(), "{t} {op:?}: {v}");
                }
            }
        }
    }

    #[test]
    fn known_ladders() {
        let q = InnerProduct::identity();
        let l = |i: u32, s: i64| EsLetter::int(i, s);
        let cases = [
            (0, 0, SumOperator::Strict, Rational::from((3, 8))),
            (0, 0, SumOperator::Weak, Rational::from((-1, 8))),
            (-1, -1, SumOperator::Strict, Rational::from((1, 288))),
        ];
        for (a, b, op, want) in cases {
            let t = Tree::ladder(&[l(1, a), l(2, b)]).unwrap();
            let g = exact_tree_germ(&t, op, &ExactConfig::default()).unwrap();
            assert_eq!(renormalised_value(&q, &g).unwrap().as_rational(), Some(want));
        }
    }
}
