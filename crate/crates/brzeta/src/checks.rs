//! Invariant suites: the algebraic laws, projection contracts, summation
//! identities and zeta-value properties, each run on seeded random inputs
//! and known values. `brzeta check` and the acceptance run both use these.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::algebra::{
    branched_lift, check_locality_laws, diamond_product_combination, flatten, free_rb_operator, quasi_shuffle,
    star_combination, word_lift_combination, EsAlgebra, EsLetter, Forest, LawOutcome, LinComb, PartialSumAlgebra,
    RationalSumsAwayFromIntegers, SumKind, Tree, Word,
};
use crate::germ::{independent, project_minus, project_plus, Germ};
use crate::linear::{InnerProduct, LinearForm};
use crate::numerics::{
    bernoulli, constant_numeric_value, rational_reconstruct_float, special, CoeffPoly, FormalConstant,
};
use crate::symbol::{euler_maclaurin, partial_sum_oracle, SumOperator, SymbolGerm};
use crate::zeta::{
    candidate_poles, convergent_value, flatten_for, forest_vars, numeric_forest_value, numeric_renormalised,
    numeric_tree_value, numeric_word_value, numeric_words_value, orthogonal_blocks, regularised_germ, renormalised_bzv,
    BzvRequest, ConvergentConfig, ExactConfig, FitConfig, Mode, NumericConfig, NumericRoute, Route,
};

/// Groups of criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Germ,
    Symbol,
    Zeta,
    All,
}

impl Suite {
    pub fn criteria(self) -> Vec<u32> {
        match self {
            Suite::Algebra => vec![1, 2],
            Suite::Germ => vec![3],
            Suite::Symbol => vec![4],
            Suite::Zeta => vec![5, 6, 7, 8, 9],
            Suite::All => (1..=9).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    /// Correct and within the time budget.
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} [{:.2}s, budget {}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

type Outcome<T = String> = std::result::Result<T, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome<()> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::Result<T>, what: &str) -> Outcome<T> {
    r.map_err(|e| format!("{what}: {e}"))
}

pub fn run_suite(s: Suite) -> Vec<CriterionReport> {
    s.criteria().into_iter().map(run_criterion).collect()
}

pub fn run_criterion(id: u32) -> CriterionReport {
    let (title, budget, f): (&'static str, f64, fn() -> Outcome) = match id {
        1 => ("algebra laws", 1.0, criterion_algebra_laws),
        2 => ("branched lift factorises through words", 5.0, criterion_lift_through_words),
        3 => ("projection contracts", 1.0, criterion_projections),
        4 => ("Euler–Maclaurin interpolation", 1.0, criterion_euler_maclaurin),
        5 => ("depth-one renormalised values", 1.0, criterion_depth_one),
        6 => ("convergent cross-checks", 30.0, criterion_convergent),
        7 => ("locality multiplicativity", 30.0, criterion_multiplicativity),
        8 => ("rationality", 60.0, criterion_rationality),
        9 => ("route and convention invariances", 30.0, criterion_invariances),
        _ => ("unknown", 0.0, || Err("no such criterion".to_string())),
    };
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    let (correct, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let in_time = seconds < budget;
    if correct && !in_time {
        detail.push_str("; over the time budget");
    }
    CriterionReport { id, title, passed: correct && in_time, detail, seconds, budget_seconds: budget }
}

// ---------- random inputs ----------

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A word of `1..=max_len` letters (or possibly empty) with fresh labels.
fn random_word(rng: &mut ChaCha8Rng, next: &mut u32, min_len: usize, max_len: usize) -> Word<EsLetter> {
    let n = rng.gen_range(min_len..=max_len);
    Word(
        (0..n)
            .map(|_| {
                *next += 1;
                EsLetter::int(*next, rng.gen_range(-2..=3))
            })
            .collect(),
    )
}

/// A forest of `1..=max_vertices` vertices, labels `first..`, weights from `weights`.
fn random_forest(rng: &mut ChaCha8Rng, max_vertices: usize, weights: &[i64], first: u32) -> Forest<EsLetter> {
    let n = rng.gen_range(1..=max_vertices);
    let parents: Vec<Option<usize>> =
        (0..n).map(|i| if i == 0 || rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..i)) }).collect();
    let letters: Vec<EsLetter> =
        (0..n).map(|i| EsLetter::int(first + i as u32, *weights.choose(rng).expect("weights"))).collect();
    forest_from_parents(&parents, &letters)
}

fn forest_from_parents(parents: &[Option<usize>], letters: &[EsLetter]) -> Forest<EsLetter> {
    fn build(i: usize, parents: &[Option<usize>], letters: &[EsLetter]) -> Tree<EsLetter> {
        let kids = (0..parents.len()).filter(|&j| parents[j] == Some(i)).map(|j| build(j, parents, letters)).collect();
        Tree::new(letters[i].clone(), kids)
    }
    Forest::new((0..parents.len()).filter(|&i| parents[i].is_none()).map(|i| build(i, parents, letters)).collect())
}

fn relabel_tree(t: &Tree<EsLetter>, map: &mut dyn FnMut(u32) -> u32) -> Tree<EsLetter> {
    let label = t.decoration.label().expect("single label");
    let d = EsLetter::new(map(label), t.decoration.weight.clone());
    let kids = t.children().iter().map(|c| relabel_tree(c, map)).collect();
    Tree::new(d, kids)
}

fn relabel(f: &Forest<EsLetter>, map: &mut dyn FnMut(u32) -> u32) -> Forest<EsLetter> {
    Forest::new(f.trees().iter().map(|t| relabel_tree(t, map)).collect())
}

/// Labels `1..=n` in traversal order.
fn canonical(f: &Forest<EsLetter>) -> Forest<EsLetter> {
    let mut next = 0;
    relabel(f, &mut |_| {
        next += 1;
        next
    })
}

fn random_form(rng: &mut ChaCha8Rng, vars: &[u32]) -> LinearForm {
    loop {
        let l = LinearForm::from_pairs(vars.iter().map(|&v| (v, Rational::from(rng.gen_range(-2..=2)))));
        if !l.is_zero() {
            return l;
        }
    }
}

fn random_germ(rng: &mut ChaCha8Rng, vars: &[u32]) -> crate::Result<Germ> {
    let mut g = Germ::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let mut num = Germ::from_rational(Rational::from(rng.gen_range(-3..=3)));
        for &v in vars {
            num = num.add(&Germ::var(v).scale_rat(&Rational::from(rng.gen_range(-2..=2))));
        }
        if rng.gen_bool(0.5) {
            let (a, b) = (*vars.choose(rng).expect("vars"), *vars.choose(rng).expect("vars"));
            num = num.add(&Germ::var(a).mul(&Germ::var(b)));
        }
        let mut term = num;
        for _ in 0..rng.gen_range(0..=3) {
            term = term.mul(&Germ::pole(&random_form(rng, vars))?);
        }
        g = g.add(&term);
    }
    Ok(g)
}

// ---------- criteria ----------

fn criterion_algebra_laws() -> Outcome {
    let mut r = rng(1);
    let alg = EsAlgebra;
    let p = |c: &LinComb<Word<EsLetter>>| c.map_terms(|w| free_rb_operator(w, &alg));
    for lam in [-1i64, 0, 1] {
        let lam = Rational::from(lam);
        for _ in 0..200 {
            let mut next = 0;
            let u = random_word(&mut r, &mut next, 0, 2);
            let v = random_word(&mut r, &mut next, 0, 2);
            let w = random_word(&mut r, &mut next, 0, 2);
            let uv = ok(quasi_shuffle(&lam, &u, &v, &alg), "⋆")?;
            let vu = ok(quasi_shuffle(&lam, &v, &u, &alg), "⋆")?;
            ensure(uv == vu, || format!("⋆ not commutative on {u}, {v} (λ={lam})"))?;
            let left = ok(star_combination(&lam, &uv, &LinComb::single(w.clone()), &alg), "⋆")?;
            let vw = ok(quasi_shuffle(&lam, &v, &w, &alg), "⋆")?;
            let right = ok(star_combination(&lam, &LinComb::single(u.clone()), &vw, &alg), "⋆")?;
            ensure(left == right, || format!("⋆ not associative on {u}, {v}, {w} (λ={lam})"))?;
        }
        for _ in 0..200 {
            let mut next = 0;
            let u = LinComb::single(random_word(&mut r, &mut next, 1, 3));
            let v = LinComb::single(random_word(&mut r, &mut next, 1, 3));
            let d = |a: &LinComb<Word<EsLetter>>, b: &LinComb<Word<EsLetter>>| {
                ok(diamond_product_combination(&lam, a, b, &alg), "◇")
            };
            let lhs = d(&p(&u), &p(&v))?;
            let mut rhs = p(&d(&p(&u), &v)?);
            rhs.add_scaled(&p(&d(&u, &p(&v))?), &Rational::from(1));
            rhs.add_scaled(&p(&d(&u, &v)?), &lam);
            ensure(lhs == rhs, || format!("Rota–Baxter identity fails on {u}, {v} (λ={lam})"))?;
        }
    }
    let samples: Vec<Rational> = [(1, 3), (1, 5), (2, 7), (1, 2), (3, 4)].iter().map(|&p| Rational::from(p)).collect();
    let third = Rational::from((1, 3));
    let report = check_locality_laws(&RationalSumsAwayFromIntegers, &samples, &[vec![third.clone()]], true);
    match &report.closure {
        LawOutcome::Fail { witness, .. } if *witness == vec![third.clone(), third.clone()] => {}
        other => return Err(format!("expected the (1/3, 1/3) closure failure, got {other:?}")),
    }
    Ok("⋆ laws and Rota–Baxter identity on 200 cases for each λ in {-1,0,1}; closure witness (1/3,1/3)".into())
}

fn criterion_lift_through_words() -> Outcome {
    let mut r = rng(2);
    for kind in [SumKind::Strict, SumKind::Weak] {
        let alg = PartialSumAlgebra::new(20, kind);
        for _ in 0..100 {
            let f = random_forest(&mut r, 6, &[-2, -1, 0, 1, 2], 1);
            let words = ok(flatten(&kind.star_parameter(), &f, &EsAlgebra), "flatten")?;
            let lhs = ok(branched_lift(&alg, &f), "branched lift")?;
            let rhs = ok(word_lift_combination(&alg, &words), "word lift")?;
            ensure(lhs == rhs, || format!("{f} ({kind:?}): branched and word lifts differ"))?;
        }
    }
    Ok("100 forests with up to 6 vertices, strict and weak, n ≤ 20".into())
}

fn criterion_projections() -> Outcome {
    let mut r = rng(3);
    let q = InnerProduct::identity();
    let plus = |g: &Germ| ok(project_plus(&q, g), "π₊");
    let minus = |g: &Germ| ok(project_minus(&q, g), "π₋");
    let eq = |a: &Germ, b: &Germ| ok(a.equals(b), "comparison");
    for _ in 0..100 {
        let n = r.gen_range(1..=3);
        let vars: Vec<u32> = (1..=n).collect();
        let g = ok(random_germ(&mut r, &vars), "germ")?;
        let p = plus(&g)?;
        ensure(eq(&p.add(&minus(&g)?), &g)?, || format!("π₊ + π₋ ≠ id on {g}"))?;
        ensure(eq(&plus(&p)?, &p)?, || format!("π₊ not idempotent on {g}"))?;
    }
    let g = Germ::var(1).mul(&ok(Germ::pole(&LinearForm::sum_of(&[1, 2])), "pole")?);
    ensure(eq(&plus(&g)?, &Germ::from_rational(Rational::from((1, 2))))?, || "π₊(z₁/(z₁+z₂)) ≠ 1/2".into())?;
    for _ in 0..100 {
        let (na, nb) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let a = ok(random_germ(&mut r, &(1..=na).collect::<Vec<u32>>()), "germ")?;
        let b = ok(random_germ(&mut r, &(4..4 + nb).collect::<Vec<u32>>()), "germ")?;
        ensure(independent(&q, &a, &b), || format!("{a} and {b} should be independent"))?;
        let lhs = minus(&a)?.mul(&minus(&b)?);
        let rhs = minus(&minus(&a)?.mul(&b))?.add(&minus(&a.mul(&minus(&b)?))?).sub(&minus(&a.mul(&b))?);
        ensure(eq(&lhs, &rhs)?, || format!("π₋ Rota–Baxter identity fails on {a}, {b}"))?;
        ensure(eq(&plus(&a.mul(&b))?, &plus(&a)?.mul(&plus(&b)?))?, || format!("π₊ not multiplicative on {a}, {b}"))?;
    }
    Ok("100 random germs, 100 independent pairs, π₊(z₁/(z₁+z₂)) = 1/2".into())
}

fn criterion_euler_maclaurin() -> Outcome {
    let origin = BTreeMap::new();
    let poly = |c: &[i64]| SymbolGerm::polynomial(&c.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>());
    let at = |s: &SymbolGerm, n: u64| ok(s.evaluate_exact(&Integer::from(n), &origin), "evaluation");
    for deg in 0..4 {
        let mut c = vec![0; deg + 1];
        c[deg] = 1;
        let s = poly(&c);
        for op in [SumOperator::Weak, SumOperator::Strict] {
            let e = ok(euler_maclaurin(op, &s, 6), "Euler–Maclaurin")?;
            for n in 1..=50 {
                let want = ok(partial_sum_oracle(&s, n, &origin, op), "oracle")?;
                ensure(at(&e, n)? == want, || format!("x^{deg}, {op:?}, N = {n}"))?;
            }
        }
    }
    let squares = ok(euler_maclaurin(SumOperator::Weak, &poly(&[0, 0, 1]), 6), "Euler–Maclaurin")?;
    for n in 1..=50i64 {
        let want = CoeffPoly::from_rational(Rational::from(n * (n + 1) * (2 * n + 1) / 6));
        ensure(at(&squares, n as u64)? == want, || format!("Σ n² at N = {n}"))?;
    }
    let mut r = rng(4);
    let q = InnerProduct::identity();
    for op in [SumOperator::Weak, SumOperator::Strict] {
        let sum = |s: &SymbolGerm| ok(euler_maclaurin(op, s, 10), "Euler–Maclaurin");
        let mul = |a: &SymbolGerm, b: &SymbolGerm| ok(a.mul(b, &q), "product");
        for _ in 0..50 {
            let a = poly(&(0..r.gen_range(1..=3)).map(|_| r.gen_range(-3..=3)).collect::<Vec<_>>());
            let b = poly(&(0..r.gen_range(1..=3)).map(|_| r.gen_range(-3..=3)).collect::<Vec<_>>());
            let (pa, pb) = (sum(&a)?, sum(&b)?);
            let lhs = mul(&pa, &pb)?;
            let rhs =
                sum(&mul(&pa, &b)?)?.add(&sum(&mul(&a, &pb)?)?).add(&sum(&mul(&a, &b)?)?.scale_rat(&op.rb_weight()));
            let n = r.gen_range(1..=1000u64);
            ensure(at(&lhs, n)? == at(&rhs, n)?, || format!("Rota–Baxter identity ({op:?}) at N = {n}"))?;
        }
    }
    Ok("x^0..x^3 for N ≤ 50, Faulhaber Σn², Rota–Baxter identities at 50 points each".into())
}

fn gamma(prec: u32) -> Outcome<Float> {
    ok(constant_numeric_value(&FormalConstant::EulerGamma, prec), "γ")
}

fn criterion_depth_one() -> Outcome {
    let listed = [(0, (-1, 2)), (-1, (-1, 12)), (-2, (0, 1)), (-3, (1, 120))];
    for (s, want) in listed {
        let n = -s;
        // ζ(-n) = -B_{n+1}/(n+1), with ζ(0) = -1/2
        let oracle = if n == 0 { Rational::from((-1, 2)) } else { -bernoulli(n as usize + 1) / Rational::from(n + 1) };
        ensure(oracle == want, || format!("oracle ζ({s}) = {oracle}"))?;
        let mut req = BzvRequest::new(Tree::leaf(EsLetter::int(1, s)).into(), SumOperator::Strict);
        req.config.mode = Mode::Exact;
        let r = ok(renormalised_bzv(&req), "renormalised value")?;
        let got = r.exact_value().and_then(|v| v.as_rational());
        ensure(got.as_ref() == Some(&oracle), || format!("ζ^ren({s}) = {}, want {oracle}", r.decimal()))?;
    }
    let mut req = BzvRequest::new(Tree::leaf(EsLetter::int(1, 1)).into(), SumOperator::Strict);
    req.config.mode = Mode::Numeric;
    let r = ok(renormalised_bzv(&req), "renormalised value")?;
    let err = (r.to_f64() - gamma(128)?.to_f64()).abs();
    ensure(err < 1e-7, || format!("ζ^ren(1) = {} differs from γ by {err:e}", r.decimal()))?;
    Ok(format!("s = 0, -1, -2, -3 exact; ζ^ren(1) - γ = {err:.1e}"))
}

fn criterion_convergent() -> Outcome {
    let prec = 192;
    let cfg = ConvergentConfig::default();
    let l = |i: u32, s: i64| EsLetter::int(i, s);
    let pi = Float::with_val(prec, Constant::Pi);
    let zeta2 = Float::with_val(prec, pi.clone().pow(2u32) / 6u32);
    let zeta4 = Float::with_val(prec, pi.pow(4u32) / 90u32);
    let close = |a: &Float, b: &Float, tol: f64, what: &str| -> Outcome<f64> {
        let e = Float::with_val(prec, a - b).abs().to_f64();
        ensure(e < tol, || format!("{what}: error {e:e}"))?;
        Ok(e)
    };
    let mut worst = 0f64;
    let v = ok(convergent_value(&Tree::leaf(l(1, 2)).into(), SumOperator::Strict, 1e-10, &cfg), "ζ(2)")?;
    worst = worst.max(close(&v, &zeta2, 1e-8, "ζ(2)")?);

    let ladder21 = Tree::ladder(&[l(1, 2), l(2, 1)]).expect("ladder");
    let v =
        ok(numeric_tree_value(&ladder21, SumOperator::Strict, &BTreeMap::new(), &NumericConfig::default()), "ζ(2,1)")?;
    let zeta3 = special::zeta(&Float::with_val(prec, 3), prec);
    worst = worst.max(close(&v, &zeta3, 1e-8, "ζ(2,1) = ζ(3)")?);

    let ladder22: Forest<EsLetter> = Tree::ladder(&[l(1, 2), l(2, 2)]).expect("ladder").into();
    let want = Float::with_val(prec, (Float::with_val(prec, zeta2.square_ref()) - &zeta4) / 2u32);
    let v = ok(convergent_value(&ladder22, SumOperator::Strict, 1e-10, &cfg), "ζ(2,2)")?;
    worst = worst.max(close(&v, &want, 1e-8, "ζ(2,2) by nested sums")?);

    let corolla: Forest<EsLetter> = Tree::new(l(1, 2), vec![Tree::leaf(l(2, 2)), Tree::leaf(l(3, 2))]).into();
    let direct = ok(convergent_value(&corolla, SumOperator::Strict, 1e-9, &cfg), "corolla")?;
    let words = ok(flatten_for(&corolla, SumOperator::Strict), "flatten")?;
    let mut via_words = Float::with_val(prec, 0);
    for (w, c) in words.iter() {
        let v = ok(numeric_word_value(w, SumOperator::Strict, &BTreeMap::new(), &NumericConfig::default()), "word")?;
        via_words += Float::with_val(prec, v * c);
    }
    worst = worst.max(close(&direct, &via_words, 1e-7, "corolla: nested sum vs words")?);
    Ok(format!("largest error {worst:.1e}"))
}

fn exact_value(f: &Forest<EsLetter>, op: SumOperator) -> Outcome<CoeffPoly> {
    let mut req = BzvRequest::new(f.clone(), op);
    req.config.mode = Mode::Exact;
    let r = ok(renormalised_bzv(&req), &format!("exact value of {f}"))?;
    r.exact_value().cloned().ok_or_else(|| "no exact value".to_string())
}

fn criterion_multiplicativity() -> Outcome {
    let mut r = rng(7);
    let q = InnerProduct::identity();
    let weights = [0, -1, -2];
    let fit = FitConfig::fast();
    let (mut worst_ren, mut worst_reg) = (0f64, 0f64);
    for _ in 0..20 {
        let op = if r.gen_bool(0.5) { SumOperator::Strict } else { SumOperator::Weak };
        let a = random_forest(&mut r, 3, &weights, 1);
        let b = random_forest(&mut r, 3, &weights, 11);
        let ab = a.product(&b);
        let (va, vb, vab) = (exact_value(&a, op)?, exact_value(&b, op)?, exact_value(&ab, op)?);
        ensure(vab == &va * &vb, || format!("{ab} ({op:?}): {vab} ≠ {va} · {vb}"))?;

        let want = ok((&va * &vb).numeric_value(128), "value")?;
        let n = ok(numeric_renormalised(&ab, op, &q, NumericRoute::Branched, &fit), "numeric value")?;
        let e = Float::with_val(128, &n.value - &want).abs().to_f64();
        ensure(e < 1e-6, || format!("{ab} ({op:?}): numeric {} vs exact {want}", n.value))?;
        worst_ren = worst_ren.max(e);

        // the regularised values, with the product flattened as a whole
        let vars = forest_vars(&ab);
        // a generic point: off every hyperplane where a word of the flattening may be singular
        let poles = ok(candidate_poles(&ab, op), "poles")?;
        let z: BTreeMap<u32, Rational> = loop {
            let z: BTreeMap<u32, Rational> =
                vars.iter().map(|&v| (v, Rational::from((r.gen_range(-9..=9) | 1, 113)))).collect();
            if poles.iter().all(|l| l.eval(&z) != 0) {
                break z;
            }
        };
        let ncfg = fit.numeric;
        let whole = ok(numeric_words_value(&ok(flatten_for(&ab, op), "flatten")?, op, &z, &ncfg), "words value")?;
        let parts = ok(numeric_forest_value(&a, op, &z, &ncfg), "value")?
            * ok(numeric_forest_value(&b, op, &z, &ncfg), "value")?;
        let e = Float::with_val(128, &whole - &parts).abs().to_f64() / parts.to_f64().abs().max(1.0);
        ensure(e < 1e-6, || format!("{ab} ({op:?}) at {z:?}: {whole} vs {parts}"))?;
        worst_reg = worst_reg.max(e);
    }
    Ok(format!(
        "20 pairs exact; numeric renormalised product error {worst_ren:.1e}; regularised words-vs-product error {worst_reg:.1e}"
    ))
}

/// All forests with at most three vertices and weights from the list, up to
/// relabelling.
fn small_forests(weights: &[i64]) -> Vec<Forest<EsLetter>> {
    let mut shapes: Vec<Vec<Option<usize>>> = Vec::new();
    for n in 1..=3usize {
        let mut acc: Vec<Vec<Option<usize>>> = vec![vec![None]];
        for i in 1..n {
            acc = acc
                .into_iter()
                .flat_map(|p| {
                    std::iter::once(None).chain((0..i).map(Some)).map(move |choice| {
                        let mut q = p.clone();
                        q.push(choice);
                        q
                    })
                })
                .collect();
        }
        shapes.extend(acc);
    }
    let mut seen: BTreeMap<String, Forest<EsLetter>> = BTreeMap::new();
    for parents in shapes {
        let n = parents.len();
        let mut assignment = vec![0usize; n];
        loop {
            let letters: Vec<EsLetter> = (0..n).map(|i| EsLetter::int(i as u32 + 1, weights[assignment[i]])).collect();
            let f = forest_from_parents(&parents, &letters);
            let key = f.map(|d| d.weight.clone()).to_string();
            seen.entry(key).or_insert_with(|| canonical(&f));
            let mut i = 0;
            while i < n && assignment[i] + 1 == weights.len() {
                assignment[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            assignment[i] += 1;
        }
    }
    seen.into_values().collect()
}

fn criterion_rationality() -> Outcome {
    let q = InnerProduct::identity();
    let fit = FitConfig::default();
    let forests = small_forests(&[-1, -2]);
    let mut memo: HashMap<(String, i32), Float> = HashMap::new();
    let mut worst = 0f64;
    let mut misses = Vec::new();
    for op in [SumOperator::Strict, SumOperator::Weak] {
        for f in &forests {
            let exact = exact_value(f, op)?;
            let Some(exact) = exact.as_rational() else {
                return Err(format!("{f} ({op:?}): formal constants survive in {exact}"));
            };
            let blocks = orthogonal_blocks(f, &q);
            ensure(blocks.len() == f.trees().len(), || format!("{f}: trees should be mutually independent"))?;
            let mut value = Float::with_val(fit.numeric.precision_bits, 1);
            for b in &blocks {
                let key = (canonical(b).to_string(), op.lambda());
                if !memo.contains_key(&key) {
                    let v = ok(numeric_renormalised(b, op, &q, NumericRoute::Branched, &fit), "numeric value")?;
                    memo.insert(key.clone(), v.value);
                }
                value *= &memo[&key];
            }
            worst = worst.max(Float::with_val(128, &value - &exact).abs().to_f64());
            let rec = rational_reconstruct_float(&value, 1_000_000, 1e-9);
            if rec.as_ref() != Some(&exact) {
                misses.push(format!("{f} ({op:?}): exact {exact}, reconstructed {rec:?}"));
            }
        }
    }
    let summary = format!("{} forests, both λ; largest numeric error {worst:.1e}", forests.len());
    if misses.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {} reconstruction mismatch(es): {}", misses.len(), misses.join("; ")))
    }
}

fn criterion_invariances() -> Outcome {
    let mut r = rng(9);
    let exact = ExactConfig::default();
    let l = |i: u32, s: i64| EsLetter::int(i, s);
    // route agreement, exact
    let mut cases: Vec<Forest<EsLetter>> = (0..20).map(|_| random_forest(&mut r, 3, &[0, -1, -2], 1)).collect();
    cases.push(Tree::leaf(l(1, 1)).into());
    for f in &cases {
        for op in [SumOperator::Strict, SumOperator::Weak] {
            let (_, checks) = ok(regularised_germ(f, op, Route::Both, &exact), &format!("{f}"))?;
            ensure(checks.iter().all(|c| c.passed), || format!("{f} ({op:?}): {:?}", checks))?;
        }
    }
    // route agreement, numeric; the first two have no exact germ (infinite Euler–Maclaurin tail)
    let half = |i: u32, n: i64, d: i64| EsLetter::new(i, Rational::from((n, d)));
    for f in [
        Forest::from(Tree::ladder(&[l(1, 2), l(2, 1)]).expect("ladder")),
        Forest::from(Tree::new(l(1, 1), vec![Tree::leaf(l(2, 0)), Tree::leaf(l(3, -1))])),
        Forest::from(Tree::ladder(&[half(1, 3, 2), half(2, 1, 3)]).expect("ladder")),
        Forest::from(Tree::new(half(1, -1, 2), vec![Tree::leaf(half(2, 5, 4)), Tree::leaf(half(3, 1, 3))])),
    ] {
        let mut req = BzvRequest::new(f.clone(), SumOperator::Strict);
        req.config.mode = Mode::Numeric;
        req.config.route = Route::Both;
        req.config.fit = FitConfig::fast();
        let res = ok(renormalised_bzv(&req), &format!("{f}"))?;
        ensure(res.checks.iter().any(|c| c.name == "route_agreement" && c.passed), || {
            format!("{f}: {:?}", res.checks)
        })?;
    }
    // label permutations
    for _ in 0..10 {
        let f = random_forest(&mut r, 3, &[0, -1, -2], 1);
        let mut pool: Vec<u32> = (1..=20).collect();
        pool.shuffle(&mut r);
        let map: BTreeMap<u32, u32> = (1..=3).zip(pool).collect();
        let g = relabel(&f, &mut |x| map[&x]);
        for op in [SumOperator::Strict, SumOperator::Weak] {
            let (a, b) = (exact_value(&f, op)?, exact_value(&g, op)?);
            ensure(a == b, || format!("{f} vs {g} ({op:?}): {a} ≠ {b}"))?;
        }
    }
    // K against K+1
    let z = |i: u32| LinearForm::var(i);
    let power = |l: LinearForm, c: i64| SymbolGerm::power(crate::linear::AffineForm::new(l, Rational::from(c)));
    let symbols = [
        ok(power(z(1), 0), "symbol")?,
        ok(power(z(1), -1), "symbol")?,
        ok(power(&z(1) + &z(2), -2), "symbol")?,
        ok(power(z(1), 2), "symbol")?,
        SymbolGerm::polynomial(&[Rational::from(1), Rational::from(-2), Rational::from(3)]),
    ];
    for s in &symbols {
        for op in [SumOperator::Strict, SumOperator::Weak] {
            for k in 3..8 {
                let a = ok(euler_maclaurin(op, s, k), "Euler–Maclaurin")?;
                let b = ok(euler_maclaurin(op, s, k + 1), "Euler–Maclaurin")?;
                for (o, c) in a.pieces() {
                    ensure(b.piece(o) == Some(c), || format!("{op:?}, K = {k}: piece of order {o} changed"))?;
                }
            }
        }
    }
    Ok(format!(
        "{} forests on both routes, 4 numeric route checks, 10 relabellings, K vs K+1 on {} symbols",
        cases.len(),
        symbols.len()
    ))
}
