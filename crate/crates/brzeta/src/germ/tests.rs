use std::collections::BTreeMap;

use rug::Rational;

use super::*;
use crate::linear::{AffineForm, InnerProduct, LinearForm};
use crate::numerics::{rat, CoeffPoly};

fn z(i: u32) -> LinearForm {
    LinearForm::var(i)
}

fn pole(f: LinearForm) -> Germ {
    Germ::pole(&f).unwrap()
}

fn q() -> InnerProduct {
    InnerProduct::identity()
}

fn r(c: &CoeffPoly) -> Rational {
    c.as_rational().unwrap()
}

#[test]
fn products() {
    assert!(pole(z(1)).mul(&Germ::var(1)).equals(&Germ::one()).unwrap());
    assert_eq!(pole(z(1)).mul(&Germ::var(1)), Germ::one());
    let s = &z(1) + &z(2);
    let sq = pole(s.clone()).mul(&pole(s.clone()));
    assert_eq!(sq.terms().len(), 1);
    assert_eq!(sq.terms()[0].poles, vec![(s.clone(), 2)]);
    let g = Germ::var(2).mul(&pole(s));
    assert_eq!(g.mul(&Germ::one()), g);
}

#[test]
fn supports() {
    assert_eq!(pole(z(1)).support().rank(), 1);
    let g = Germ::var(2).mul(&pole(&z(1) + &z(2)));
    assert_eq!(g.support().rank(), 2);
    assert!(independent(&q(), &pole(z(1)), &pole(z(2))));
    assert!(!independent(&q(), &pole(z(1)), &pole(&z(1) + &z(2))));
}

#[test]
fn projection_examples() {
    assert!(project_plus(&q(), &pole(z(1))).unwrap().is_zero());
    let g = Germ::var(1).mul(&pole(&z(1) + &z(2)));
    let p = project_plus(&q(), &g).unwrap();
    assert!(p.equals(&Germ::from_rational(rat(1, 2))).unwrap());
    let poly = Germ::var(1).mul(&Germ::var(2)).add(&Germ::from_rational(rat(3, 4)));
    assert_eq!(project_plus(&q(), &poly).unwrap(), poly);
}

#[test]
fn evaluations() {
    let g = Germ::from_rational(rat(1, 2)).add(&Germ::var(1).scale_rat(&rat(3, 1)));
    assert_eq!(r(&g.evaluate_zero().unwrap()), rat(1, 2));
    assert!(pole(z(1)).evaluate_zero().is_err());
    let pt: BTreeMap<u32, Rational> = [(1, rat(1, 2)), (2, rat(1, 2))].into();
    assert_eq!(r(&pole(&z(1) + &z(2)).evaluate_point(&pt).unwrap()), rat(1, 1));
    assert!(pole(z(1)).evaluate_point(&[(1, rat(0, 1))].into()).is_err());
}

fn samples() -> Vec<Germ> {
    let s = &z(1) + &z(2);
    let d = &z(1) - &z(2);
    vec![
        pole(z(1)),
        Germ::var(1).mul(&pole(s.clone())),
        Germ::var(2).mul(&Germ::var(2)).mul(&pole(s.clone())).mul(&pole(z(1))),
        pole(s.clone()).mul(&pole(d.clone())).mul(&Germ::var(1)).mul(&Germ::var(2)).mul(&Germ::var(2)),
        pole(z(3)).mul(&pole(&z(3) + &z(1))).mul(&Germ::linear(&(&z(1) + &z(3).scale(&rat(2, 1))))),
        Germ::from_rational(rat(5, 3)).add(&Germ::var(2)),
    ]
}

#[test]
fn splitting_contracts() {
    for g in samples() {
        let d = decompose(&q(), &g, 0).unwrap();
        assert!(d.holomorphic.add(&d.polar).equals(&g).unwrap(), "{g}");
        let pp = project_plus(&q(), &d.holomorphic).unwrap();
        assert!(pp.equals(&d.holomorphic).unwrap(), "{g}");
        assert!(project_plus(&q(), &d.polar).unwrap().is_zero(), "{g}");
        let mm = project_minus(&q(), &d.polar).unwrap();
        assert!(mm.equals(&d.polar).unwrap(), "{g}");
    }
}

#[test]
fn multiplicative_on_independent_pairs() {
    let a = Germ::var(1).mul(&pole(&z(1) + &z(2))).add(&pole(z(1)));
    let b = pole(z(3)).mul(&Germ::linear(&(&z(3) + &z(4)))).add(&Germ::var(4));
    assert!(independent(&q(), &a, &b));
    let lhs = project_plus(&q(), &a.mul(&b)).unwrap();
    let rhs = project_plus(&q(), &a).unwrap().mul(&project_plus(&q(), &b).unwrap());
    assert!(lhs.equals(&rhs).unwrap());
}

#[test]
fn minus_is_weight_minus_one_rota_baxter() {
    let qq = q();
    let a = Germ::var(1).mul(&pole(&z(1) + &z(2))).add(&pole(z(2)));
    let b = pole(z(3)).mul(&pole(&z(3) + &z(4))).mul(&Germ::var(4));
    let m = |g: &Germ| project_minus(&qq, g).unwrap();
    let lhs = m(&a).mul(&m(&b));
    let rhs = m(&m(&a).mul(&b)).add(&m(&a.mul(&m(&b)))).sub(&m(&a.mul(&b)));
    assert!(lhs.equals(&rhs).unwrap());
}

#[test]
fn custom_inner_product() {
    let qq = InnerProduct::from_entries([(1, 2, rat(1, 2))]).unwrap();
    let g = Germ::var(2).mul(&pole(z(1)));
    let d = decompose(&qq, &g, 0).unwrap();
    assert!(d.holomorphic.add(&d.polar).equals(&g).unwrap());
    // z2 = (z2 - z1/2) + z1/2 with z2 - z1/2 ⟂ z1
    assert!(d.holomorphic.equals(&Germ::from_rational(rat(1, 2))).unwrap());
}

#[test]
fn units_expand_through_requested_degree() {
    let u = AffineForm::new(z(1), rat(1, 1));
    let g = Germ::reciprocal(&u).unwrap();
    let e = g.expand_units(2);
    assert_eq!(e.trusted_degree(), Some(2));
    let known = Germ::one().sub(&Germ::var(1)).add(&Germ::var(1).mul(&Germ::var(1)));
    assert!(e.agrees_through(&known, 2).unwrap());
    assert!(g.agrees_through(&known, 2).unwrap());
    assert!(!g.agrees_through(&Germ::one(), 1).unwrap());
    // pole times unit
    let h = pole(z(1)).mul(&g);
    assert_eq!(r(&renormalised_value(&q(), &h).unwrap()), rat(-1, 1));
}

#[test]
fn remainders_in_products() {
    let a = pole(z(1)).add(&Germ::remainder([1].into(), 1, false));
    let b = pole(z(2)).add(&Germ::from_rational(rat(2, 1))).add(&Germ::remainder([2].into(), 1, false));
    let v = renormalised_value(&q(), &a.mul(&b)).unwrap();
    assert_eq!(r(&v), rat(0, 1));
    let c = Germ::from_rational(rat(3, 1)).add(&Germ::remainder([3].into(), 1, false));
    let v = renormalised_value(&q(), &b.mul(&c)).unwrap();
    assert_eq!(r(&v), rat(6, 1));
    // entangled remainders are refused
    let bad = pole(&z(1) + &z(2)).mul(&Germ::remainder([1].into(), 1, false));
    assert!(renormalised_value(&q(), &bad).is_err());
    // R - R is not zero
    let rr = Germ::remainder([1].into(), 1, false);
    assert!(!rr.sub(&rr).is_zero());
}

#[test]
fn json_round_trip() {
    let g = Germ::var(2)
        .mul(&pole(&z(1) + &z(2)))
        .mul(&Germ::reciprocal(&AffineForm::new(z(1).scale(&rat(2, 1)), rat(3, 1))).unwrap())
        .add(&Germ::remainder([1, 2].into(), 2, true));
    let s = serde_json::to_string(&g).unwrap();
    assert!(s.contains("\"poles\""));
    let back: Germ = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
}

#[test]
fn law_checker_on_germs() {
    use crate::algebra::check_locality_laws;
    let s = GermLocality::default();
    let samples = vec![pole(z(1)), pole(z(2)), Germ::var(3).mul(&pole(&z(3) + &z(4))), pole(&z(1) + &z(2))];
    let rep = check_locality_laws(&s, &samples, &[samples[..1].to_vec(), samples[2..3].to_vec()], true);
    assert!(rep.passed());
}
