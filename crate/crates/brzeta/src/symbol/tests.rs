use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::*;
use crate::germ::{Germ, Poly};
use crate::linear::{AffineForm, InnerProduct, LinearForm};
use crate::numerics::{faulhaber, int, rat, CoeffPoly, FormalConstant};

fn z(i: u32) -> LinearForm {
    LinearForm::var(i)
}

fn order(l: LinearForm, c: i64) -> AffineForm {
    AffineForm::new(l, int(c))
}

fn x_pow(l: LinearForm, c: i64) -> SymbolGerm {
    SymbolGerm::power(order(l, c)).unwrap()
}

fn q() -> InnerProduct {
    InnerProduct::identity()
}

fn poly(c: &[i64]) -> SymbolGerm {
    SymbolGerm::polynomial(&c.iter().map(|x| int(*x)).collect::<Vec<_>>())
}

fn origin() -> BTreeMap<u32, Rational> {
    BTreeMap::new()
}

fn rational_of(c: &ZetaCoefficient) -> Rational {
    c.expand(0).unwrap().evaluate_zero().unwrap().as_rational().unwrap()
}

#[test]
fn products() {
    let p = x_pow(z(1), 1).mul(&x_pow(z(2), 2), &q()).unwrap();
    assert!(p.piece(&order(&z(1) + &z(2), 3)).is_some());
    let bad = x_pow(z(1), 0).mul(&SymbolGerm::power(AffineForm::new(-&z(1), rat(1, 2))).unwrap(), &q());
    assert!(bad.is_err());
    let p = poly(&[1, 1]).mul(&x_pow(z(1), 2), &q()).unwrap();
    assert_eq!(p.len(), 2);
    assert!(p.piece(&order(z(1), 3)).is_some());
    assert!(SymbolGerm::power(AffineForm::constant(rat(1, 2))).is_err());
}

#[test]
fn finite_parts() {
    assert_eq!(rational_of(&poly(&[3, 5, 2]).fp_infinity().unwrap()), int(3));
    let s = SymbolGerm::monomial(order(z(1), 2), ZetaCoefficient::from_rational(int(7))).unwrap();
    assert!(s.fp_infinity().unwrap().is_zero());
    let mixed = SymbolGerm::monomial(AffineForm::constant(int(0)), ZetaCoefficient::from_germ(Germ::var(3)))
        .unwrap()
        .add(&x_pow(z(2), 0));
    assert_eq!(mixed.fp_infinity().unwrap(), ZetaCoefficient::from_germ(Germ::var(3)));
}

#[test]
fn shifts() {
    let s = poly(&[0, 0, 1]).shift_expansion(&int(1), 0).unwrap();
    assert_eq!(s, poly(&[1, 2, 1]));
    let t = x_pow(z(1), 0).shift_expansion(&int(1), 1).unwrap();
    assert_eq!(t.len(), 2);
    let c = t.piece(&order(z(1), -1)).unwrap();
    assert_eq!(*c, ZetaCoefficient::from_germ(Germ::var(1)));
    assert_eq!(t.tail().bound(&z(1)), Some(&int(-2)));
    let u = x_pow(z(1), 3);
    assert_eq!(u.shift_expansion(&int(0), 4).unwrap(), u);
    // fp of a shifted nonconstant order vanishes
    assert!(t.fp_infinity().unwrap().is_zero());
}

#[test]
fn derivatives() {
    let d = x_pow(z(1), 2).differentiate();
    let c = d.piece(&order(z(1), 1)).unwrap();
    assert_eq!(*c, ZetaCoefficient::from_germ(Germ::from_poly(Poly::from_affine(&z(1), &int(2)))));
    assert!(poly(&[5]).differentiate().is_empty());
    assert_eq!(poly(&[0, 0, 1]).differentiate(), poly(&[0, 2]));
}

#[test]
fn faulhaber_example() {
    let s = euler_maclaurin(SumOperator::Weak, &poly(&[0, 0, 1]), 4).unwrap();
    let want = SymbolGerm::polynomial(&[int(0), rat(1, 6), rat(1, 2), rat(1, 3)]);
    assert_eq!(s, want);
    assert_eq!(faulhaber(2), vec![int(0), rat(1, 6), rat(1, 2), rat(1, 3)]);
}

#[test]
fn strict_power_shape() {
    let s = euler_maclaurin(SumOperator::Strict, &x_pow(z(1), 0), 2).unwrap();
    let zero = AffineForm::constant(int(0));
    let c = s.piece(&zero).unwrap();
    assert_eq!(*c, ZetaCoefficient::zeta(&AffineForm::new(-&z(1), int(0))).unwrap());
    let prim = s.piece(&order(z(1), 1)).unwrap();
    assert_eq!(*prim, ZetaCoefficient::from_germ(Germ::reciprocal(&order(z(1), 1)).unwrap()));
    assert_eq!(*s.piece(&order(z(1), 0)).unwrap(), ZetaCoefficient::from_rational(rat(-1, 2)));
    let b = s.piece(&order(z(1), -1)).unwrap();
    assert_eq!(*b, ZetaCoefficient::from_germ(Germ::var(1).scale_rat(&rat(1, 12))));
    assert_eq!(s.tail().bound(&z(1)), Some(&int(-2)));
}

#[test]
fn integral_shape() {
    let s = euler_maclaurin(SumOperator::Integral, &x_pow(z(1), 1), 2).unwrap();
    let prim = s.piece(&order(z(1), 2)).unwrap();
    assert_eq!(*prim, ZetaCoefficient::from_germ(Germ::reciprocal(&order(z(1), 2)).unwrap()));
    assert!(s.piece(&AffineForm::constant(int(0))).is_some());
    assert!(s.is_exact());
    assert!(cutoff_integral(&poly(&[0, 0, 0, 1])).unwrap().is_zero());
}

#[test]
fn oracle_examples() {
    let o = origin();
    assert_eq!(
        partial_sum_oracle(&poly(&[0, 0, 1]), 10, &o, SumOperator::Weak).unwrap(),
        CoeffPoly::from_rational(int(385))
    );
    assert_eq!(partial_sum_oracle(&poly(&[1]), 5, &o, SumOperator::Strict).unwrap(), CoeffPoly::from_rational(int(4)));
    assert_eq!(
        partial_sum_oracle(&poly(&[0, 1]), 4, &o, SumOperator::Weak).unwrap(),
        CoeffPoly::from_rational(int(10))
    );
}

#[test]
fn interpolation_on_polynomials() {
    let o = origin();
    for deg in 0..4 {
        let mut c = vec![0; deg + 1];
        c[deg] = 1;
        let s = poly(&c);
        for op in [SumOperator::Weak, SumOperator::Strict] {
            let e = euler_maclaurin(op, &s, 6).unwrap();
            for n in 1..=50u64 {
                let lhs = e.evaluate_exact(&Integer::from(n), &o).unwrap();
                assert_eq!(lhs, partial_sum_oracle(&s, n, &o, op).unwrap());
            }
        }
    }
}

#[test]
fn cutoff_sums() {
    let c = cutoff_sum(SumOperator::Strict, &x_pow(z(1), 0), 2).unwrap();
    assert_eq!(c, ZetaCoefficient::zeta(&AffineForm::new(-&z(1), int(0))).unwrap());
    assert!(cutoff_sum(SumOperator::Weak, &poly(&[1]), 2).unwrap().is_zero());
    assert_eq!(rational_of(&cutoff_sum(SumOperator::Strict, &poly(&[1]), 2).unwrap()), int(-1));
}

#[test]
fn zeta_expansions() {
    let at_one = ZetaCoefficient::zeta(&order(z(1), 1)).unwrap().expand(0).unwrap();
    let want = Germ::pole(&z(1)).unwrap().add(&Germ::constant(CoeffPoly::constant(FormalConstant::EulerGamma)));
    assert!(at_one.known_part().equals(&want).unwrap());
    assert_eq!(at_one.trusted_degree(), Some(0));
    let neg = ZetaCoefficient::zeta(&order(-&z(1), -1)).unwrap().expand(0).unwrap();
    assert_eq!(neg.known_part(), Germ::from_rational(rat(-1, 12)));
    let two = ZetaCoefficient::zeta(&order(z(1), 2)).unwrap().expand(0).unwrap();
    assert_eq!(two.known_part(), Germ::constant(CoeffPoly::constant(FormalConstant::zeta_at(2))));
    assert!(zeta_value(&int(1)).is_err());
}

#[test]
fn tails_block_finite_parts() {
    let s = euler_maclaurin(SumOperator::Strict, &x_pow(z(1), 0), 2).unwrap();
    let t = euler_maclaurin(SumOperator::Strict, &s.mul(&x_pow(z(2), -2), &q()).unwrap(), 2).unwrap();
    assert!(t.fp_infinity().is_err());
}

#[test]
fn k_invariance_of_retained_pieces() {
    let s = x_pow(&z(1) + &z(2), -1);
    for op in [SumOperator::Strict, SumOperator::Weak] {
        let a = euler_maclaurin(op, &s, 6).unwrap();
        let b = euler_maclaurin(op, &s, 7).unwrap();
        for (o, c) in a.pieces() {
            assert_eq!(b.piece(o), Some(c));
        }
    }
}

#[test]
fn json_round_trip() {
    let s = euler_maclaurin(SumOperator::Weak, &x_pow(z(1), -2), 4).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: SymbolGerm = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
}
