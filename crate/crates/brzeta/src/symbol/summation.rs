use std::collections::BTreeMap;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{SymbolGerm, ZetaCoefficient};
use crate::algebra::SumKind;
use crate::germ::{Germ, Poly};
use crate::linear::AffineForm;
use crate::numerics::{as_i64, bernoulli, factorial, faulhaber, CoeffPoly};
use crate::{Error, Result};

/// The summation operators on symbols and the integration operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumOperator {
    /// `Σ_{n=1}^{N-1}`
    Strict,
    /// `Σ_{n=1}^{N}`
    Weak,
    /// `∫_0^x χ(y) σ(y) dy`
    Integral,
}

impl SumOperator {
    /// `-1` strict, `+1` weak, `0` integral.
    pub fn from_lambda(lambda: i32) -> Result<Self> {
        match lambda {
            -1 => Ok(SumOperator::Strict),
            1 => Ok(SumOperator::Weak),
            0 => Ok(SumOperator::Integral),
            _ => Err(Error::Invalid(format!("λ must be -1, 0 or 1, got {lambda}"))),
        }
    }

    pub fn lambda(self) -> i32 {
        match self {
            SumOperator::Strict => -1,
            SumOperator::Weak => 1,
            SumOperator::Integral => 0,
        }
    }

    /// Rota–Baxter weight `-λ`.
    pub fn rb_weight(self) -> Rational {
        Rational::from(-self.lambda())
    }

    /// Coefficient of the boundary term `x^α`.
    pub fn boundary(self) -> Rational {
        Rational::from((self.lambda(), 2))
    }
}

impl From<SumKind> for SumOperator {
    fn from(k: SumKind) -> Self {
        match k {
            SumKind::Strict => SumOperator::Strict,
            SumKind::Weak => SumOperator::Weak,
        }
    }
}

/// `α(α-1)⋯(α-n+1)` as a polynomial germ.
pub fn falling_factorial(alpha: &AffineForm, n: u32) -> Poly {
    let mut p = Poly::one();
    for i in 0..n {
        let f = alpha.shift(&Rational::from(-(i as i64)));
        p = p.mul(&Poly::from_affine(&f.linear, &f.constant));
    }
    p
}

/// Constant produced by summing `c·x^α` for a nonconstant order `α`:
/// `c·ζ(-α)` for sums, `c·(M(α) - 1/(α+1))` for the integral, `M` the χ-moment.
pub fn constant_piece(op: SumOperator, c: &ZetaCoefficient, alpha: &AffineForm) -> Result<ZetaCoefficient> {
    match op {
        SumOperator::Strict | SumOperator::Weak => {
            Ok(c.mul(&ZetaCoefficient::zeta(&alpha.scale(&Rational::from(-1)))?))
        }
        SumOperator::Integral => {
            let inv = Germ::reciprocal(&alpha.shift(&Rational::from(1)))?;
            let m = ZetaCoefficient::chi_moment(alpha).add(&ZetaCoefficient::from_germ(inv.neg()));
            Ok(c.mul(&m))
        }
    }
}

/// `c·x^{α+1}/(α+1)`.
pub fn primitive_piece(c: &ZetaCoefficient, alpha: &AffineForm) -> Result<(AffineForm, ZetaCoefficient)> {
    let up = alpha.shift(&Rational::from(1));
    let inv = Germ::reciprocal(&up)?;
    Ok((up, c.mul_germ(&inv)))
}

/// `κ·c·x^α` with `κ = ±1/2`; `None` for the integral.
pub fn boundary_piece(
    op: SumOperator,
    c: &ZetaCoefficient,
    alpha: &AffineForm,
) -> Option<(AffineForm, ZetaCoefficient)> {
    if op == SumOperator::Integral {
        return None;
    }
    Some((alpha.clone(), c.scale_rat(&op.boundary())))
}

/// `B_k/k!·α(α-1)⋯(α-k+2)·c·x^{α-k+1}`; `None` when the term vanishes.
pub fn bernoulli_piece(
    op: SumOperator,
    c: &ZetaCoefficient,
    alpha: &AffineForm,
    k: u32,
) -> Option<(AffineForm, ZetaCoefficient)> {
    if op == SumOperator::Integral || k < 2 {
        return None;
    }
    let b = bernoulli(k as usize);
    if b == 0 {
        return None;
    }
    let scale = b / Rational::from(factorial(k));
    let ff = Germ::from_poly(falling_factorial(alpha, k - 1).scale_rat(&scale));
    if ff.is_zero() {
        return None;
    }
    Some((alpha.shift(&Rational::from(1 - k as i64)), c.mul_germ(&ff)))
}

/// The Euler–Maclaurin operator `𝔖_λ` (or `𝔍` for the integral) with
/// Bernoulli terms `k = 2..=K`; the rest becomes a tail of order `α - K`.
pub fn euler_maclaurin(op: SumOperator, sigma: &SymbolGerm, k_max: u32) -> Result<SymbolGerm> {
    if k_max < 2 && op != SumOperator::Integral {
        return Err(Error::Invalid("at least two Euler–Maclaurin terms are required".into()));
    }
    let mut out = SymbolGerm::zero();
    for (alpha, c) in sigma.pieces() {
        if alpha.linear.is_zero() {
            let n = as_i64(&alpha.constant).expect("admissible constant order") as u32;
            polynomial_piece(op, c, n, &mut out)?;
            continue;
        }
        let zero = AffineForm::constant(Rational::new());
        out.add_piece(zero, constant_piece(op, c, alpha)?)?;
        let (o, p) = primitive_piece(c, alpha)?;
        out.add_piece(o, p)?;
        if let Some((o, p)) = boundary_piece(op, c, alpha) {
            out.add_piece(o, p)?;
        }
        for k in 2..=k_max {
            if let Some((o, p)) = bernoulli_piece(op, c, alpha, k) {
                out.add_piece(o, p)?;
            }
        }
        if op != SumOperator::Integral {
            out.tail_mut().insert(&alpha.shift(&Rational::from(-(k_max as i64))));
        }
    }
    for (l, b) in sigma.tail().bounds() {
        let t = out.tail_mut();
        t.insert(&AffineForm::new(l.clone(), Rational::from(b + 1u32)));
        t.insert(&AffineForm::constant(Rational::new()));
    }
    Ok(out)
}

/// Exact sum (Faulhaber) or integral of `c·x^n`.
fn polynomial_piece(op: SumOperator, c: &ZetaCoefficient, n: u32, out: &mut SymbolGerm) -> Result<()> {
    let power = |d: usize| AffineForm::constant(Rational::from(d));
    match op {
        SumOperator::Integral => {
            out.add_piece(power(n as usize + 1), c.scale_rat(&Rational::from((1, n + 1))))?;
        }
        SumOperator::Weak | SumOperator::Strict => {
            for (d, a) in faulhaber(n).iter().enumerate() {
                if *a != 0 {
                    out.add_piece(power(d), c.scale_rat(a))?;
                }
            }
            if op == SumOperator::Strict {
                out.add_piece(power(n as usize), c.neg())?;
            }
        }
    }
    Ok(())
}

/// Direct summation `Σ_{n=1}^{N}` (weak) or `Σ_{n=1}^{N-1}` (strict) at `z`.
pub fn partial_sum_oracle(
    sigma: &SymbolGerm,
    n: u64,
    z: &BTreeMap<u32, Rational>,
    op: SumOperator,
) -> Result<CoeffPoly> {
    let last = match op {
        SumOperator::Weak => n,
        SumOperator::Strict => n.saturating_sub(1),
        SumOperator::Integral => return Err(Error::Invalid("the oracle sums, it does not integrate".into())),
    };
    let mut acc = CoeffPoly::zero();
    for m in 1..=last {
        acc += &sigma.evaluate_exact(&Integer::from(m), z)?;
    }
    Ok(acc)
}

/// `fp ∘ 𝔖_λ`.
pub fn cutoff_sum(op: SumOperator, sigma: &SymbolGerm, k_max: u32) -> Result<ZetaCoefficient> {
    euler_maclaurin(op, sigma, k_max)?.fp_infinity()
}

/// `fp ∘ 𝔍`.
pub fn cutoff_integral(sigma: &SymbolGerm) -> Result<ZetaCoefficient> {
    euler_maclaurin(SumOperator::Integral, sigma, 2)?.fp_infinity()
}
