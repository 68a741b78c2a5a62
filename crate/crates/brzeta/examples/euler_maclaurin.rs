//! Discrete sums of symbols by Euler–Maclaurin: exact interpolation of
//! partial sums, and finite parts at infinity.

use std::collections::BTreeMap;

use brzeta::linear::{AffineForm, LinearForm};
use brzeta::symbol::{cutoff_sum, euler_maclaurin, partial_sum_oracle, SumOperator, SymbolGerm};
use brzeta::{Integer, Rational};

fn main() -> brzeta::Result<()> {
    let squares = SymbolGerm::polynomial(&[Rational::new(), Rational::new(), Rational::from(1)]);
    let origin = BTreeMap::new();
    for op in [SumOperator::Strict, SumOperator::Weak] {
        let s = euler_maclaurin(op, &squares, 6)?;
        println!("{op:?} sum of x²: {s}");
        for n in [1u64, 10, 100] {
            let interpolated = s.evaluate_exact(&Integer::from(n), &origin)?;
            println!("  N = {n:>3}: {interpolated} (direct {})", partial_sum_oracle(&squares, n, &origin, op)?);
        }
    }

    // x^(-s - z1): the cut-off sum is the regularised ζ(s + z1)
    for s in [-1i64, 0, 2] {
        let sigma = SymbolGerm::power(AffineForm::new(-&LinearForm::var(1), Rational::from(-s)))?;
        println!("cut-off sum of x^({}) = {}", -s, cutoff_sum(SumOperator::Weak, &sigma, 12)?);
    }
    Ok(())
}
