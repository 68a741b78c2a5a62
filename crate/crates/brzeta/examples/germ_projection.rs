//! Germs with linear poles: the projections onto holomorphic and polar parts,
//! and how the answer depends on the inner product.

use brzeta::germ::{project_minus, project_plus, renormalised_value, Germ};
use brzeta::linear::{InnerProduct, LinearForm};
use brzeta::Rational;

fn main() -> brzeta::Result<()> {
    // z1 / (2 z1 + z2) + 1/z1
    let l = LinearForm::from_pairs([(1, Rational::from(2)), (2, Rational::from(1))]);
    let g = Germ::var(1).mul(&Germ::pole(&l)?).add(&Germ::pole(&LinearForm::var(1))?);
    for (name, q) in [
        ("identity", InnerProduct::identity()),
        ("<z1,z2> = 1/2", InnerProduct::from_entries([(1, 2, Rational::from((1, 2)))])?),
    ] {
        println!("Q = {name}");
        println!("  π₊ = {}", project_plus(&q, &g)?);
        println!("  π₋ = {}", project_minus(&q, &g)?);
        println!("  value at 0 of π₊ = {}", renormalised_value(&q, &g)?);
    }
    Ok(())
}
