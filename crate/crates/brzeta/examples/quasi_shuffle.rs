//! Quasi-shuffles of words of decorations, the free Rota–Baxter operator,
//! and a locality structure that fails the closure law.

use brzeta::algebra::{
    check_locality_laws, diamond_product, free_rb_operator, quasi_shuffle, EsAlgebra, EsLetter, LawOutcome,
    RationalSumsAwayFromIntegers, Word,
};
use brzeta::Rational;

fn main() -> brzeta::Result<()> {
    let alg = EsAlgebra;
    let u = Word(vec![EsLetter::int(1, 2)]);
    let v = Word(vec![EsLetter::int(2, 3), EsLetter::int(3, 1)]);
    for lam in [-1, 0, 1] {
        let lam = Rational::from(lam);
        println!("λ = {lam:>2}: {u} ⋆ {v} = {}", quasi_shuffle(&lam, &u, &v, &alg)?);
    }

    // P(u) ◇ P(v) for the free operator of weight 1
    let one = Rational::from(1);
    let pu = free_rb_operator(&u, &alg);
    let pv = free_rb_operator(&v, &alg);
    println!("P(u) ◇ P(v) = {}", diamond_product(&one, &pu, &pv, &alg)?);

    // letters sharing a label are not independent
    let clash = Word(vec![EsLetter::int(1, 5)]);
    match quasi_shuffle(&one, &u, &clash, &alg) {
        Err(e) => println!("{u} ⋆ {clash}: {e}"),
        Ok(c) => println!("unexpected: {c}"),
    }

    // rationals under +, independent when the sum is not an integer
    let samples: Vec<Rational> = [(1, 3), (1, 5), (2, 7), (1, 2)].iter().map(|&p| Rational::from(p)).collect();
    let report = check_locality_laws(&RationalSumsAwayFromIntegers, &samples, &[vec![Rational::from((1, 3))]], true);
    if let LawOutcome::Fail { witness, .. } = &report.closure {
        let w: Vec<String> = witness.iter().map(|x| x.to_string()).collect();
        println!("closure fails; witness ({})", w.join(", "));
    }
    Ok(())
}
