//! Flattening a forest into words, and checking that lifting an operator
//! along the forest agrees with lifting it along the words.

use brzeta::algebra::{branched_lift, flatten, word_lift_combination, EsAlgebra, PartialSumAlgebra, SumKind};
use brzeta::cli::parse_forest;

fn main() -> brzeta::Result<()> {
    let f = parse_forest("T(s=1)[T(s=2),T(s=3)]")?;
    for kind in [SumKind::Strict, SumKind::Weak] {
        let words = flatten(&kind.star_parameter(), &f, &EsAlgebra)?;
        println!("{kind:?}: {f} ↦ {words}");

        // functions on 1..=8, the operator being a partial sum
        let alg = PartialSumAlgebra::new(8, kind);
        let branched = branched_lift(&alg, &f)?;
        let via_words = word_lift_combination(&alg, &words)?;
        let shown: Vec<String> = branched.iter().map(|x| x.to_string()).collect();
        println!("  branched lift on 1..=8: [{}]", shown.join(", "));
        println!("  equal through words: {}", branched == via_words);
    }
    Ok(())
}
