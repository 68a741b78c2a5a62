//! Locality algebras of decorations, words and rooted forests; quasi-shuffles,
//! flattening, the free locality Rota–Baxter algebra and operator lifts.

mod es;
mod forest;
mod laws;
mod lift;
mod lincomb;
mod locality;
mod partial_sums;
mod quasi_shuffle;
mod word;

pub use es::{EsAlgebra, EsLetter};
pub use forest::{b_plus, Forest, Tree};
pub use laws::{
    check_locality_laws, LawOutcome, LawReport, LocalityStructure, RationalSumsAwayFromIntegers, WordConcatenation,
};
pub use lift::{branched_lift, word_lift, word_lift_combination, OperatedAlgebra};
pub use lincomb::{LinComb, Scalar};
pub use locality::{LocalityAlgebra, SumKind};
pub use partial_sums::PartialSumAlgebra;
pub use quasi_shuffle::{
    diamond_product, diamond_product_combination, flatten, free_rb_operator, quasi_shuffle, star_combination,
};
pub use word::Word;
