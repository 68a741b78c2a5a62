//! Branched zeta values: exact germs for integer weights, numeric values and
//! fitted germs otherwise.

mod bzv;
mod cache;
mod convergent;
mod decorate;
mod exact;
mod fit;
mod numeric;
mod poles;

pub use bzv::{
    regularised_germ, renormalised_bzv, BzvRequest, BzvResult, BzvValue, Check, EngineConfig, Mode, RationalOutcome,
    Route,
};
pub use cache::{Cache, CACHE_DIR_VAR};
pub use convergent::{convergent_value, is_convergent, truncated_value, ConvergentConfig};
pub use decorate::{decorate, forest_vars, integer_weights, letter_order, tree_vars};
pub use exact::{exact_forest_germ, exact_tree_germ, exact_words_germ, flatten_for, ExactConfig};
pub use fit::{
    fit_germ, numeric_renormalised, orthogonal_blocks, FitConfig, FittedGerm, FittedTerm, NumericRenormalised,
    NumericRoute,
};
pub use numeric::{numeric_forest_value, numeric_tree_value, numeric_word_value, numeric_words_value, NumericConfig};
pub use poles::{candidate_poles, pole_order_bound};
