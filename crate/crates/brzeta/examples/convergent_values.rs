//! Convergent branched sums against classical values: ζ(2,1) = ζ(3) and the
//! ladder with weights (2,2).

use std::collections::BTreeMap;

use brzeta::algebra::{EsLetter, Tree};
use brzeta::numerics::special;
use brzeta::symbol::SumOperator;
use brzeta::zeta::{convergent_value, numeric_tree_value, ConvergentConfig, NumericConfig};
use brzeta::Float;

fn main() -> brzeta::Result<()> {
    let l = |i, s| EsLetter::int(i, s);
    let ladder21 = Tree::ladder(&[l(1, 2), l(2, 1)]).expect("nonempty");
    let v = numeric_tree_value(&ladder21, SumOperator::Strict, &BTreeMap::new(), &NumericConfig::default())?;
    println!("ζ(2,1) = {v}");
    println!("ζ(3)   = {}", special::zeta(&Float::with_val(128, 3), 128));

    let ladder22 = Tree::ladder(&[l(1, 2), l(2, 2)]).expect("nonempty");
    let direct = convergent_value(&ladder22.clone().into(), SumOperator::Strict, 1e-12, &ConvergentConfig::default())?;
    let expanded = numeric_tree_value(&ladder22, SumOperator::Strict, &BTreeMap::new(), &NumericConfig::default())?;
    println!("ζ(2,2): nested sums {direct}, expansion {expanded}");
    Ok(())
}
