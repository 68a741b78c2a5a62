//! Convergent branched sums by brute force, accelerated by Richardson
//! extrapolation in `1/N`.

use rug::ops::Pow;
use rug::Float;

use crate::algebra::{EsAlgebra, EsLetter, Forest, Tree};
use crate::symbol::SumOperator;
use crate::{Error, Result};

/// Truncated nested sums and their extrapolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvergentConfig {
    pub precision_bits: u32,
    /// Truncation of the first level.
    pub start: u32,
    /// Number of doublings.
    pub levels: u32,
}

impl Default for ConvergentConfig {
    fn default() -> Self {
        ConvergentConfig { precision_bits: 192, start: 64, levels: 9 }
    }
}

/// Partial sums `S(1..=n)` of a vertex, the outer index running to `n`.
fn partial_sums(t: &Tree<EsLetter>, op: SumOperator, n: usize, prec: u32) -> Vec<Float> {
    let kids: Vec<Vec<Float>> = t.children().iter().map(|c| partial_sums(c, op, n, prec)).collect();
    let s = Float::with_val(prec, &t.decoration.weight);
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Float::with_val(prec, 0);
    out.push(acc.clone());
    for m in 1..=n {
        let mut f = Float::with_val(prec, m).pow(-s.clone());
        for k in &kids {
            f *= &k[m];
        }
        if op == SumOperator::Weak {
            acc += &f;
            out.push(acc.clone());
        } else {
            out.push(acc.clone());
            acc += &f;
        }
    }
    out
}

/// Truncation of `ζ^λ(F)` to `n` at the roots.
pub fn truncated_value(f: &Forest<EsLetter>, op: SumOperator, n: usize, prec: u32) -> Float {
    let mut v = Float::with_val(prec, 1);
    for t in f.trees() {
        let s = partial_sums(t, op, n + 1, prec);
        v *= &s[n + 1 - usize::from(op == SumOperator::Weak)];
    }
    v
}

/// `ζ^λ(F)` for forests with all weights ≥ 2, to absolute accuracy `tol`.
pub fn convergent_value(f: &Forest<EsLetter>, op: SumOperator, tol: f64, cfg: &ConvergentConfig) -> Result<Float> {
    f.check_proper(&EsAlgebra)?;
    if op == SumOperator::Integral {
        return Err(Error::Unsupported("branched values are defined for sums".into()));
    }
    if f.decorations().iter().any(|d| d.weight < 2) {
        return Err(Error::Invalid("convergent_value needs every weight ≥ 2".into()));
    }
    let prec = cfg.precision_bits;
    let integral = f.decorations().iter().all(|d| *d.weight.denom() == 1);
    let mut table: Vec<Float> = Vec::new();
    let mut last_err = f64::INFINITY;
    for j in 0..=cfg.levels {
        let n = (cfg.start as usize) << j;
        let mut row = vec![truncated_value(f, op, n, prec)];
        if integral {
            // the error is a power series in 1/N: eliminate N^{-k} at step k
            for k in 1..=j as usize {
                let p = Float::with_val(prec, 2u32).pow(k as u32);
                let d = Float::with_val(prec, &row[k - 1] - &table[k - 1]);
                let denom = Float::with_val(prec, &p - 1u32);
                row.push(Float::with_val(prec, &row[k - 1] + d / denom));
            }
        }
        if j > 0 {
            let best = row.last().expect("row");
            let prev = table.last().expect("table");
            last_err = Float::with_val(prec, best - prev).abs().to_f64();
            if last_err <= tol / 10.0 {
                return Ok(best.clone());
            }
        }
        table = row;
    }
    let best = table.last().expect("table").clone();
    if last_err <= tol {
        Ok(best)
    } else {
        Err(Error::NonConvergent(format!("estimated error {last_err:e} exceeds {tol:e}")))
    }
}

/// Weight bound under which the nested sums converge: every weight ≥ 2.
pub fn is_convergent(f: &Forest<EsLetter>) -> bool {
    f.decorations().iter().all(|d| d.weight >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(l: u32, s: i64) -> Tree<EsLetter> {
        Tree::leaf(EsLetter::int(l, s))
    }

    #[test]
    fn classical() {
        let cfg = ConvergentConfig::default();
        let v = convergent_value(&leaf(1, 2).into(), SumOperator::Strict, 1e-10, &cfg).unwrap();
        assert!((v.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        let t = Tree::new(EsLetter::int(1, 2), vec![leaf(2, 2)]);
        let v = convergent_value(&t.into(), SumOperator::Strict, 1e-10, &cfg).unwrap();
        assert!((v.to_f64() - 0.811_742_425_283_353_6).abs() < 1e-10);
        assert!(convergent_value(&leaf(1, 1).into(), SumOperator::Strict, 1e-10, &cfg).is_err());
    }
}
