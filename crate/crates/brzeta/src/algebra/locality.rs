use std::fmt::Debug;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::Result;

/// A commutative locality monoid of decorations: a symmetric independence
/// relation, a product defined on independent pairs, and a unit independent
/// of everything.
pub trait LocalityAlgebra {
    type Elem: Clone + Ord + Debug + std::fmt::Display;

    fn independent(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Errors with a locality violation on dependent inputs.
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn unit(&self) -> Self::Elem;
}

/// Strict (`n_child < n_parent`) or weak (`≤`) nested summation.
///
/// This is the one place where the sign conventions meet: the strict sum
/// operator has Rota–Baxter weight +1 and the weak one weight −1; the zeta
/// parameter λ = −1 selects strict sums and λ = +1 weak sums; words are
/// flattened with the quasi-shuffle parameter equal to the Rota–Baxter weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Strict,
    Weak,
}

impl SumKind {
    pub fn rb_weight(self) -> Rational {
        match self {
            SumKind::Strict => Rational::from(1),
            SumKind::Weak => Rational::from(-1),
        }
    }

    /// Quasi-shuffle parameter pairing with this operator.
    pub fn star_parameter(self) -> Rational {
        self.rb_weight()
    }

    /// From the zeta parameter λ ∈ {−1, +1}.
    pub fn from_zeta_lambda(lambda: i32) -> Result<SumKind> {
        match lambda {
            -1 => Ok(SumKind::Strict),
            1 => Ok(SumKind::Weak),
            _ => Err(crate::Error::Invalid(format!("zeta parameter must be ±1, got {lambda}"))),
        }
    }

    pub fn zeta_lambda(self) -> i32 {
        match self {
            SumKind::Strict => -1,
            SumKind::Weak => 1,
        }
    }

    /// Coefficient of the `σ(N)` boundary term in Euler–Maclaurin: −1/2 strict, +1/2 weak.
    pub fn boundary_half(self) -> Rational {
        match self {
            SumKind::Strict => Rational::from((-1, 2)),
            SumKind::Weak => Rational::from((1, 2)),
        }
    }
}
