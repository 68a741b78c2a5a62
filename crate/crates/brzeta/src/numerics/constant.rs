use std::fmt;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::special;
use crate::{Error, Result};

/// Tagged transcendental constants that germ coefficients may carry.
///
/// `ZetaDeriv` is allowed at any integer point other than 1, and
/// `ChiMoment` carries a log power so that derivatives in the exponent stay
/// representable: `ChiMoment { exponent: a, log_power: j }` is
/// `∫_0^1 χ(y) y^a log^j(y) dy` for the fixed excision function `χ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum FormalConstant {
    ZetaAt {
        m: i64,
    },
    ZetaDeriv {
        order: u32,
        point: i64,
    },
    EulerGamma,
    Stieltjes {
        n: u32,
    },
    ChiMoment {
        #[serde(with = "super::serde_rational")]
        exponent: Rational,
        log_power: u32,
    },
    Opaque {
        id: String,
    },
}

impl FormalConstant {
    pub fn zeta_at(m: i64) -> Self {
        FormalConstant::ZetaAt { m }
    }

    pub fn zeta_deriv(order: u32, point: i64) -> Self {
        FormalConstant::ZetaDeriv { order, point }
    }

    pub fn stieltjes(n: u32) -> Self {
        if n == 0 {
            FormalConstant::EulerGamma
        } else {
            FormalConstant::Stieltjes { n }
        }
    }
}

impl fmt::Display for FormalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalConstant::ZetaAt { m } => write!(f, "ζ({m})"),
            FormalConstant::ZetaDeriv { order: 1, point } => write!(f, "ζ'({point})"),
            FormalConstant::ZetaDeriv { order, point } => write!(f, "ζ^({order})({point})"),
            FormalConstant::EulerGamma => write!(f, "γ"),
            FormalConstant::Stieltjes { n } => write!(f, "γ_{n}"),
            FormalConstant::ChiMoment { exponent, log_power: 0 } => write!(f, "χ[{exponent}]"),
            FormalConstant::ChiMoment { exponent, log_power } => {
                write!(f, "χ[{exponent};log^{log_power}]")
            }
            FormalConstant::Opaque { id } => write!(f, "⟪{id}⟫"),
        }
    }
}

/// Numeric value of a formal constant at the requested precision.
pub fn constant_numeric_value(c: &FormalConstant, precision_bits: u32) -> Result<Float> {
    if precision_bits < 53 {
        return Err(Error::Invalid("precision below 53 bits".into()));
    }
    match c {
        FormalConstant::ZetaAt { m } => {
            if *m == 1 {
                return Err(Error::PoleAtPoint("ζ(1)".into()));
            }
            Ok(special::zeta_derivatives(&Float::with_val(precision_bits, *m), 0, precision_bits)[0].clone())
        }
        FormalConstant::ZetaDeriv { order, point } => {
            if *point == 1 {
                return Err(Error::PoleAtPoint("ζ derivative at 1".into()));
            }
            let d =
                special::zeta_derivatives(&Float::with_val(precision_bits, *point), *order as usize, precision_bits);
            Ok(d[*order as usize].clone())
        }
        FormalConstant::EulerGamma => Ok(special::stieltjes(0, precision_bits)),
        FormalConstant::Stieltjes { n } => Ok(special::stieltjes(*n as usize, precision_bits)),
        FormalConstant::ChiMoment { exponent, log_power } => {
            Ok(special::chi_moment(&Float::with_val(precision_bits, exponent), *log_power, precision_bits))
        }
        FormalConstant::Opaque { id } => Err(Error::Unsupported(format!("no numeric value for opaque constant {id}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(c: FormalConstant, want: f64, tol: f64) {
        let v = constant_numeric_value(&c, 256).unwrap().to_f64();
        assert!((v - want).abs() < tol, "{c}: {v} vs {want}");
    }

    #[test]
    fn reference_values() {
        close(FormalConstant::zeta_at(2), 1.6449340668482264, 1e-12);
        close(FormalConstant::zeta_at(3), 1.2020569031595942, 1e-12);
        close(FormalConstant::EulerGamma, 0.5772156649015329, 1e-12);
        close(FormalConstant::stieltjes(1), -0.0728158454836767, 1e-12);
        // ζ'(0) = -log(2π)/2
        close(FormalConstant::zeta_deriv(1, 0), -0.9189385332046727, 1e-12);
        // ζ'(-1) = 1/12 - log A
        close(FormalConstant::zeta_deriv(1, -1), -0.165_421_143_700_450_9, 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let c = FormalConstant::ChiMoment { exponent: Rational::from((-3, 2)), log_power: 1 };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<FormalConstant>(&s).unwrap(), c);
    }
}
