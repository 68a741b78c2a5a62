//! Exact arithmetic, Bernoulli numbers and the formal-constant coefficient ring.

mod bernoulli;
mod coeff;
mod constant;
mod reconstruct;
pub mod special;

pub use bernoulli::{bernoulli, falling_factorial_coefficients, faulhaber};
pub use coeff::{CoeffPoly, ConstMonomial};
pub use constant::{constant_numeric_value, FormalConstant};
pub use reconstruct::{best_approximation, rational_reconstruct, rational_reconstruct_float, simplest_between};

use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Default working precision for numeric oracles.
pub const DEFAULT_PRECISION: u32 = 256;

/// Parse `"p/q"`, `"p"` or a plain decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(r) = t.parse::<Rational>() {
        return Ok(r);
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        if let Ok(n) = digits.parse::<Integer>() {
            let den = Integer::from(10).pow(fp.len() as u32);
            let r = Rational::from((n, den));
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Invalid(format!("not a rational number: {s:?}")))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

/// Integer value of a rational, if it is one and fits.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if *r.denom() == 1 {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `r^e` for a possibly negative integer exponent.
pub fn rat_pow(r: &Rational, e: i64) -> Result<Rational> {
    use rug::ops::Pow;
    if e >= 0 {
        Ok(Rational::from(r.pow(e as u32)))
    } else if *r == 0 {
        Err(Error::DivisionByZero)
    } else {
        Ok(r.clone().recip().pow((-e) as u32))
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use rug::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(rat_pow(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert!(rat_pow(&int(0), -1).is_err());
    }
}
