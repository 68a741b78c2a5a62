use rug::{Float, Integer, Rational};

/// The rational with smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if *hi < 0 {
        let neg_lo = Rational::from(-hi);
        let neg_hi = Rational::from(-lo);
        return -simplest_between(&neg_lo, &neg_hi);
    }
    if *lo <= 0 {
        return Rational::new();
    }
    let c = Rational::from(lo.ceil_ref());
    if c <= *hi {
        return c;
    }
    let fl = Rational::from(lo.floor_ref());
    let a = Rational::from(hi - &fl).recip();
    let b = Rational::from(lo - &fl).recip();
    fl + simplest_between(&a, &b).recip()
}

/// Rational `p/q` with `q ≤ denominator_bound` and `|x − p/q| ≤ tolerance`, if any.
///
/// When several rationals qualify, the one closest to `x` is returned. It is
/// the best approximation of `x` with bounded denominator, found among the
/// convergents and semiconvergents of its continued fraction.
pub fn rational_reconstruct(x: f64, denominator_bound: u64, tolerance: f64) -> Option<Rational> {
    let xr = Rational::from_f64(x)?;
    let tol = Rational::from_f64(tolerance)?;
    window(xr, tol, denominator_bound)
}

/// Same as [`rational_reconstruct`] for a multiprecision value.
pub fn rational_reconstruct_float(x: &Float, denominator_bound: u64, tolerance: f64) -> Option<Rational> {
    let xr = x.to_rational()?;
    let tol = Rational::from_f64(tolerance)?;
    window(xr, tol, denominator_bound)
}

fn window(x: Rational, tol: Rational, bound: u64) -> Option<Rational> {
    if tol <= 0 || bound == 0 {
        return None;
    }
    let r = best_approximation(&x, &Integer::from(bound));
    if Rational::from(&x - &r).abs() <= tol {
        Some(r)
    } else {
        None
    }
}

/// The rational closest to `x` among those with denominator at most `bound`.
pub fn best_approximation(x: &Rational, bound: &Integer) -> Rational {
    // convergents h/k; (h0, k0) is the one before (h1, k1)
    let (mut h0, mut k0) = (Integer::from(0), Integer::from(1));
    let (mut h1, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = x.clone();
    loop {
        let a = Integer::from(rest.floor_ref());
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > *bound {
            // largest semiconvergent still under the bound
            let t = Integer::from(bound - &k0) / &k1;
            let semi = Rational::from((Integer::from(&t * &h1) + &h0, Integer::from(&t * &k1) + &k0));
            let conv = Rational::from((h1, k1));
            let ds = Rational::from(x - &semi).abs();
            let dc = Rational::from(x - &conv).abs();
            return if t > 0 && ds < dc { semi } else { conv };
        }
        let h2 = Integer::from(&a * &h1) + &h0;
        (h0, k0, h1, k1) = (h1, k1, h2, k2);
        let frac = Rational::from(&rest - &a);
        if frac == 0 {
            return Rational::from((h1, k1));
        }
        rest = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    #[allow(clippy::approx_constant)]
    fn documented_cases() {
        assert_eq!(rational_reconstruct(0.5, 10, 1e-9), Some(rat(1, 2)));
        assert_eq!(rational_reconstruct(-0.0833333333, 100, 1e-8), Some(rat(-1, 12)));
        assert_eq!(rational_reconstruct(3.14159265, 10, 1e-8), None);
    }

    #[test]
    fn closest_of_several() {
        // both 139/51840 and 119/44381 lie within 1e-9 of the first
        let x = Float::with_val(128, Rational::from((139, 51840)));
        assert_eq!(rational_reconstruct_float(&x, 1_000_000, 1e-9), Some(rat(139, 51840)));
        assert_eq!(best_approximation(&rat(314159, 100000), &Integer::from(10)), rat(22, 7));
        assert_eq!(best_approximation(&rat(-1, 3), &Integer::from(2)), rat(-1, 2));
        assert_eq!(best_approximation(&rat(7, 2), &Integer::from(1)), rat(3, 1));
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-1, 10), &rat(1, 10)), rat(0, 1));
        assert_eq!(simplest_between(&rat(7, 4), &rat(7, 4)), rat(7, 4));
    }
}
