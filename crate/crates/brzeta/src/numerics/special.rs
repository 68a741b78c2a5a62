//! Multiprecision special values: ζ and its derivatives via Euler–Maclaurin
//! with power series in the offset, Stieltjes constants, and moments of the
//! fixed excision function.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::bernoulli;

type Series = Vec<Float>;

fn zero_series(len: usize, prec: u32) -> Series {
    vec![Float::new(prec); len]
}

fn series_mul(a: &Series, b: &Series, prec: u32) -> Series {
    let len = a.len();
    let mut out = zero_series(len, prec);
    for i in 0..len {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..len - i {
            out[i + j] += Float::with_val(prec, &a[i] * &b[j]);
        }
    }
    out
}

/// `exp(-ε log x)` truncated to `len` terms.
fn power_series(logx: &Float, len: usize, prec: u32) -> Series {
    let mut out = zero_series(len, prec);
    let mut term = Float::with_val(prec, 1);
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = term.clone();
        term = Float::with_val(prec, &term * logx) / -(i as i64 + 1);
    }
    out
}

/// Truncated series of `ζ(a + ε)`; when `a = 1` the polar part `1/ε` is removed.
pub fn zeta_series(a: &Float, len: usize, precision_bits: u32) -> Vec<Float> {
    let prec = precision_bits + 64 + 8 * len as u32;
    let a = Float::with_val(prec, a);
    let at_one = a == 1;
    let abs_a = a.to_f64().abs().ceil() as usize;
    let n_cut = (precision_bits as usize / 3).max(24) + abs_a + 4 * len;
    let m_max = precision_bits as usize / 2 + 20 + abs_a;

    let neg_a = Float::with_val(prec, -&a);
    let mut acc = zero_series(len, prec);
    for k in 1..n_cut {
        let lk = Float::with_val(prec, k).ln();
        let scale = Float::with_val(prec, &neg_a * &lk).exp();
        let s = power_series(&lk, len, prec);
        for i in 0..len {
            acc[i] += Float::with_val(prec, &s[i] * &scale);
        }
    }
    let nf = Float::with_val(prec, n_cut);
    let ln_n = nf.clone().ln();
    let n_pow = |e: &Float| Float::with_val(prec, e * &ln_n).exp();
    let n_series = power_series(&ln_n, len, prec);

    // N^{1-s}/(s-1)
    if at_one {
        // (N^{-ε} - 1)/ε
        let mut term = Float::with_val(prec, 1);
        for i in 0..len {
            term = Float::with_val(prec, &term * &ln_n) / -(i as i64 + 1);
            acc[i] += &term;
        }
    } else {
        let lead = n_pow(&Float::with_val(prec, 1 - &a));
        let am1 = Float::with_val(prec, &a - 1);
        // 1/(a-1+ε) = Σ (-1)^i ε^i/(a-1)^{i+1}
        let mut inv = zero_series(len, prec);
        let mut t = Float::with_val(prec, 1) / &am1;
        for slot in inv.iter_mut() {
            *slot = t.clone();
            t = -(t / &am1);
        }
        let prod = series_mul(&n_series, &inv, prec);
        for i in 0..len {
            acc[i] += Float::with_val(prec, &prod[i] * &lead);
        }
    }
    // N^{-s}/2
    let half = n_pow(&neg_a) / 2;
    for i in 0..len {
        acc[i] += Float::with_val(prec, &n_series[i] * &half);
    }
    // Bernoulli corrections
    let mut rising = zero_series(len, prec);
    rising[0] = a.clone();
    if len > 1 {
        rising[1] = Float::with_val(prec, 1);
    }
    let eps = Float::with_val(prec, 2).pow(-(prec as i32) + 8);
    let mut fact = Float::with_val(prec, 2);
    for j in 1..=m_max {
        let b = Float::with_val(prec, &bernoulli(2 * j));
        let coef = b / &fact;
        let base = n_pow(&Float::with_val(prec, &neg_a - (2 * j - 1) as i64));
        let mut small = true;
        for i in 0..len {
            let mut v = zero_series(len, prec);
            for (p, r) in rising.iter().enumerate() {
                if p + i >= len {
                    break;
                }
                v[p + i] = Float::with_val(prec, r * &n_series[i]);
            }
            for (p, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let t = Float::with_val(prec, x * &coef) * &base;
                if t.clone().abs() > eps {
                    small = false;
                }
                acc[p] += t;
            }
        }
        if small && j > 4 {
            break;
        }
        // rising factorial grows by (s+2j-1)(s+2j)
        for extra in [2 * j - 1, 2 * j] {
            let mut lin = zero_series(len, prec);
            lin[0] = Float::with_val(prec, &a + extra as i64);
            if len > 1 {
                lin[1] = Float::with_val(prec, 1);
            }
            rising = series_mul(&rising, &lin, prec);
        }
        fact *= Float::with_val(prec, (2 * j + 1) * (2 * j + 2));
    }
    acc.into_iter().map(|x| Float::with_val(precision_bits, x)).collect()
}

/// `ζ^{(j)}(a)` for `j = 0..=order`.
pub fn zeta_derivatives(a: &Float, order: usize, precision_bits: u32) -> Vec<Float> {
    let s = zeta_series(a, order + 1, precision_bits);
    let mut fact = Float::with_val(precision_bits, 1);
    s.into_iter()
        .enumerate()
        .map(|(j, c)| {
            if j > 0 {
                fact *= j as u32;
            }
            c * &fact
        })
        .collect()
}

/// `ζ(s)` at a real point `s ≠ 1`.
pub fn zeta(s: &Float, precision_bits: u32) -> Float {
    zeta_series(s, 1, precision_bits).remove(0)
}

/// Stieltjes constant `γ_n`, with `γ_0` Euler's constant.
pub fn stieltjes(n: usize, precision_bits: u32) -> Float {
    let s = zeta_series(&Float::with_val(precision_bits, 1), n + 1, precision_bits);
    let mut fact = Float::with_val(precision_bits, 1);
    for j in 1..=n {
        fact *= j as u32;
    }
    let v = Float::with_val(precision_bits, &s[n] * &fact);
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The fixed excision function: 0 on `[0,1/4]`, 1 on `[3/4,∞)`, smooth between.
pub fn excision(y: &Float) -> Float {
    let prec = y.prec();
    let t = Float::with_val(prec, (y - Float::with_val(prec, 0.25)) * 2u32);
    if t <= 0 {
        return Float::new(prec);
    }
    if t >= 1 {
        return Float::with_val(prec, 1);
    }
    let a = Float::with_val(prec, -Float::with_val(prec, t.clone().recip())).exp();
    let one_minus = Float::with_val(prec, 1 - &t);
    let b = Float::with_val(prec, -one_minus.recip()).exp();
    let denom = Float::with_val(prec, &a + &b);
    a / denom
}

/// `∫_0^1 χ(y) y^a log^j(y) dy` for the fixed excision function.
pub fn chi_moment(a: &Float, log_power: u32, precision_bits: u32) -> Float {
    let prec = precision_bits + 32;
    let f = |y: &Float| {
        let ly = Float::with_val(prec, y.ln_ref());
        let p = Float::with_val(prec, (a * ly.clone()).exp_ref());
        excision(y) * p * ly.pow(log_power)
    };
    let q = 0.25;
    let lo = Float::with_val(prec, q);
    let mid = Float::with_val(prec, 0.75);
    let hi = Float::with_val(prec, 1);
    let v = tanh_sinh(&f, &lo, &mid, prec) + tanh_sinh(&f, &mid, &hi, prec);
    Float::with_val(precision_bits, v)
}

/// Double-exponential quadrature of a smooth integrand on `[lo, hi]`.
pub fn tanh_sinh<F: Fn(&Float) -> Float>(f: &F, lo: &Float, hi: &Float, prec: u32) -> Float {
    let half = Float::with_val(prec, hi - lo) / 2u32;
    let center = Float::with_val(prec, hi + lo) / 2u32;
    let pi_2 = Float::with_val(prec, Constant::Pi) / 2u32;
    let tol = Float::with_val(prec, 2).pow(-(prec as i32) + 40);
    let node = |t: &Float| -> Option<(Float, Float)> {
        let sh = Float::with_val(prec, t.sinh_ref());
        let ch = Float::with_val(prec, t.cosh_ref());
        let u = Float::with_val(prec, &pi_2 * &sh);
        let th = Float::with_val(prec, u.tanh_ref());
        let cu = Float::with_val(prec, u.cosh_ref());
        let w = Float::with_val(prec, &pi_2 * &ch) / Float::with_val(prec, &cu * &cu);
        let x = Float::with_val(prec, &center + Float::with_val(prec, &half * &th));
        if x <= *lo || x >= *hi || w.is_zero() {
            return None;
        }
        Some((x, w))
    };
    // running sum over all nodes t = k h of the current level
    let mut h = Float::with_val(prec, 0.5);
    let mut sum = Float::new(prec);
    let mut prev: Option<Float> = None;
    for level in 0..12 {
        let (mut k, step): (i64, i64) = if level == 0 { (0, 1) } else { (1, 2) };
        loop {
            let t = Float::with_val(prec, &h * k);
            let mut contrib = Float::new(prec);
            let mut any = false;
            for sign in [1i64, -1] {
                if k == 0 && sign == -1 {
                    continue;
                }
                if let Some((x, w)) = node(&Float::with_val(prec, &t * sign)) {
                    contrib += f(&x) * w;
                    any = true;
                }
            }
            sum += &contrib;
            if !any || (k > 8 && contrib.abs() < tol) || k > 200_000 {
                break;
            }
            k += step;
        }
        let est = Float::with_val(prec, &sum * &h) * &half;
        if let Some(p) = &prev {
            if Float::with_val(prec, &est - p).abs() < tol {
                return est;
            }
        }
        prev = Some(est);
        h /= 2u32;
    }
    prev.unwrap_or_else(|| Float::new(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_at_non_integers() {
        // ζ(1/2) = -1.4603545088095868
        let v = zeta(&Float::with_val(128, 0.5), 128).to_f64();
        assert!((v + 1.4603545088095868).abs() < 1e-13);
        let v = zeta(&Float::with_val(128, -2.5), 128).to_f64();
        // ζ(-5/2) = 0.00851692877785033
        assert!((v - 0.00851692877785033).abs() < 1e-15);
    }

    #[test]
    fn negative_integers_are_bernoulli() {
        let v = zeta(&Float::with_val(128, -3), 128).to_f64();
        assert!((v - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_of_polynomial() {
        let prec = 128;
        let f = |y: &Float| Float::with_val(prec, y * y);
        let v = tanh_sinh(&f, &Float::with_val(prec, 0), &Float::with_val(prec, 1), prec).to_f64();
        assert!((v - 1.0 / 3.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn chi_moment_limits() {
        // χ is symmetric about 1/2 in the sense χ(1/2+u) = 1 - χ(1/2-u),
        // so ∫_0^1 χ = 1/2.
        let v = chi_moment(&Float::with_val(128, 0), 0, 128).to_f64();
        assert!((v - 0.5).abs() < 1e-15, "{v}");
    }
}
