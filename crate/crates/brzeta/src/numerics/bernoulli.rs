use std::sync::RwLock;

use rug::Rational;

use super::binomial;

static CACHE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_k` with the convention `B_1 = -1/2`.
///
/// Values come from the recurrence `Σ_{j≤k} C(k+1, j) B_j = 0` and are
/// memoised in a process-wide table.
pub fn bernoulli(k: usize) -> Rational {
    if let Some(b) = CACHE.read().expect("bernoulli cache poisoned").get(k) {
        return b.clone();
    }
    let mut table = CACHE.write().expect("bernoulli cache poisoned");
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= k {
        let m = table.len();
        if m >= 3 && m % 2 == 1 {
            table.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(binomial(m as u32 + 1, j as u32)) * b;
            }
        }
        table.push(-acc / Rational::from(m + 1));
    }
    table[k].clone()
}

/// Coefficients of the falling factorial `a(a-1)…(a-n+1)` as a polynomial in `a`,
/// lowest degree first.
pub fn falling_factorial_coefficients(n: usize) -> Vec<Rational> {
    let mut p = vec![Rational::from(1)];
    for i in 0..n {
        let mut next = vec![Rational::new(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= Rational::from(i) * c;
        }
        p = next;
    }
    p
}

/// Coefficients (in `N`, lowest degree first) of `Σ_{n=1}^N n^a`.
pub fn faulhaber(a: u32) -> Vec<Rational> {
    // Σ_{n=1}^N n^a = 1/(a+1) Σ_{j=0}^{a} C(a+1, j) B^+_j N^{a+1-j}, with B^+_1 = +1/2.
    let mut out = vec![Rational::new(); a as usize + 2];
    for j in 0..=a {
        let mut b = bernoulli(j as usize);
        if j == 1 {
            b = -b;
        }
        let c = Rational::from(binomial(a + 1, j)) * b / Rational::from(a + 1);
        out[(a + 1 - j) as usize] += c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for k in 1..20 {
            assert_eq!(bernoulli(2 * k + 1), 0);
        }
    }

    #[test]
    fn faulhaber_squares() {
        let p = faulhaber(2);
        assert_eq!(p, vec![rat(0, 1), rat(1, 6), rat(1, 2), rat(1, 3)]);
    }

    #[test]
    fn falling() {
        // a(a-1)(a-2) = a^3 - 3a^2 + 2a
        let p = falling_factorial_coefficients(3);
        assert_eq!(p, vec![rat(0, 1), rat(2, 1), rat(-3, 1), rat(1, 1)]);
    }
}
