//! Small dense matrices over ℚ.

use std::collections::BTreeSet;

use rug::Rational;

use super::LinearForm;

pub type Mat = Vec<Vec<Rational>>;

/// Rows of coefficients of `forms` over the ordered variable list `vars`.
pub fn rows_of(forms: &[LinearForm], vars: &[u32]) -> Mat {
    forms.iter().map(|f| vars.iter().map(|v| f.coeff(*v)).collect()).collect()
}

pub fn vars_of(forms: &[LinearForm]) -> Vec<u32> {
    let set: BTreeSet<u32> = forms.iter().flat_map(|f| f.vars()).collect();
    set.into_iter().collect()
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = Rational::from(m[r][c].recip_ref());
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = Rational::from(&f * &m[r][j]);
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from(u32::from(i == j))));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `c` with `target = Σ c_i basis_i`, if `target` lies in the span.
/// The basis need not be independent; a particular solution is returned.
pub fn solve_combination(target: &LinearForm, basis: &[LinearForm]) -> Option<Vec<Rational>> {
    let mut all = basis.to_vec();
    all.push(target.clone());
    let vars = vars_of(&all);
    let k = basis.len();
    // columns = basis vectors, augmented with target
    let mut m: Mat = vars
        .iter()
        .map(|v| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b.coeff(*v)).collect();
            row.push(target.coeff(*v));
            row
        })
        .collect();
    let piv = rref(&mut m);
    if piv.contains(&k) {
        return None;
    }
    let mut sol = vec![Rational::new(); k];
    for (r, &c) in piv.iter().enumerate() {
        sol[c] = m[r][k].clone();
    }
    Some(sol)
}

/// Leading principal minors are all positive.
pub fn positive_definite(m: &Mat) -> bool {
    // Gaussian elimination without pivoting: PD ⇔ every pivot is positive.
    let n = m.len();
    let mut a = m.clone();
    for k in 0..n {
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            let f = Rational::from(&a[i][k] / &a[k][k]);
            for j in k..n {
                let d = Rational::from(&f * &a[k][j]);
                a[i][j] -= d;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn m(v: &[&[i64]]) -> Mat {
        v.iter().map(|r| r.iter().map(|x| Rational::from(*x)).collect()).collect()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn combination() {
        let b = [LinearForm::var(1), LinearForm::var(2)];
        let t = LinearForm::from_pairs([(1, rat(2, 1)), (2, rat(-1, 1))]);
        assert_eq!(solve_combination(&t, &b).unwrap(), vec![rat(2, 1), rat(-1, 1)]);
        assert!(solve_combination(&LinearForm::var(3), &b).is_none());
    }

    #[test]
    fn definiteness() {
        assert!(positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert!(!positive_definite(&m(&[&[1, 2], &[2, 1]])));
    }
}
