//! Smith and Hermite normal forms over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::group::IntMatrix;

/// Result of [`smith_normal_form`]: `left · m · right == diagonal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows().min(self.diagonal.cols());
        (0..k)
            .map(|i| self.diagonal.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by elementary row/column operations.
///
/// The pivot at each stage is the entry of least nonzero absolute value in the
/// remaining block (first in row-major order on ties), so the output is a
/// deterministic function of the input.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, k) else {
                return finish(a, left, right);
            };
            a.swap_rows(k, pi);
            left.swap_rows(k, pi);
            a.swap_cols(k, pj);
            right.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..rows {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let q = a.get(i, k).div_floor(a.get(k, k));
                let f = -q;
                a.add_row_multiple(i, k, &f);
                left.add_row_multiple(i, k, &f);
                dirty |= !a.get(i, k).is_zero();
            }
            for j in k + 1..cols {
                if a.get(k, j).is_zero() {
                    continue;
                }
                let q = a.get(k, j).div_floor(a.get(k, k));
                let f = -q;
                a.add_col_multiple(j, k, &f);
                right.add_col_multiple(j, k, &f);
                dirty |= !a.get(k, j).is_zero();
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let pivot = a.get(k, k).clone();
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(k, i, &one);
                    left.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if a.get(k, k).is_negative() {
            a.negate_row(k);
            left.negate_row(k);
        }
    }
    finish(a, left, right)
}

fn finish(a: IntMatrix, left: IntMatrix, right: IntMatrix) -> SmithForm {
    SmithForm {
        left,
        diagonal: a,
        right,
    }
}

fn min_abs_entry(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().map_or(true, |(_, _, b)| av < *b) {
                best = Some((i, j, av));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Row-style Hermite normal form: returns `(u, h)` with `u` unimodular,
/// `u · m == h`, `h` in row echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at or below r.
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..rows {
                let v = h.get(i, c);
                if !v.is_zero() {
                    let av = v.abs();
                    if best.as_ref().map_or(true, |(_, b)| av < *b) {
                        best = Some((i, av));
                    }
                }
            }
            let Some((pi, _)) = best else { break };
            h.swap_rows(r, pi);
            u.swap_rows(r, pi);
            let mut done = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                let f = -q;
                h.add_row_multiple(i, r, &f);
                u.add_row_multiple(i, r, &f);
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                h.add_row_multiple(i, r, &f);
                u.add_row_multiple(i, r, &f);
            }
        }
        r += 1;
    }
    (u, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let prod = s.left.checked_mul(m).unwrap().checked_mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal, "U·M·V != D for {m:?}");
        assert!(s.left.is_unimodular());
        assert!(s.right.is_unimodular());
        for i in 0..s.diagonal.rows() {
            for j in 0..s.diagonal.cols() {
                if i != j {
                    assert!(s.diagonal.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|d| d.is_positive()));
        assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        s
    }

    /// Determinantal-divisor oracle: d₁⋯d_k = gcd of all k×k minors.
    fn gcd_of_minors(m: &IntMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let rows: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                    .collect();
                let sub = IntMatrix::from_rows(&rows).unwrap();
                g = g.gcd(&sub.det().unwrap());
            }
        }
        g
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let s = check_smith(&IntMatrix::diag(&[2, 3]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check_smith(&IntMatrix::identity(3));
        assert!(s.diagonal.is_identity());
    }

    #[test]
    fn two_four_six_eight() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = check_smith(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
        // oracle: d1 = gcd of entries, d1·d2 = |det|
        assert_eq!(gcd_of_minors(&m, 1), BigInt::from(2));
        assert_eq!(gcd_of_minors(&m, 2), BigInt::from(8));
    }

    #[test]
    fn rectangular_and_zero() {
        let m = IntMatrix::from_rows(&[vec![0, 0, 2]]).unwrap();
        let s = check_smith(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2)]);
        let z = IntMatrix::zeros(2, 3);
        let s = check_smith(&z);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn agrees_with_determinantal_divisors() {
        let cases = [
            IntMatrix::from_rows(&[vec![4, 6, 10], vec![6, 9, 15], vec![2, 0, 8]]).unwrap(),
            IntMatrix::from_rows(&[vec![3, 1, 4, 1], vec![5, 9, 2, 6], vec![5, 3, 5, 8]]).unwrap(),
            IntMatrix::from_rows(&[vec![12, 18], vec![30, 42], vec![6, 0]]).unwrap(),
        ];
        for m in &cases {
            let s = check_smith(m);
            let f = s.invariant_factors();
            let mut running = BigInt::one();
            for (k, d) in f.iter().enumerate() {
                running *= d;
                assert_eq!(running, gcd_of_minors(m, k + 1), "k = {}", k + 1);
            }
        }
    }

    #[test]
    fn hermite_of_unimodular_is_identity() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let (u, h) = hermite_normal_form(&m);
        assert!(h.is_identity());
        assert_eq!(u.checked_mul(&m).unwrap(), h);
    }

    #[test]
    fn hermite_shape() {
        let m = IntMatrix::from_i64(&[&[4, 6], &[2, 2]]);
        let (u, h) = hermite_normal_form(&m);
        assert_eq!(u.checked_mul(&m).unwrap(), h);
        assert!(u.is_unimodular());
        assert!(h.get(1, 0).is_zero());
        assert!(h.get(0, 0).is_positive() && h.get(1, 1).is_positive());
        assert!(!h.get(0, 1).is_negative() && h.get(0, 1) < h.get(1, 1));
    }
}
