//! Dense two-phase simplex with Bland's rule, over exact rationals or `f64`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Ordered field used by the tableau. `f64` compares with a small tolerance.
pub(crate) trait Scalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn sign(&self) -> Ordering;
    fn cmp_to(&self, o: &Self) -> Ordering {
        self.sub(o).sign()
    }
    fn is_zero_s(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

const FLOAT_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_EPS {
            Ordering::Greater
        } else if *self < -FLOAT_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Eq,
}

/// `Σ coeff·x_col (rel) rhs` with `rhs ≥ 0`.
#[derive(Clone, Debug)]
pub(crate) struct Constraint<S> {
    pub terms: Vec<(usize, S)>,
    pub rel: Relation,
    pub rhs: S,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome<S> {
    Optimal { value: S, x: Vec<S> },
    Infeasible,
    Unbounded,
}

/// Minimizes `objective · x` over `x ≥ 0` subject to `constraints`.
pub(crate) fn minimize<S: Scalar>(
    n_vars: usize,
    objective: &[(usize, S)],
    constraints: &[Constraint<S>],
) -> LpOutcome<S> {
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel == Relation::Le).count();
    let n_art = m - n_slack;
    let width = n_vars + n_slack + n_art;
    let rhs_col = width;

    let mut tab: Vec<Vec<S>> = vec![vec![S::zero(); width + 1]; m];
    let mut basis = vec![0usize; m];
    let mut slack = n_vars;
    let mut art = n_vars + n_slack;
    for (r, c) in constraints.iter().enumerate() {
        debug_assert!(c.rhs.sign() != Ordering::Less, "negative right-hand side");
        for (col, v) in &c.terms {
            tab[r][*col] = tab[r][*col].add(v);
        }
        tab[r][rhs_col] = c.rhs.clone();
        match c.rel {
            Relation::Le => {
                tab[r][slack] = S::from_i64(1);
                basis[r] = slack;
                slack += 1;
            }
            Relation::Eq => {
                tab[r][art] = S::from_i64(1);
                basis[r] = art;
                art += 1;
            }
        }
    }

    if n_art > 0 {
        // phase 1: minimize the sum of artificials
        let mut cost = vec![S::zero(); width + 1];
        for c in cost.iter_mut().take(width).skip(n_vars + n_slack) {
            *c = S::from_i64(1);
        }
        if !run(&mut tab, &mut basis, &mut cost, width) {
            return LpOutcome::Unbounded;
        }
        let infeasibility = cost[rhs_col].clone();
        if infeasibility.sign() != Ordering::Equal {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if basis[r] >= n_vars + n_slack {
                if let Some(col) = (0..n_vars + n_slack).find(|&j| !tab[r][j].is_zero_s()) {
                    pivot(&mut tab, &mut basis, &mut cost, r, col);
                }
            }
        }
    }

    let mut cost = vec![S::zero(); width + 1];
    for (col, v) in objective {
        cost[*col] = cost[*col].add(v);
    }
    // artificial columns may not re-enter
    if !run(&mut tab, &mut basis, &mut cost, n_vars + n_slack) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![S::zero(); n_vars];
    for r in 0..m {
        if basis[r] < n_vars {
            x[basis[r]] = tab[r][rhs_col].clone();
        }
    }
    // the reduced-cost row holds -z in its last column
    let value = S::zero().sub(&cost[rhs_col]);
    LpOutcome::Optimal { value, x }
}

/// Simplex iterations with Bland's rule over entering columns `< limit`.
/// `cost` is the reduced-cost row; its last entry is `-z`. Returns false when
/// the problem is unbounded.
fn run<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    cost: &mut [S],
    limit: usize,
) -> bool {
    let m = tab.len();
    let rhs_col = cost.len() - 1;
    // make the cost row consistent with the current basis
    for r in 0..m {
        let b = basis[r];
        if !cost[b].is_zero_s() {
            let f = cost[b].clone();
            for j in 0..=rhs_col {
                let v = cost[j].sub(&f.mul(&tab[r][j]));
                cost[j] = v;
            }
        }
    }
    loop {
        let Some(enter) = (0..limit).find(|&j| cost[j].sign() == Ordering::Less) else {
            return true;
        };
        let mut leave: Option<(usize, S)> = None;
        for r in 0..m {
            if tab[r][enter].sign() == Ordering::Greater {
                let ratio = tab[r][rhs_col].div(&tab[r][enter]);
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => match ratio.cmp_to(best) {
                        Ordering::Less => true,
                        Ordering::Equal => basis[r] < basis[*lr],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return false;
        };
        pivot(tab, basis, cost, row, enter);
    }
}

fn pivot<S: Scalar>(tab: &mut [Vec<S>], basis: &mut [usize], cost: &mut [S], row: usize, col: usize) {
    let width = tab[row].len();
    let p = tab[row][col].clone();
    for j in 0..width {
        let v = tab[row][j].div(&p);
        tab[row][j] = v;
    }
    let pivot_row = tab[row].clone();
    for (r, line) in tab.iter_mut().enumerate() {
        if r == row || line[col].is_zero_s() {
            continue;
        }
        let f = line[col].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero_s() {
                let v = line[j].sub(&f.mul(&pivot_row[j]));
                line[j] = v;
            }
        }
    }
    if !cost[col].is_zero_s() {
        let f = cost[col].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero_s() {
                let v = cost[j].sub(&f.mul(&pivot_row[j]));
                cost[j] = v;
            }
        }
    }
    basis[row] = col;
}
