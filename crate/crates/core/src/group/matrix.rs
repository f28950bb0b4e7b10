use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision integers, stored row-major.
///
/// Most of the crate only ever builds square instances (automorphisms of a
/// lattice); Smith normal form and relation matrices use the rectangular case.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().cloned().map(Into::into))
            .collect();
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Square matrix from `i64` rows; panics on ragged input. Test and fixture helper.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned).expect("ragged matrix literal")
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let det = self.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        let inv = self.rational_inverse()?;
        let mut out = Self::zeros(self.rows, self.cols);
        for (slot, q) in out.data.iter_mut().zip(inv) {
            if !q.is_integer() {
                return Err(Error::Internal("unimodular inverse is not integral".into()));
            }
            *slot = q.to_integer();
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse over the rationals, row-major.
    pub fn rational_inverse(&self) -> Result<Vec<BigRational>> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let w = 2 * n;
        let mut a: Vec<BigRational> = Vec::with_capacity(n * w);
        for i in 0..n {
            for j in 0..n {
                a.push(BigRational::from_integer(self.get(i, j).clone()));
            }
            for j in 0..n {
                a.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * w + col].is_zero())
                .ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..w {
                    a.swap(pivot * w + j, col * w + j);
                }
            }
            let p = a[col * w + col].clone();
            for j in 0..w {
                a[col * w + j] = &a[col * w + j] / &p;
            }
            for r in 0..n {
                if r == col || a[r * w + col].is_zero() {
                    continue;
                }
                let f = a[r * w + col].clone();
                for j in 0..w {
                    let delta = &f * &a[col * w + j];
                    a[r * w + j] -= delta;
                }
            }
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            out.extend_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Ok(out)
    }

    /// `self^k` for any integer k; negative powers require unimodularity.
    pub fn pow(&self, k: i64) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self.data[source * self.cols + j];
            self.data[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self.data[i * self.cols + source];
            self.data[i * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -v;
        }
    }

    /// Entries with every value reduced into `[0, m)`.
    pub fn rem_euclid(&self, m: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.mod_floor(m)).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Entries that fit in `i64` serialize as JSON integers, larger ones as decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for v in self.0 {
                    match v.to_i64() {
                        Some(x) => seq.serialize_element(&x)?,
                        None => seq.serialize_element(&v.to_string())?,
                    }
                }
                seq.end()
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(deserializer)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_of_cat_map() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det().unwrap(), BigInt::from(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, IntMatrix::from_i64(&[&[1, -1], &[-1, 2]]));
        assert!((&m * &inv).is_identity());
    }

    #[test]
    fn bareiss_matches_cofactor_on_3x3() {
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[3, -1, 4], &[5, 0, -2]]);
        // cofactor expansion along the first row
        let expected = 0 * (2 - 0) - 2 * (-6 - 20) + 1 * (0 + 5);
        assert_eq!(m.det().unwrap(), BigInt::from(expected));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = IntMatrix::diag(&[2, 3]);
        assert!(matches!(m.inverse(), Err(Error::NotUnimodular { .. })));
        let z = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(z.det().unwrap(), BigInt::zero());
    }

    #[test]
    fn negative_powers() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let p = m.pow(3).unwrap();
        let q = m.pow(-3).unwrap();
        assert!((&p * &q).is_identity());
        assert!(m.pow(0).unwrap().is_identity());
    }

    #[test]
    fn serde_shape() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[2,1],[1,1]]");
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<IntMatrix>("[[2.0,1],[1,1]]").is_err());
    }
}
