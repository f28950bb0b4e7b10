use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::IntMatrix;

/// Integer polynomial, coefficients in ascending degree order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty coefficients")
    }

    pub fn is_monic_up_to_sign(&self) -> bool {
        self.leading().abs().is_one()
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.to_f64(), z)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Square-free decomposition `self = c · Π fᵢ^i`; returns monic rational
    /// factors paired with their multiplicity (Yun's algorithm over ℚ).
    pub(crate) fn squarefree_factors(&self) -> Vec<(Vec<BigRational>, usize)> {
        let f = monic(&self.to_rational());
        if f.len() <= 1 {
            return Vec::new();
        }
        let df = derivative(&f);
        let a0 = gcd(&f, &df);
        let mut b = divexact(&f, &a0);
        let c = divexact(&df, &a0);
        let mut d = sub(&c, &derivative(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            if a.len() > 1 {
                out.push((a.clone(), i));
            }
            b = divexact(&b, &a);
            let c = divexact(&d, &a);
            d = sub(&c, &derivative(&b));
            i += 1;
        }
        out
    }
}

/// Characteristic polynomial `det(tI − m)` by the Faddeev–LeVerrier recurrence.
///
/// Every division in the recurrence is exact over ℤ, so the whole computation
/// stays in integer arithmetic.
pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = m.checked_mul(&mk)?;
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let tr = m.checked_mul(&next)?.trace();
        let kk = BigInt::from(k);
        if !(&tr % &kk).is_zero() {
            return Err(Error::Internal("Faddeev-LeVerrier division not exact".into()));
        }
        coeffs[n - k] = -(tr / kk);
        mk = next;
    }
    Ok(IntPolynomial::new(coeffs))
}

pub(crate) fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn monic(p: &[BigRational]) -> Vec<BigRational> {
    let p = trim(p.to_vec());
    match p.last().cloned() {
        Some(lead) => p.into_iter().map(|c| c / &lead).collect(),
        None => p,
    }
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x - y
            })
            .collect(),
    )
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("division by zero polynomial").clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            let delta = &f * c;
            r[shift + i] -= delta;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn divexact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (q, r) = divrem(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() != 0 {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(c.to_string()),
            })
            .collect();
        vals.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_map_char_poly() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[1, -3, 1]));
        assert_eq!(char_poly(&m).unwrap().to_string(), "t^2 - 3t + 1");
    }

    #[test]
    fn identity_char_poly_is_binomial() {
        let m = IntMatrix::identity(4);
        // (t-1)^4
        assert_eq!(
            char_poly(&m).unwrap(),
            IntPolynomial::from_i64(&[1, -4, 6, -4, 1])
        );
    }

    #[test]
    fn rotation_char_poly() {
        let m = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[1, 0, 1]));
    }

    /// Independent route: det(tI − M) by Bareiss at integer points.
    #[test]
    fn agrees_with_determinant_at_sample_points() {
        let m = IntMatrix::from_i64(&[
            &[3, -1, 4, 1],
            &[-5, 9, 2, -6],
            &[5, 3, -5, 8],
            &[9, -7, 9, 3],
        ]);
        let p = char_poly(&m).unwrap();
        for t in -4i64..=4 {
            let mut shifted = m.clone();
            for i in 0..4 {
                for j in 0..4 {
                    let v = -m.get(i, j) + if i == j { BigInt::from(t) } else { BigInt::zero() };
                    shifted.set(i, j, v);
                }
            }
            assert_eq!(p.eval_int(&BigInt::from(t)), shifted.det().unwrap());
        }
    }

    #[test]
    fn squarefree_of_cube() {
        let p = IntPolynomial::from_i64(&[-1, 3, -3, 1]); // (t-1)^3
        let f = p.squarefree_factors();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 3);
        assert_eq!(f[0].0.len(), 2);
    }

    #[test]
    fn squarefree_mixed() {
        // (t^2+1)^2 (t-2)
        let a = IntPolynomial::from_i64(&[1, 0, 1]);
        let p = a.mul(&a).mul(&IntPolynomial::from_i64(&[-2, 1]));
        let f = p.squarefree_factors();
        let degs: Vec<(usize, usize)> = f.iter().map(|(q, m)| (q.len() - 1, *m)).collect();
        assert_eq!(degs, vec![(1, 1), (2, 2)]);
    }
}
