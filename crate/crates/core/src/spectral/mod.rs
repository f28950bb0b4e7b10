//! Characteristic polynomials, their complex roots, and the entropy
//! `Σ log max(1, |λ|)` over the eigenvalues of an integer matrix.

mod poly;
mod roots;

pub use poly::{char_poly, IntPolynomial};
pub use roots::{complex_roots, DEFAULT_ROOT_TOL, MAX_ITERATIONS};

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::estimate::{Diagnostics, EntropyEstimate, Method};
use crate::group::IntMatrix;

/// Moduli within this distance of 1 count as exactly 1.
pub const UNIT_CIRCLE_SNAP: f64 = 1e-10;

/// How strictly to validate the matrix handed to [`eigen_entropy_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatrixKind {
    /// det = ±1 is required.
    #[default]
    Automorphism,
    /// Any nonsingular integer matrix.
    Endomorphism,
}

/// `log max(1, |λ|)`, zero on (or within [`UNIT_CIRCLE_SNAP`] of) the unit circle.
pub fn root_contribution(z: Complex64) -> f64 {
    let r = z.norm();
    if r <= 1.0 + UNIT_CIRCLE_SNAP {
        0.0
    } else {
        r.ln()
    }
}

/// Log Mahler measure `log|lead| + Σ log max(1, |λ|)`.
pub fn log_mahler_measure(p: &IntPolynomial, tol: f64) -> Result<(f64, Vec<Complex64>)> {
    let lead = p.leading().abs().to_f64().unwrap_or(f64::INFINITY).ln();
    if p.degree() == 0 {
        return Ok((lead, Vec::new()));
    }
    let roots = complex_roots(p, tol)?;
    let value = lead + roots.iter().map(|&z| root_contribution(z)).sum::<f64>();
    Ok((value, roots))
}

/// Entropy of a unimodular integer matrix acting on ℤⁿ.
pub fn eigen_entropy(m: &IntMatrix, tol: f64) -> Result<EntropyEstimate> {
    eigen_entropy_of(m, tol, MatrixKind::Automorphism)
}

pub fn eigen_entropy_of(m: &IntMatrix, tol: f64, kind: MatrixKind) -> Result<EntropyEstimate> {
    if !m.is_square() {
        return Err(Error::Shape("entropy of a non-square matrix".into()));
    }
    let det = m.det()?;
    match kind {
        MatrixKind::Automorphism if det.abs() != num_bigint::BigInt::from(1) => {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            })
        }
        MatrixKind::Endomorphism if det.is_zero() => return Err(Error::Singular),
        _ => {}
    }
    let poly = char_poly(m)?;
    let (value, roots) = if m.dim() == 0 {
        (0.0, Vec::new())
    } else {
        log_mahler_measure(&poly, tol)?
    };
    Ok(EntropyEstimate {
        value,
        method: Method::Spectral,
        diagnostics: Diagnostics::Spectral {
            char_poly: poly,
            roots: roots.iter().map(|z| [z.re, z.im]).collect(),
            root_moduli: roots.iter().map(|z| z.norm()).collect(),
        },
        tolerance: tol,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN_LOG: f64 = 0.962_423_650_119_206_9;

    #[test]
    fn golden_ratio_oracle() {
        let oracle = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((oracle - GOLDEN_LOG).abs() < 1e-15);
    }

    #[test]
    fn cat_map_entropy() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let e = eigen_entropy(&m, DEFAULT_ROOT_TOL).unwrap();
        assert!((e.value - GOLDEN_LOG).abs() < 1e-12);
        assert_eq!(e.method, Method::Spectral);
    }

    #[test]
    fn isometries_have_zero_entropy() {
        for m in [
            IntMatrix::identity(3),
            IntMatrix::from_i64(&[&[0, -1], &[1, 0]]),
            IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
            IntMatrix::from_i64(&[&[0, -1], &[1, -1]]),
        ] {
            assert_eq!(eigen_entropy(&m, DEFAULT_ROOT_TOL).unwrap().value, 0.0, "{m:?}");
        }
    }

    #[test]
    fn endomorphism_flag() {
        let m = IntMatrix::diag(&[2, 3]);
        assert!(matches!(
            eigen_entropy(&m, DEFAULT_ROOT_TOL),
            Err(Error::NotUnimodular { .. })
        ));
        let e = eigen_entropy_of(&m, DEFAULT_ROOT_TOL, MatrixKind::Endomorphism).unwrap();
        assert!((e.value - 6f64.ln()).abs() < 1e-12);
        assert!((e.value - 1.791_759_5).abs() < 1e-7);
        assert!(matches!(
            eigen_entropy_of(&IntMatrix::zeros(2, 2), 1e-12, MatrixKind::Endomorphism),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn block_sum_is_additive() {
        let cat = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let other = IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, -1], &[0, 1, 0]]);
        let a = eigen_entropy(&cat, 1e-12).unwrap().value;
        let b = eigen_entropy(&other, 1e-12).unwrap().value;
        let ab = eigen_entropy(&cat.direct_sum(&other), 1e-12).unwrap().value;
        assert!((ab - a - b).abs() < 1e-9);
    }
}
