use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::{horner, IntPolynomial};
use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 500;

/// All complex roots of `p`, repeated by multiplicity.
///
/// Multiple roots are separated exactly first (square-free decomposition over
/// ℚ), then each square-free factor is solved by Aberth–Ehrlich iteration and
/// polished with Newton steps. Every root is checked against the relative
/// residual `|f(r)| <= tol · Σ|cᵢ||r|ⁱ` of its square-free factor `f`.
pub fn complex_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::Invalid("polynomial has degree 0; no roots".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("root tolerance must be positive, got {tol}")));
    }
    let mut roots = Vec::with_capacity(p.degree());
    for (factor, mult) in p.squarefree_factors() {
        let coeffs: Vec<f64> = factor
            .iter()
            .map(|c: &BigRational| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        let found = aberth(&coeffs, tol)?;
        for r in found {
            for _ in 0..mult {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    Ok(roots)
}

fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * r.powi(i as i32))
        .sum();
    let v = horner(coeffs, z).norm();
    if scale == 0.0 {
        v
    } else {
        v / scale
    }
}

/// Aberth–Ehrlich for a square-free real polynomial with ascending coefficients.
fn aberth(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / lead, 0.0)]);
    }
    let deriv: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();

    // Initial guesses on a circle of radius 1 + max|cᵢ/c_lead| (Cauchy bound).
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pk = horner(coeffs, z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let dk = horner(&deriv, z[k]);
            let ratio = pk / dk;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    // Newton polish; simple roots converge quadratically from here.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let pk = horner(coeffs, *zk);
            let dk = horner(&deriv, *zk);
            let step = pk / dk;
            if !step.is_finite() || step.norm() == 0.0 {
                break;
            }
            *zk -= step;
        }
        // real coefficients: snap numerically-real roots onto the axis
        if zk.im.abs() <= 1e-14 * zk.norm().max(1.0) {
            zk.im = 0.0;
        }
    }

    let worst = z
        .iter()
        .map(|&zk| relative_residual(coeffs, zk))
        .fold(0.0, f64::max);
    if worst > tol || (!converged && worst > tol * 1e-2) {
        return Err(Error::RootsNotConverged {
            iterations: MAX_ITERATIONS,
            residual: worst,
        });
    }
    Ok(z)
}
