//! Explicit Følner functions: boxes, lattice parallelepipeds and convolution
//! towers. Each gives an upper bound on the δ-rank.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use serde::Serialize;

use super::weighted::{convolve, defect_exact, WeightedFunction};
use crate::error::{Error, Result};
use crate::group::{AbelianAutomorphism, AbelianElement, FgAbelianGroup, IntMatrix};
use crate::spectral::{char_poly, complex_roots, DEFAULT_ROOT_TOL, UNIT_CIRCLE_SNAP};

/// Relative slack when deciding `|sᵢ| ≤ t` in floating point.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Uniform weights on `[−m, m]ᵖ` times the whole torsion subgroup.
pub fn box_folner(group: &FgAbelianGroup, half_width: i64) -> Result<WeightedFunction> {
    if half_width < 0 {
        return Err(Error::Invalid("box half-width must be nonnegative".into()));
    }
    WeightedFunction::uniform(group.clone(), group.ball(half_width))
}

/// Smallest centred box whose uniform weights have defect `< δ` on `ω`.
pub fn box_upper_bound(
    group: &FgAbelianGroup,
    omega: &[AbelianElement],
    delta: f64,
    max_half_width: i64,
) -> Result<WeightedFunction> {
    let delta_q = BigRational::from_float(delta)
        .filter(|_| delta > 0.0)
        .ok_or_else(|| Error::Invalid(format!("δ must be positive and finite, got {delta}")))?;
    for m in 0..=max_half_width {
        let t = box_folner(group, m)?;
        let d = defect_exact(&t, omega)?.expect("uniform weights are exact");
        if d < delta_q {
            return Ok(t);
        }
    }
    Err(Error::RankSearchExhausted {
        radius: max_half_width,
        max_support: group.ball(max_half_width).len(),
        delta,
    })
}

/// Smallest integer `C > 3` with `((C − 2)/(C + 1))ᵖ > 1 − δ/2`, decided in
/// exact arithmetic.
pub fn choose_folner_constant(p: usize, delta: f64) -> Result<u64> {
    if p == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    let d = BigRational::from_float(delta)
        .filter(|_| delta > 0.0)
        .ok_or_else(|| Error::Invalid(format!("δ must be positive and finite, got {delta}")))?;
    let target = BigRational::one() - d / BigRational::from_integer(BigInt::from(2));
    let mut c: u64 = 4;
    loop {
        let ratio = BigRational::new(BigInt::from(c - 2), BigInt::from(c + 1));
        if Pow::pow(ratio, p) > target {
            return Ok(c);
        }
        c += 1;
    }
}

/// `Γ_χ(t) = {Σ sᵢvᵢ : |sᵢ| ≤ t}` for a basis `χ = {v₁..v_p}` of `ℝᵖ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Parallelepiped {
    vectors: Vec<Vec<f64>>,
    #[serde(skip)]
    inverse: DMatrix<f64>,
}

impl Parallelepiped {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let p = vectors.len();
        if p == 0 || vectors.iter().any(|v| v.len() != p) {
            return Err(Error::Shape("basis must be p vectors of length p".into()));
        }
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("basis has non-finite entries".into()));
        }
        let m = DMatrix::from_fn(p, p, |i, j| vectors[j][i]);
        let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let det = m.determinant();
        if det.abs() <= 1e-12 * scale.powi(p as i32) {
            return Err(Error::Invalid("parallelepiped basis is degenerate".into()));
        }
        let inverse = m
            .try_inverse()
            .ok_or_else(|| Error::Invalid("parallelepiped basis is degenerate".into()))?;
        Ok(Parallelepiped { vectors, inverse })
    }

    pub fn canonical(p: usize) -> Self {
        let vectors = (0..p)
            .map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Parallelepiped::new(vectors).expect("identity basis")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Coordinates `s` with `x = Σ sᵢvᵢ`.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.inverse * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    pub fn contains(&self, x: &[f64], t: f64) -> bool {
        self.coordinates(x)
            .iter()
            .all(|s| s.abs() <= t * (1.0 + MEMBERSHIP_TOL) + MEMBERSHIP_TOL)
    }

    /// `Γ_χ(1)` contains the unit sup-norm cube, i.e. every row of `|V⁻¹|`
    /// sums to at most 1.
    pub fn contains_unit_cube(&self) -> bool {
        self.inverse
            .row_iter()
            .all(|r| r.iter().map(|x| x.abs()).sum::<f64>() <= 1.0 + MEMBERSHIP_TOL)
    }

    /// Each `vᵢ` multiplied by `factors[i]`.
    pub fn scaled(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.dim() {
            return Err(Error::Shape("one scale factor per basis vector".into()));
        }
        Parallelepiped::new(
            self.vectors
                .iter()
                .zip(factors)
                .map(|(v, f)| v.iter().map(|x| x * f).collect())
                .collect(),
        )
    }

    /// `Γ_χ(t) ∩ ℤᵖ` in lexicographic order.
    pub fn lattice_points(&self, t: f64) -> Vec<Vec<i64>> {
        let p = self.dim();
        let reach: Vec<i64> = (0..p)
            .map(|j| {
                let r: f64 = self.vectors.iter().map(|v| v[j].abs()).sum::<f64>() * t;
                (r * (1.0 + MEMBERSHIP_TOL) + MEMBERSHIP_TOL).floor() as i64
            })
            .collect();
        let mut out = Vec::new();
        let mut x: Vec<i64> = reach.iter().map(|r| -r).collect();
        loop {
            let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            if self.contains(&xf, t) {
                out.push(x.clone());
            }
            let mut i = p;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < reach[i] {
                    x[i] += 1;
                    for (j, xj) in x.iter_mut().enumerate().skip(i + 1) {
                        *xj = -reach[j];
                    }
                    break;
                }
            }
        }
    }
}

/// Uniform weights on `Γ_χ(C) ∩ ℤᵖ`.
pub fn parallelepiped_folner(chi: &Parallelepiped, c: u64) -> Result<WeightedFunction> {
    let group = FgAbelianGroup::free(chi.dim());
    let points = chi.lattice_points(c as f64);
    let elements = points
        .iter()
        .map(|x| group.element(x, &[]))
        .collect::<Result<Vec<_>>>()?;
    WeightedFunction::uniform(group, elements)
}

/// `|(x + Q) △ Q| / |Q|` for a finite `Q ⊂ ℤᵖ`.
pub fn symmetric_difference_ratio(q: &BTreeSet<Vec<i64>>, x: &[i64]) -> BigRational {
    let overlap = q
        .iter()
        .filter(|y| {
            let back: Vec<i64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
            q.contains(&back)
        })
        .count();
    BigRational::new(
        BigInt::from(2 * (q.len() - overlap)),
        BigInt::from(q.len()),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma61Report {
    pub constant: u64,
    pub delta: f64,
    pub folner_size: usize,
    pub shifts_tested: usize,
    pub worst_ratio: f64,
    pub worst_shift: Vec<i64>,
    pub holds: bool,
}

/// Checks `|(x + Q(C)) △ Q(C)| / |Q(C)| < δ` for every `x ∈ Γ_χ(1) ∩ ℤᵖ`,
/// with `C` from [`choose_folner_constant`].
pub fn lemma61_check(chi: &Parallelepiped, delta: f64) -> Result<Lemma61Report> {
    if !chi.contains_unit_cube() {
        return Err(Error::Invalid("Γ_χ(1) does not contain the unit cube".into()));
    }
    let c = choose_folner_constant(chi.dim(), delta)?;
    let q: BTreeSet<Vec<i64>> = chi.lattice_points(c as f64).into_iter().collect();
    let shifts = chi.lattice_points(1.0);
    let delta_q = BigRational::from_float(delta).expect("validated δ");
    let mut worst = BigRational::from_integer(BigInt::from(0));
    let mut worst_shift = vec![0; chi.dim()];
    for x in &shifts {
        let r = symmetric_difference_ratio(&q, x);
        if r > worst {
            worst = r;
            worst_shift = x.clone();
        }
    }
    Ok(Lemma61Report {
        constant: c,
        delta,
        folner_size: q.len(),
        shifts_tested: shifts.len(),
        worst_ratio: worst.to_f64().unwrap_or(f64::NAN),
        worst_shift,
        holds: worst < delta_q,
    })
}

/// Basis of real generalized eigenvectors with the growth moduli
/// `μᵢ = max(1, |λᵢ|)` of each direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptedBasis {
    pub basis: Parallelepiped,
    pub moduli: Vec<f64>,
    pub epsilon: f64,
    /// Smallest `n₀ ≤ ADAPTED_CHECK_MAX` from which the iterate inclusion holds
    /// for the unit vectors `±eᵢ` up to `ADAPTED_CHECK_MAX`.
    pub inclusion_onset: Option<usize>,
}

pub const ADAPTED_CHECK_MAX: usize = 40;

fn normalize_phase(v: &mut [Complex64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() * (1.0 + 1e-9) { z } else { best });
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Basis along generalized eigenspaces (real and imaginary parts for complex
/// pairs), each vector scaled so that `Γ_χ(1)` just contains the unit cube.
pub fn adapted_basis(m: &IntMatrix, epsilon: f64) -> Result<AdaptedBasis> {
    if !m.is_square() || m.dim() == 0 {
        return Err(Error::Shape("adapted basis needs a nonempty square matrix".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Invalid("ε must be positive".into()));
    }
    if m.det()? == BigInt::from(0) {
        return Err(Error::Singular);
    }
    let p = m.dim();
    let mf = m.to_f64();
    let a = DMatrix::from_row_slice(p, p, &mf);
    let roots = complex_roots(&char_poly(m)?, DEFAULT_ROOT_TOL)?;

    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|(z, _)| *z == r) {
            Some((_, mult)) => *mult += 1,
            None => clusters.push((r, 1)),
        }
    }

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut moduli = Vec::with_capacity(p);
    for &(lambda, mult) in &clusters {
        if lambda.im < 0.0 {
            continue;
        }
        let shifted = DMatrix::from_fn(p, p, |i, j| {
            Complex64::new(a[(i, j)], 0.0) - if i == j { lambda } else { Complex64::new(0.0, 0.0) }
        });
        let mut power = DMatrix::identity(p, p);
        for _ in 0..mult {
            power = &power * &shifted;
        }
        let svd = power.svd(false, true);
        let v_t = svd.v_t.ok_or(Error::Internal("SVD returned no right vectors".into()))?;
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        let scale = svd.singular_values.iter().fold(1.0f64, |s, x| s.max(*x));
        let mut kernel: Vec<Vec<Complex64>> = Vec::with_capacity(mult);
        for &k in order.iter().take(mult) {
            if svd.singular_values[k] > 1e-6 * scale {
                return Err(Error::Internal(format!(
                    "generalized eigenspace of {lambda} has dimension below {mult}"
                )));
            }
            let mut v: Vec<Complex64> = v_t.row(k).iter().map(|z| z.conj()).collect();
            normalize_phase(&mut v);
            kernel.push(v);
        }
        let mu = if lambda.norm() <= 1.0 + UNIT_CIRCLE_SNAP { 1.0 } else { lambda.norm() };
        if lambda.im == 0.0 {
            for v in kernel {
                vectors.push(v.iter().map(|z| z.re).collect());
                moduli.push(mu);
            }
        } else {
            for v in kernel {
                vectors.push(v.iter().map(|z| z.re).collect());
                vectors.push(v.iter().map(|z| z.im).collect());
                moduli.push(mu);
                moduli.push(mu);
            }
        }
    }
    if vectors.len() != p {
        return Err(Error::Internal("eigenvector count does not match the dimension".into()));
    }
    let raw = Parallelepiped::new(vectors)?;
    let factors: Vec<f64> = raw
        .inverse
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum())
        .collect();
    let basis = raw.scaled(&factors)?;
    let sigma: Vec<Vec<i64>> = (0..p)
        .flat_map(|i| {
            [1i64, -1].into_iter().map(move |sgn| {
                let mut v = vec![0; p];
                v[i] = sgn;
                v
            })
        })
        .collect();
    let mut result = AdaptedBasis {
        basis,
        moduli,
        epsilon,
        inclusion_onset: None,
    };
    result.inclusion_onset =
        (1..=ADAPTED_CHECK_MAX).find(|&n0| iterate_inclusion_holds(m, &result, &sigma, n0..=ADAPTED_CHECK_MAX));
    Ok(result)
}

/// For every `n` in `ns`: `{γʲh : h ∈ σ, 1 ≤ j ≤ n} ⊂ {Σ sᵢ(1+ε)ⁿμᵢⁿvᵢ : |sᵢ| ≤ 1}`.
pub fn iterate_inclusion_holds(
    m: &IntMatrix,
    adapted: &AdaptedBasis,
    sigma: &[Vec<i64>],
    ns: std::ops::RangeInclusive<usize>,
) -> bool {
    let p = m.dim();
    let mf = m.to_f64();
    let a = DMatrix::from_row_slice(p, p, &mf);
    let n_max = *ns.end();
    // worst[j][i] = max over h of |coordinate i of γʲh|
    let mut worst = vec![vec![0.0f64; p]; n_max + 1];
    for h in sigma {
        let mut y = DVector::from_iterator(p, h.iter().map(|&v| v as f64));
        for row in worst.iter_mut().skip(1) {
            y = &a * y;
            let s = adapted.basis.coordinates(y.as_slice());
            for (w, si) in row.iter_mut().zip(s) {
                *w = w.max(si.abs());
            }
        }
    }
    ns.into_iter().all(|n| {
        let bounds: Vec<f64> = adapted
            .moduli
            .iter()
            .map(|mu| ((1.0 + adapted.epsilon) * mu).powi(n as i32))
            .collect();
        (1..=n).all(|j| {
            worst[j]
                .iter()
                .zip(&bounds)
                .all(|(w, b)| *w <= b * (1.0 + MEMBERSHIP_TOL))
        })
    })
}

/// `Fₙ = f ∗ f∘γ⁻¹ ∗ … ∗ f∘γ⁻ⁿ⁺¹`, failing once a support exceeds `cap`.
pub fn convolution_tower(
    f: &WeightedFunction,
    gamma: &AbelianAutomorphism,
    n: usize,
    cap: usize,
) -> Result<WeightedFunction> {
    if n == 0 {
        return Err(Error::Invalid("tower height must be at least 1".into()));
    }
    let mut tower = f.clone();
    let mut layer = f.clone();
    for _ in 1..n {
        layer = layer.push_forward(gamma)?;
        let bound = tower.len().saturating_mul(layer.len());
        if bound > cap {
            let lower = tower.len().max(layer.len());
            if lower > cap {
                return Err(Error::CapExceeded { cap, lower_bound: lower });
            }
        }
        tower = convolve(&tower, &layer)?;
        if tower.len() > cap {
            return Err(Error::CapExceeded {
                cap,
                lower_bound: tower.len(),
            });
        }
    }
    Ok(tower)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerDefect {
    pub level: usize,
    pub s: AbelianElement,
    pub tower: f64,
    pub base: f64,
}

/// `‖γᵏ(s).Fₙ − Fₙ‖₁` against `‖s.f − f‖₁` for `s ∈ ω`, `0 ≤ k < n`.
pub fn tower_defects(
    f: &WeightedFunction,
    tower: &WeightedFunction,
    gamma: &AbelianAutomorphism,
    n: usize,
    omega: &[AbelianElement],
) -> Result<Vec<TowerDefect>> {
    let mut out = Vec::new();
    for s in omega {
        let base = f.translation_defect(s)?;
        let mut image = s.clone();
        for level in 0..n {
            out.push(TowerDefect {
                level,
                s: image.clone(),
                tower: tower.translation_defect(&image)?,
                base,
            });
            image = gamma.apply(&image)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::weighted::{defect, Weights};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn folner_constant_examples() {
        assert_eq!(choose_folner_constant(1, 1.0).unwrap(), 6);
        assert_eq!(choose_folner_constant(2, 0.5).unwrap(), 22);
        assert_eq!(choose_folner_constant(2, 0.1).unwrap(), 118);
        for p in 1..5 {
            assert_eq!(choose_folner_constant(p, 2.0).unwrap(), 4);
            assert_eq!(choose_folner_constant(p, 7.5).unwrap(), 4);
        }
        // (C−2)/(C+1) = 0.85 exactly at C = 19, and the inequality is strict
        assert_eq!(choose_folner_constant(1, 0.3).unwrap(), 20);
        assert!(choose_folner_constant(1, 0.0).is_err());
    }

    /// Independent closed form: C > (2 + r)/(1 − r) with r = (1 − δ/2)^{1/p}.
    #[test]
    fn folner_constant_closed_form() {
        for p in 1..4 {
            for d in [0.05f64, 0.1, 0.25, 0.5, 1.0, 1.5] {
                let r: f64 = (1.0f64 - d / 2.0).powf(1.0 / p as f64);
                let bound = (2.0 + r) / (1.0 - r);
                let expected = (bound.floor() as u64 + 1).max(4);
                assert_eq!(choose_folner_constant(p, d).unwrap(), expected, "p={p} δ={d}");
            }
        }
    }

    #[test]
    fn canonical_parallelepipeds() {
        let t = parallelepiped_folner(&Parallelepiped::canonical(1), 4).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.support()[0].lattice(), &[-4]);
        let t = parallelepiped_folner(&Parallelepiped::canonical(2), 2).unwrap();
        assert_eq!(t.len(), 25);
        assert!(matches!(t.weights(), Weights::Exact(w) if w[0] == q(1, 25)));
    }

    #[test]
    fn interval_defect_at_chosen_constant() {
        let c = choose_folner_constant(1, 1.0).unwrap();
        let t = parallelepiped_folner(&Parallelepiped::canonical(1), c).unwrap();
        let g = FgAbelianGroup::free(1);
        let omega = [g.element(&[1], &[]).unwrap(), g.element(&[-1], &[]).unwrap()];
        assert_eq!(defect_exact(&t, &omega).unwrap(), Some(q(2, 13)));
        assert!((defect(&t, &omega).unwrap() - 0.1538).abs() < 1e-4);
    }

    #[test]
    fn degenerate_basis_rejected() {
        assert!(Parallelepiped::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
        assert!(Parallelepiped::new(vec![vec![1.0]; 2]).is_err());
    }

    #[test]
    fn skew_parallelepiped_membership() {
        // v1 = (2, 1), v2 = (0, 2): x = (2, 3) = v1 + v2
        let chi = Parallelepiped::new(vec![vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let s = chi.coordinates(&[2.0, 3.0]);
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
        assert!(chi.contains(&[2.0, 3.0], 1.0));
        assert!(!chi.contains(&[2.0, 4.0], 1.0));
        let pts = chi.lattice_points(1.0);
        for x in &pts {
            assert!(chi.contains(&[x[0] as f64, x[1] as f64], 1.0));
        }
        assert!(pts.contains(&vec![-2, -3]));
    }

    #[test]
    fn lemma61_small_cases() {
        for p in 1..=2 {
            let r = lemma61_check(&Parallelepiped::canonical(p), 0.5).unwrap();
            assert!(r.holds, "{r:?}");
            assert_eq!(r.shifts_tested, 3usize.pow(p as u32));
        }
        let bad = Parallelepiped::new(vec![vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(lemma61_check(&bad, 0.5).is_err());
    }

    #[test]
    fn adapted_basis_diagonal() {
        let b = adapted_basis(&IntMatrix::diag(&[2, 1]), 0.1).unwrap();
        assert_eq!(b.basis.vectors(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(b.moduli, vec![2.0, 1.0]);
        assert!(b.basis.contains_unit_cube());
        assert_eq!(b.inclusion_onset, Some(1));
    }

    #[test]
    fn adapted_basis_cat_map() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let b = adapted_basis(&m, 0.1).unwrap();
        assert!(b.basis.contains_unit_cube());
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((b.moduli[0] - golden).abs() < 1e-12);
        assert_eq!(b.moduli[1], 1.0);
        // expanding direction has slope (√5 − 1)/2
        let v = &b.basis.vectors()[0];
        assert!((v[1] / v[0] - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        let sigma = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 2]];
        assert!(iterate_inclusion_holds(&m, &b, &sigma, 5..=15));
    }

    #[test]
    fn adapted_basis_rotation_and_jordan() {
        let r = adapted_basis(&IntMatrix::from_i64(&[&[0, -1], &[1, 0]]), 0.1).unwrap();
        assert_eq!(r.moduli, vec![1.0, 1.0]);
        assert!(r.basis.contains_unit_cube());
        assert!(r.inclusion_onset.is_some());

        let j = adapted_basis(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]]), 0.5).unwrap();
        assert!(j.basis.contains_unit_cube());
        assert!(j.inclusion_onset.is_some());
        assert!(adapted_basis(&IntMatrix::zeros(2, 2), 0.1).is_err());
    }

    #[test]
    fn tower_examples() {
        let g = FgAbelianGroup::free(1);
        let e = |v: i64| g.element(&[v], &[]).unwrap();
        let f = WeightedFunction::uniform(g.clone(), [e(0), e(1)]).unwrap();
        let id = AbelianAutomorphism::identity(&g);
        assert_eq!(convolution_tower(&f, &id, 1, 100).unwrap(), f);
        let f2 = convolution_tower(&f, &id, 2, 100).unwrap();
        assert_eq!(f2.support(), &[e(0), e(1), e(2)]);
        assert_eq!(f2.weights(), &Weights::Exact(vec![q(1, 4), q(1, 2), q(1, 4)]));
    }

    #[test]
    fn tower_support_is_sumset_and_defect_shrinks() {
        let cat = AbelianAutomorphism::of_matrix(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let g = cat.group().clone();
        let f = box_folner(&g, 1).unwrap();
        let tower = convolution_tower(&f, &cat, 3, 100_000).unwrap();
        let e = crate::peters::FiniteSubset::new(g.clone(), f.support().to_vec()).unwrap();
        let s = crate::peters::peters_growth(&cat, &e, 3, 100_000).unwrap();
        assert_eq!(tower.len() as u64, s.size(3));
        assert!(matches!(tower.weights(), Weights::Exact(_)));
        let omega = [g.element(&[1, 0], &[]).unwrap(), g.element(&[0, 1], &[]).unwrap()];
        for d in tower_defects(&f, &tower, &cat, 3, &omega).unwrap() {
            assert!(d.tower <= d.base + 1e-12, "{d:?}");
        }
        assert!(matches!(
            convolution_tower(&f, &cat, 6, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn box_bound() {
        let g = FgAbelianGroup::free(1);
        let omega = [g.element(&[1], &[]).unwrap()];
        let t = box_upper_bound(&g, &omega, 0.5, 10).unwrap();
        // 2/(2m+1) < 1/2 first at m = 2
        assert_eq!(t.len(), 5);
    }
}
