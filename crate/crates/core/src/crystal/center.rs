//! The centre `Z(S_A)` of the lattice stabilizer and the action induced on
//! its torsion-free quotient.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{CrystalAutomorphism, CrystalElement, CrystalGroup};
use crate::error::{Error, Result};
use crate::estimate::EntropyEstimate;
use crate::group::{hermite_normal_form, smith_normal_form, AbelianAutomorphism, FgAbelianGroup, IntMatrix};
use crate::spectral::eigen_entropy;

/// Presentation of `Z(S_A) ≅ ℤ^q ⊕ L`.
///
/// Generators are `e₁, …, e_p` followed by `(h, 0)` for `h ∈ Z₀ \ {1}`, where
/// `Z₀ = {h ∈ Z(F₀) : θ(h, k) = θ(k, h) for all k ∈ F₀}`. A word with
/// coefficient row `x` has coordinates `x · coords`, the first `torsion.len()`
/// reduced modulo the torsion orders.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCenter {
    /// `F₀ = {h : c(h) = I}`.
    pub f0: Vec<usize>,
    pub z0: Vec<usize>,
    pub generators: Vec<CrystalElement>,
    pub relations: IntMatrix,
    pub quotient: FgAbelianGroup,
    coords: IntMatrix,
    /// Elements of `Z(S_A)` mapping to the standard generators of the quotient
    /// (free ones first, then torsion).
    pub free_basis: Vec<CrystalElement>,
    pub torsion_basis: Vec<CrystalElement>,
}

fn int(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("centre coordinates"))
}

pub fn stabilizer_center(group: &CrystalGroup) -> Result<StabilizerCenter> {
    let p = group.rank();
    let pg = group.point_group();
    let n = pg.order();
    let identity = IntMatrix::identity(p);
    let f0: Vec<usize> = (0..n).filter(|&h| *group.action(h) == identity).collect();
    let z0: Vec<usize> = f0
        .iter()
        .copied()
        .filter(|&h| {
            f0.iter()
                .all(|&k| pg.mul(h, k) == pg.mul(k, h) && group.cocycle(h, k) == group.cocycle(k, h))
        })
        .collect();
    let extra: Vec<usize> = z0.iter().copied().filter(|&h| h != pg.identity()).collect();
    let gen_index = |h: usize| extra.iter().position(|&x| x == h).map(|i| p + i);
    let ngen = p + extra.len();

    // g_h + g_k − g_{hk} − θ(h, k) = 0
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &h in &extra {
        for &k in &extra {
            let mut r = vec![BigInt::zero(); ngen];
            for (i, &t) in group.cocycle(h, k).iter().enumerate() {
                r[i] -= t;
            }
            for g in [gen_index(h), gen_index(k)].into_iter().flatten() {
                r[g] += 1;
            }
            if let Some(g) = gen_index(pg.mul(h, k)) {
                r[g] -= 1;
            }
            if r.iter().any(|x| !x.is_zero()) && !rows.contains(&r) {
                rows.push(r);
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![BigInt::zero(); ngen]);
    }
    let relations = IntMatrix::from_rows(&rows)?;
    let snf = smith_normal_form(&relations);
    let factors = snf.invariant_factors();
    let r = factors.len();
    let q = ngen - r;
    if q != p {
        return Err(Error::Internal(format!(
            "centre has free rank {q}, expected {p}"
        )));
    }
    let torsion_cols: Vec<usize> = (0..r).filter(|&i| !factors[i].is_one()).collect();
    let torsion_orders = torsion_cols
        .iter()
        .map(|&i| int(&factors[i]))
        .collect::<Result<Vec<_>>>()?;

    // Free coordinates of the lattice generators, then an HNF change of basis
    // so that they become lower triangular.
    let v = &snf.right;
    let mut lattice_free = IntMatrix::zeros(p, q);
    for i in 0..p {
        for j in 0..q {
            lattice_free.set(i, j, v.get(i, r + j).clone());
        }
    }
    let (u, _) = hermite_normal_form(&lattice_free.transpose());
    let w = u.transpose();

    let t = torsion_cols.len();
    let mut coords = IntMatrix::zeros(ngen, t + q);
    for g in 0..ngen {
        for (c, &i) in torsion_cols.iter().enumerate() {
            coords.set(g, c, v.get(g, i).clone());
        }
        for j in 0..q {
            let mut s = BigInt::zero();
            for k in 0..q {
                s += v.get(g, r + k) * w.get(k, j);
            }
            coords.set(g, t + j, s);
        }
    }

    let mut generators: Vec<CrystalElement> = (0..p)
        .map(|i| {
            let mut e = vec![0; p];
            e[i] = 1;
            CrystalElement::new(pg.identity(), e)
        })
        .collect();
    generators.extend(extra.iter().map(|&h| CrystalElement::new(h, vec![0; p])));

    // Preimages: the new coordinate row y corresponds to old coefficients
    // y' · V⁻¹ where y' places y into the SNF coordinates.
    let v_inv = v.inverse()?;
    let w_inv = w.inverse()?;
    let word = |target: &[BigInt]| -> Result<CrystalElement> {
        let mut acc = group.identity();
        for (g, gen) in generators.iter().enumerate() {
            let mut c = BigInt::zero();
            for (k, y) in target.iter().enumerate() {
                c += y * v_inv.get(k, g);
            }
            let c = int(&c)?;
            if c != 0 {
                acc = group.multiply(&acc, &group.pow(gen, c)?)?;
            }
        }
        Ok(acc)
    };
    let mut free_basis = Vec::with_capacity(q);
    for j in 0..q {
        let mut y = vec![BigInt::zero(); ngen];
        for k in 0..q {
            y[r + k] = w_inv.get(j, k).clone();
        }
        free_basis.push(word(&y)?);
    }
    let mut torsion_basis = Vec::with_capacity(t);
    for &i in &torsion_cols {
        let mut y = vec![BigInt::zero(); ngen];
        y[i] = BigInt::one();
        torsion_basis.push(word(&y)?);
    }

    Ok(StabilizerCenter {
        f0,
        z0,
        generators,
        relations,
        quotient: FgAbelianGroup::new(q, torsion_orders)?,
        coords,
        free_basis,
        torsion_basis,
    })
}

impl StabilizerCenter {
    pub fn contains(&self, x: &CrystalElement) -> bool {
        self.z0.contains(&x.h)
    }

    /// Coordinates in `ℤ^q ⊕ L` of an element of `Z(S_A)`.
    pub fn coordinates(&self, x: &CrystalElement) -> Result<(Vec<i64>, Vec<i64>)> {
        if !self.contains(x) {
            return Err(Error::Invalid("element does not lie in the centre of the stabilizer".into()));
        }
        let p = x.lattice.len();
        let ngen = self.generators.len();
        let mut word = vec![BigInt::zero(); ngen];
        for (i, a) in x.lattice.iter().enumerate() {
            word[i] = BigInt::from(*a);
        }
        if let Some(pos) = self.generators[p..].iter().position(|g| g.h == x.h) {
            word[p + pos] = BigInt::one();
        }
        let t = self.quotient.torsion_len();
        let mut out = Vec::with_capacity(self.coords.cols());
        for j in 0..self.coords.cols() {
            let mut s = BigInt::zero();
            for (g, c) in word.iter().enumerate() {
                s += c * self.coords.get(g, j);
            }
            out.push(int(&s)?);
        }
        let torsion = out[..t]
            .iter()
            .zip(self.quotient.torsion_orders())
            .map(|(x, m)| x.rem_euclid(*m))
            .collect();
        Ok((out[t..].to_vec(), torsion))
    }

    pub fn free_rank(&self) -> usize {
        self.quotient.rank()
    }
}

/// Does `γ` send every generator of `Z(S_A)` back into `Z(S_A)`?
pub fn preserves_center(
    group: &CrystalGroup,
    center: &StabilizerCenter,
    gamma: &CrystalAutomorphism,
) -> Result<bool> {
    for g in &center.generators {
        if !center.contains(&gamma.apply(group, g)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every listed generator commutes with `F₀ × {0}` and the lattice basis, which
/// generate `S_A`.
pub fn center_generators_commute(group: &CrystalGroup, center: &StabilizerCenter) -> Result<bool> {
    let p = group.rank();
    let mut stab: Vec<CrystalElement> = center
        .f0
        .iter()
        .map(|&h| CrystalElement::new(h, vec![0; p]))
        .collect();
    stab.extend(group.sample_elements().into_iter().filter(|x| x.h == group.point_group().identity()));
    for z in center.generators.iter().chain(&center.free_basis).chain(&center.torsion_basis) {
        for y in &stab {
            if group.multiply(z, y)? != group.multiply(y, z)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Matrix of `γ` on `Z(S_A)` modulo torsion, in the canonical free basis;
/// column `j` holds the coordinates of the image of basis vector `j`.
pub fn induced_rho(
    group: &CrystalGroup,
    center: &StabilizerCenter,
    gamma: &CrystalAutomorphism,
) -> Result<IntMatrix> {
    let q = center.free_rank();
    let mut m = IntMatrix::zeros(q, q);
    for (j, z) in center.free_basis.iter().enumerate() {
        let image = gamma.apply(group, z)?;
        if !center.contains(&image) {
            return Err(Error::InvalidAutomorphism(
                "automorphism does not preserve the centre of the stabilizer".into(),
            ));
        }
        let (free, _) = center.coordinates(&image)?;
        for (i, c) in free.into_iter().enumerate() {
            m.set(i, j, BigInt::from(c));
        }
    }
    if !m.is_unimodular() {
        return Err(Error::Internal("induced action is not unimodular".into()));
    }
    Ok(m)
}

/// Entropy of `γ` as the log Mahler measure of its induced action.
pub fn crystal_entropy(
    group: &CrystalGroup,
    gamma: &CrystalAutomorphism,
    tol: f64,
) -> Result<EntropyEstimate> {
    let center = stabilizer_center(group)?;
    let rho = induced_rho(group, &center, gamma)?;
    let mut est = eigen_entropy(&rho, tol)?;
    est.note = Some(format!(
        "induced action on the centre of the lattice stabilizer modulo torsion (rank {})",
        center.free_rank()
    ));
    Ok(est)
}

/// Entropy of an automorphism of `ℤᵖ ⊕ F` through its lattice part.
pub fn theorem64_entropy(sigma: &AbelianAutomorphism, tol: f64) -> Result<EntropyEstimate> {
    let mut est = eigen_entropy(sigma.lattice_part(), tol)?;
    est.note = Some("lattice part of an automorphism of Z^p + F".into());
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{d_infinity, nonsplit_z, p2, p4, pg, z2_times_c2, z_times_c2};

    fn cat() -> IntMatrix {
        IntMatrix::from_i64(&[&[2, 1], &[1, 1]])
    }

    #[test]
    fn product_with_torsion() {
        let g = z2_times_c2().group;
        let c = stabilizer_center(&g).unwrap();
        assert_eq!(c.free_rank(), 2);
        assert_eq!(c.quotient.torsion_orders(), &[2]);
        assert!(center_generators_commute(&g, &c).unwrap());
        let gamma = CrystalAutomorphism::from_named(&g, cat(), &[], &[]).unwrap();
        assert_eq!(induced_rho(&g, &c, &gamma).unwrap(), cat());
        let h = crystal_entropy(&g, &gamma, 1e-12).unwrap().value;
        assert!((h - 0.9624236501192069).abs() < 1e-9);
    }

    #[test]
    fn nonsplit_center_is_whole_group() {
        let g = nonsplit_z().group;
        let c = stabilizer_center(&g).unwrap();
        assert_eq!(c.free_rank(), 1);
        assert!(c.quotient.torsion_orders().is_empty());
        // the square root of the translation generates
        let (free, _) = c.coordinates(&g.lattice_element(vec![1]).unwrap()).unwrap();
        assert_eq!(free[0].abs(), 2);
        let neg = CrystalAutomorphism::from_named(&g, IntMatrix::from_i64(&[&[-1]]), &[], &[("f", vec![-1])])
            .unwrap();
        assert_eq!(induced_rho(&g, &c, &neg).unwrap(), IntMatrix::from_i64(&[&[-1]]));
        assert_eq!(crystal_entropy(&g, &neg, 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn infinite_dihedral_center() {
        let g = d_infinity().group;
        let c = stabilizer_center(&g).unwrap();
        assert_eq!(c.f0, vec![g.point_group().identity()]);
        assert_eq!(c.free_rank(), 1);
        for sign in [-1, 1] {
            for m in -3..=3 {
                let gamma = CrystalAutomorphism::from_named(&g, IntMatrix::from_i64(&[&[sign]]), &[], &[("f", vec![m])])
                    .unwrap();
                assert!(preserves_center(&g, &c, &gamma).unwrap());
                assert_eq!(crystal_entropy(&g, &gamma, 1e-12).unwrap().value, 0.0);
            }
        }
    }

    #[test]
    fn wallpaper_groups() {
        let g = p2().group;
        let c = stabilizer_center(&g).unwrap();
        let gamma = CrystalAutomorphism::from_named(&g, cat(), &[], &[("f", vec![1, 1])]).unwrap();
        assert_eq!(induced_rho(&g, &c, &gamma).unwrap(), cat());

        let g = pg().group;
        let c = stabilizer_center(&g).unwrap();
        assert_eq!(c.free_rank(), 2);
        let flip = CrystalAutomorphism::from_named(&g, IntMatrix::diag(&[-1, 1]), &[], &[("f", vec![-1, 0])]).unwrap();
        let rho = induced_rho(&g, &c, &flip).unwrap();
        assert_eq!(rho, IntMatrix::diag(&[-1, 1]));

        let g = p4().group;
        let c = stabilizer_center(&g).unwrap();
        let rot = g.action(g.point_group().index_of("r").unwrap()).clone();
        let gamma = CrystalAutomorphism::from_named(&g, rot, &[], &[]).unwrap();
        assert!(preserves_center(&g, &c, &gamma).unwrap());
        assert_eq!(crystal_entropy(&g, &gamma, 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn rho_is_functorial() {
        let g = z2_times_c2().group;
        let c = stabilizer_center(&g).unwrap();
        let a = CrystalAutomorphism::from_named(&g, cat(), &[], &[]).unwrap();
        let b = CrystalAutomorphism::from_named(&g, IntMatrix::from_i64(&[&[1, 3], &[0, 1]]), &[], &[]).unwrap();
        let ab = a.compose(&g, &b).unwrap();
        let lhs = induced_rho(&g, &c, &ab).unwrap();
        let rhs = &induced_rho(&g, &c, &a).unwrap() * &induced_rho(&g, &c, &b).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_product_matches_lattice_entropy() {
        let g = z_times_c2().group;
        let sigma = AbelianAutomorphism::from_lattice(FgAbelianGroup::new(1, vec![2]).unwrap(), IntMatrix::from_i64(&[&[-1]]))
            .unwrap();
        assert_eq!(theorem64_entropy(&sigma, 1e-12).unwrap().value, 0.0);
        let c = stabilizer_center(&g).unwrap();
        assert_eq!(c.quotient.torsion_orders(), &[2]);
    }
}
