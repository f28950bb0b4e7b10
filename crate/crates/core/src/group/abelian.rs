use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::group::IntMatrix;

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion_orders: Vec<i64>,
}

/// Element of an [`FgAbelianGroup`]: lattice coordinates followed by torsion
/// coordinates, the latter always reduced into `[0, dᵢ)`.
///
/// Ordering is lexicographic on `(lattice, torsion)`; that order is the
/// canonical order used wherever the crate needs a deterministic listing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    rank: usize,
    coords: SmallVec<[i64; 4]>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion_orders: Vec<i64>) -> Result<Self> {
        if let Some(d) = torsion_orders.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!(
                "torsion order {d} is not at least 2"
            )));
        }
        Ok(FgAbelianGroup {
            rank,
            torsion_orders,
        })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion_orders: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion_orders
    }

    pub fn torsion_len(&self) -> usize {
        self.torsion_orders.len()
    }

    /// |F|, the order of the torsion subgroup.
    pub fn torsion_size(&self) -> u64 {
        self.torsion_orders.iter().map(|&d| d as u64).product()
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement {
            rank: self.rank,
            coords: SmallVec::from_elem(0, self.rank + self.torsion_len()),
        }
    }

    /// Builds an element, reducing torsion components.
    pub fn element(&self, lattice: &[i64], torsion: &[i64]) -> Result<AbelianElement> {
        if lattice.len() != self.rank || torsion.len() != self.torsion_len() {
            return Err(Error::Shape(format!(
                "element with {} lattice and {} torsion coordinates in a group of rank {} with {} torsion factors",
                lattice.len(),
                torsion.len(),
                self.rank,
                self.torsion_len()
            )));
        }
        let mut coords: SmallVec<[i64; 4]> = SmallVec::with_capacity(lattice.len() + torsion.len());
        coords.extend_from_slice(lattice);
        coords.extend(
            torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&t, &d)| t.rem_euclid(d)),
        );
        Ok(AbelianElement {
            rank: self.rank,
            coords,
        })
    }

    /// Flat coordinates: `rank` lattice entries, optionally followed by the torsion entries.
    pub fn element_from_flat(&self, flat: &[i64]) -> Result<AbelianElement> {
        if flat.len() == self.rank {
            let zeros = vec![0; self.torsion_len()];
            self.element(flat, &zeros)
        } else if flat.len() == self.rank + self.torsion_len() {
            self.element(&flat[..self.rank], &flat[self.rank..])
        } else {
            Err(Error::Shape(format!(
                "element has {} coordinates; expected {} or {}",
                flat.len(),
                self.rank,
                self.rank + self.torsion_len()
            )))
        }
    }

    /// Lattice basis vector `e_i` (torsion zero).
    pub fn basis(&self, i: usize) -> AbelianElement {
        let mut z = self.zero();
        z.coords[i] = 1;
        z
    }

    /// Generator of the i-th torsion factor.
    pub fn torsion_generator(&self, i: usize) -> AbelianElement {
        let mut z = self.zero();
        z.coords[self.rank + i] = 1 % self.torsion_orders[i];
        z
    }

    pub fn contains(&self, x: &AbelianElement) -> bool {
        x.rank == self.rank
            && x.coords.len() == self.rank + self.torsion_len()
            && x.torsion()
                .iter()
                .zip(&self.torsion_orders)
                .all(|(&t, &d)| (0..d).contains(&t))
    }

    fn check(&self, x: &AbelianElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Shape(format!("{x:?} is not an element of {self}")))
        }
    }

    pub fn add(&self, a: &AbelianElement, b: &AbelianElement) -> Result<AbelianElement> {
        self.check(a)?;
        self.check(b)?;
        self.add_unchecked(a, b)
    }

    pub(crate) fn add_unchecked(
        &self,
        a: &AbelianElement,
        b: &AbelianElement,
    ) -> Result<AbelianElement> {
        let mut coords = a.coords.clone();
        for i in 0..self.rank {
            coords[i] = coords[i]
                .checked_add(b.coords[i])
                .ok_or(Error::Overflow("adding group elements"))?;
        }
        for (k, &d) in self.torsion_orders.iter().enumerate() {
            let i = self.rank + k;
            coords[i] = (coords[i] + b.coords[i]) % d;
        }
        Ok(AbelianElement {
            rank: self.rank,
            coords,
        })
    }

    pub fn neg(&self, a: &AbelianElement) -> Result<AbelianElement> {
        self.check(a)?;
        let mut coords = a.coords.clone();
        for i in 0..self.rank {
            coords[i] = coords[i]
                .checked_neg()
                .ok_or(Error::Overflow("negating a group element"))?;
        }
        for (k, &d) in self.torsion_orders.iter().enumerate() {
            let i = self.rank + k;
            coords[i] = (d - coords[i]) % d;
        }
        Ok(AbelianElement {
            rank: self.rank,
            coords,
        })
    }

    pub fn sub(&self, a: &AbelianElement, b: &AbelianElement) -> Result<AbelianElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `k·a`.
    pub fn scale(&self, a: &AbelianElement, k: i64) -> Result<AbelianElement> {
        self.check(a)?;
        let mut coords = a.coords.clone();
        for i in 0..self.rank {
            coords[i] = coords[i]
                .checked_mul(k)
                .ok_or(Error::Overflow("scaling a group element"))?;
        }
        for (j, &d) in self.torsion_orders.iter().enumerate() {
            let i = self.rank + j;
            coords[i] = ((coords[i] as i128 * k as i128).rem_euclid(d as i128)) as i64;
        }
        Ok(AbelianElement {
            rank: self.rank,
            coords,
        })
    }

    /// Every torsion tuple, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.torsion_orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |t| {
                        let mut v = prefix.clone();
                        v.push(t);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Sup-norm ball of radius `r` in the lattice coordinates, times the whole
    /// torsion subgroup, sorted canonically.
    pub fn ball(&self, r: i64) -> Vec<AbelianElement> {
        let side: Vec<i64> = (-r..=r).collect();
        let mut lattices: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..self.rank {
            lattices = lattices
                .into_iter()
                .flat_map(|prefix| {
                    side.iter().map(move |&x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        let torsion = self.torsion_elements();
        let mut out = Vec::with_capacity(lattices.len() * torsion.len());
        for l in &lattices {
            for t in &torsion {
                out.push(self.element(l, t).expect("ball element shape"));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for d in &self.torsion_orders {
            write!(f, " + Z/{d}")?;
        }
        Ok(())
    }
}

impl AbelianElement {
    pub fn lattice(&self) -> &[i64] {
        &self.coords[..self.rank]
    }

    pub fn torsion(&self) -> &[i64] {
        &self.coords[self.rank..]
    }

    /// Lattice coordinates followed by torsion coordinates.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Sup-norm of the lattice part.
    pub fn lattice_norm(&self) -> i64 {
        self.lattice().iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Fixed-width big-endian encoding whose byte order agrees with `Ord`.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * self.coords.len());
        for &c in &self.coords {
            out.extend_from_slice(&((c as u64) ^ (1 << 63)).to_be_bytes());
        }
        out
    }
}

impl fmt::Debug for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.lattice())?;
        if !self.torsion().is_empty() {
            write!(f, ";{:?}", self.torsion())?;
        }
        Ok(())
    }
}

impl Serialize for AbelianElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.as_slice().serialize(s)
    }
}

/// Automorphism of `ℤᵖ ⊕ F`.
///
/// `(x; t) ↦ (M·x; T·t + X·x)` where `M` is the lattice part, `T` the torsion
/// part (column j is the image of the j-th torsion generator) and `X` the
/// mixing part (column j is the torsion component of the image of `e_j`).
/// Row i of `T` and `X` is kept reduced mod `dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianAutomorphism {
    group: FgAbelianGroup,
    lattice_part: IntMatrix,
    torsion_part: IntMatrix,
    mixing_part: IntMatrix,
    lattice_i64: Vec<i64>,
    torsion_i64: Vec<i64>,
    mixing_i64: Vec<i64>,
}

impl AbelianAutomorphism {
    /// Validates eagerly: unimodular lattice part, well-defined and bijective
    /// torsion part, additivity on basis pairs.
    pub fn new(
        group: FgAbelianGroup,
        lattice_part: IntMatrix,
        torsion_part: IntMatrix,
        mixing_part: IntMatrix,
    ) -> Result<Self> {
        let p = group.rank();
        let t = group.torsion_len();
        if lattice_part.rows() != p || lattice_part.cols() != p {
            return Err(Error::Shape(format!(
                "lattice part must be {p}x{p}, got {}x{}",
                lattice_part.rows(),
                lattice_part.cols()
            )));
        }
        if torsion_part.rows() != t || torsion_part.cols() != t {
            return Err(Error::Shape(format!(
                "torsion part must be {t}x{t}, got {}x{}",
                torsion_part.rows(),
                torsion_part.cols()
            )));
        }
        if mixing_part.rows() != t || mixing_part.cols() != p {
            return Err(Error::Shape(format!(
                "mixing part must be {t}x{p}, got {}x{}",
                mixing_part.rows(),
                mixing_part.cols()
            )));
        }
        let det = lattice_part.det()?;
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        let torsion_part = reduce_rows(&torsion_part, group.torsion_orders());
        let mixing_part = reduce_rows(&mixing_part, group.torsion_orders());
        let lattice_i64 = to_i64(&lattice_part, "lattice part")?;
        let torsion_i64 = to_i64(&torsion_part, "torsion part")?;
        let mixing_i64 = to_i64(&mixing_part, "mixing part")?;
        let auto = AbelianAutomorphism {
            group,
            lattice_part,
            torsion_part,
            mixing_part,
            lattice_i64,
            torsion_i64,
            mixing_i64,
        };
        auto.validate_torsion()?;
        auto.validate_additivity()?;
        Ok(auto)
    }

    /// Lattice-only automorphism; identity on torsion, no mixing.
    pub fn from_lattice(group: FgAbelianGroup, lattice_part: IntMatrix) -> Result<Self> {
        let t = group.torsion_len();
        let p = group.rank();
        Self::new(
            group,
            lattice_part,
            IntMatrix::identity(t),
            IntMatrix::zeros(t, p),
        )
    }

    /// Automorphism of `ℤᵖ` given by a unimodular matrix.
    pub fn of_matrix(m: &IntMatrix) -> Result<Self> {
        Self::from_lattice(FgAbelianGroup::free(m.rows()), m.clone())
    }

    pub fn identity(group: &FgAbelianGroup) -> Self {
        Self::from_lattice(group.clone(), IntMatrix::identity(group.rank()))
            .expect("identity automorphism is valid")
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn lattice_part(&self) -> &IntMatrix {
        &self.lattice_part
    }

    pub fn torsion_part(&self) -> &IntMatrix {
        &self.torsion_part
    }

    pub fn mixing_part(&self) -> &IntMatrix {
        &self.mixing_part
    }

    fn validate_torsion(&self) -> Result<()> {
        let orders = self.group.torsion_orders();
        let t = orders.len();
        // T must send the generator of Z/d_j to an element of order dividing d_j.
        for j in 0..t {
            for i in 0..t {
                let v = self.torsion_i64[i * t + j] as i128 * orders[j] as i128;
                if v.rem_euclid(orders[i] as i128) != 0 {
                    return Err(Error::InvalidAutomorphism(format!(
                        "torsion image of generator {j} has order not dividing {}",
                        orders[j]
                    )));
                }
            }
        }
        let elements = self.group.torsion_elements();
        let mut images: Vec<Vec<i64>> = elements.iter().map(|x| self.map_torsion(x)).collect();
        images.sort();
        images.dedup();
        if images.len() != elements.len() {
            return Err(Error::InvalidAutomorphism(
                "torsion part is not a bijection".into(),
            ));
        }
        Ok(())
    }

    fn validate_additivity(&self) -> Result<()> {
        let g = &self.group;
        let mut gens: Vec<AbelianElement> = (0..g.rank()).map(|i| g.basis(i)).collect();
        gens.extend((0..g.torsion_len()).map(|i| g.torsion_generator(i)));
        gens.push(g.zero());
        for a in &gens {
            for b in &gens {
                let lhs = self.apply(&g.add(a, b)?)?;
                let rhs = g.add(&self.apply(a)?, &self.apply(b)?)?;
                if lhs != rhs {
                    return Err(Error::InvalidAutomorphism(format!(
                        "not additive on {a:?}, {b:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn map_torsion(&self, tors: &[i64]) -> Vec<i64> {
        let orders = self.group.torsion_orders();
        let t = orders.len();
        (0..t)
            .map(|i| {
                let mut acc: i128 = 0;
                for (j, &x) in tors.iter().enumerate() {
                    acc += self.torsion_i64[i * t + j] as i128 * x as i128;
                }
                acc.rem_euclid(orders[i] as i128) as i64
            })
            .collect()
    }

    /// `γ(x)`.
    pub fn apply(&self, x: &AbelianElement) -> Result<AbelianElement> {
        if !self.group.contains(x) {
            return Err(Error::Shape(format!(
                "{x:?} is not an element of {}",
                self.group
            )));
        }
        self.apply_unchecked(x)
    }

    pub(crate) fn apply_unchecked(&self, x: &AbelianElement) -> Result<AbelianElement> {
        let p = self.group.rank();
        let orders = self.group.torsion_orders();
        let t = orders.len();
        let lat = x.lattice();
        let tor = x.torsion();
        let mut coords: SmallVec<[i64; 4]> = SmallVec::with_capacity(p + t);
        for i in 0..p {
            let mut acc: i128 = 0;
            for j in 0..p {
                acc += self.lattice_i64[i * p + j] as i128 * lat[j] as i128;
            }
            coords.push(
                i64::try_from(acc).map_err(|_| Error::Overflow("applying an automorphism"))?,
            );
        }
        for i in 0..t {
            let d = orders[i] as i128;
            let mut acc: i128 = 0;
            for j in 0..t {
                acc += self.torsion_i64[i * t + j] as i128 * tor[j] as i128;
            }
            for j in 0..p {
                acc += (self.mixing_i64[i * p + j] as i128 * lat[j] as i128).rem_euclid(d);
            }
            coords.push(acc.rem_euclid(d) as i64);
        }
        Ok(AbelianElement { rank: p, coords })
    }

    /// `γ₁ ∘ γ₂`.
    pub fn compose(&self, other: &AbelianAutomorphism) -> Result<AbelianAutomorphism> {
        if self.group != other.group {
            return Err(Error::Shape("composing automorphisms of different groups".into()));
        }
        let lattice = self.lattice_part.checked_mul(&other.lattice_part)?;
        let torsion = self.torsion_part.checked_mul(&other.torsion_part)?;
        let mix_a = self.torsion_part.checked_mul(&other.mixing_part)?;
        let mix_b = self.mixing_part.checked_mul(&other.lattice_part)?;
        let mut mixing = IntMatrix::zeros(mix_a.rows(), mix_a.cols());
        for i in 0..mix_a.rows() {
            for j in 0..mix_a.cols() {
                mixing.set(i, j, mix_a.get(i, j) + mix_b.get(i, j));
            }
        }
        AbelianAutomorphism::new(self.group.clone(), lattice, torsion, mixing)
    }

    pub fn invert(&self) -> Result<AbelianAutomorphism> {
        let lattice_inv = self.lattice_part.inverse()?;
        let g = &self.group;
        let t = g.torsion_len();
        let p = g.rank();
        // preimages of the torsion generators, found by exhaustion over F
        let elements = g.torsion_elements();
        let mut torsion_inv = IntMatrix::zeros(t, t);
        for j in 0..t {
            let target: Vec<i64> = (0..t).map(|i| i64::from(i == j) % g.torsion_orders()[i]).collect();
            let pre = elements
                .iter()
                .find(|x| self.map_torsion(x) == target)
                .ok_or_else(|| Error::Internal("torsion part lost bijectivity".into()))?;
            for i in 0..t {
                torsion_inv.set(i, j, BigInt::from(pre[i]));
            }
        }
        // X' = -T⁻¹·X·M⁻¹
        let mut mixing = torsion_inv
            .checked_mul(&self.mixing_part)?
            .checked_mul(&lattice_inv)?;
        for i in 0..t {
            for j in 0..p {
                let v = -mixing.get(i, j).clone();
                mixing.set(i, j, v);
            }
        }
        AbelianAutomorphism::new(g.clone(), lattice_inv, torsion_inv, mixing)
    }

    pub fn pow(&self, k: i64) -> Result<AbelianAutomorphism> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut acc = AbelianAutomorphism::identity(&self.group);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        *self == AbelianAutomorphism::identity(&self.group)
    }

    /// Conjugates by a unimodular change of lattice basis `S`: returns `S γ S⁻¹`
    /// (lattice-only; requires a torsion-free group).
    pub fn conjugate_lattice(&self, s: &IntMatrix) -> Result<AbelianAutomorphism> {
        if self.group.torsion_len() != 0 {
            return Err(Error::Shape(
                "lattice conjugation is only defined here for torsion-free groups".into(),
            ));
        }
        let s_inv = s.inverse()?;
        let m = s.checked_mul(&self.lattice_part)?.checked_mul(&s_inv)?;
        AbelianAutomorphism::from_lattice(self.group.clone(), m)
    }
}

fn reduce_rows(m: &IntMatrix, orders: &[i64]) -> IntMatrix {
    let mut out = m.clone();
    for (i, &d) in orders.iter().enumerate() {
        let d = BigInt::from(d);
        for j in 0..m.cols() {
            let v = num_integer::Integer::mod_floor(m.get(i, j), &d);
            out.set(i, j, v);
        }
    }
    out
}

fn to_i64(m: &IntMatrix, what: &'static str) -> Result<Vec<i64>> {
    m.entries()
        .iter()
        .map(|v| v.to_i64().ok_or(Error::Overflow(what)))
        .collect()
}

impl Serialize for AbelianAutomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianAutomorphism", 3)?;
        st.serialize_field("lattice", &self.lattice_part)?;
        st.serialize_field("torsion", &self.torsion_part)?;
        st.serialize_field("mixing", &self.mixing_part)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FgAbelianGroup {
        FgAbelianGroup::free(2)
    }

    #[test]
    fn add_examples() {
        let g = z2();
        let a = g.element(&[1, 0], &[]).unwrap();
        let b = g.element(&[0, 1], &[]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.element(&[1, 1], &[]).unwrap());
        assert_eq!(g.add(&a, &g.neg(&a).unwrap()).unwrap(), g.zero());

        let h = FgAbelianGroup::new(1, vec![2]).unwrap();
        let x = h.element(&[1], &[1]).unwrap();
        let y = h.element(&[0], &[1]).unwrap();
        assert_eq!(h.add(&x, &y).unwrap(), h.element(&[1], &[0]).unwrap());
    }

    #[test]
    fn mismatched_shapes_rejected() {
        let g = z2();
        let h = FgAbelianGroup::new(1, vec![2]).unwrap();
        let a = g.element(&[1, 0], &[]).unwrap();
        let b = h.element(&[1], &[1]).unwrap();
        assert!(matches!(g.add(&a, &b), Err(Error::Shape(_))));
        assert!(FgAbelianGroup::new(1, vec![1]).is_err());
    }

    #[test]
    fn cat_map_application() {
        let cat = AbelianAutomorphism::of_matrix(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let g = z2();
        let e1 = g.basis(0);
        assert_eq!(cat.apply(&e1).unwrap(), g.element(&[2, 1], &[]).unwrap());
        let inv = cat.invert().unwrap();
        assert_eq!(
            inv.lattice_part(),
            &IntMatrix::from_i64(&[&[1, -1], &[-1, 2]])
        );
        let x = g.element(&[5, -3], &[]).unwrap();
        assert_eq!(cat.apply(&inv.apply(&x).unwrap()).unwrap(), x);
        assert_eq!(inv.invert().unwrap(), cat);
        assert!(cat.compose(&inv).unwrap().is_identity());
        assert_eq!(cat.compose(&AbelianAutomorphism::identity(&g)).unwrap(), cat);
    }

    #[test]
    fn torsion_swap_with_mixing_inverts() {
        let g = FgAbelianGroup::new(1, vec![2, 2]).unwrap();
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let mixing = IntMatrix::from_rows(&[vec![1], vec![0]]).unwrap();
        let a = AbelianAutomorphism::new(g.clone(), IntMatrix::from_i64(&[&[-1]]), swap, mixing)
            .unwrap();
        let inv = a.invert().unwrap();
        assert!(a.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&a).unwrap().is_identity());
        for x in g.ball(2) {
            assert_eq!(inv.apply(&a.apply(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn non_bijective_torsion_rejected() {
        let g = FgAbelianGroup::new(0, vec![4]).unwrap();
        let doubling = IntMatrix::from_i64(&[&[2]]);
        let err = AbelianAutomorphism::new(g, IntMatrix::zeros(0, 0), doubling, IntMatrix::zeros(1, 0));
        assert!(matches!(err, Err(Error::InvalidAutomorphism(_))));
    }

    #[test]
    fn ill_defined_torsion_rejected() {
        // Z/2 -> Z/4 generator to 1 is not a homomorphism
        let g = FgAbelianGroup::new(0, vec![2, 4]).unwrap();
        let m = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        let err = AbelianAutomorphism::new(g, IntMatrix::zeros(0, 0), m, IntMatrix::zeros(2, 0));
        assert!(matches!(err, Err(Error::InvalidAutomorphism(_))));
    }

    #[test]
    fn non_unimodular_rejected() {
        let err = AbelianAutomorphism::of_matrix(&IntMatrix::diag(&[2, 1]));
        assert!(matches!(err, Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn ball_is_sorted_and_sized() {
        let g = FgAbelianGroup::new(2, vec![3]).unwrap();
        let b = g.ball(1);
        assert_eq!(b.len(), 27);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        let bytes: Vec<Vec<u8>> = b.iter().map(|x| x.canonical_bytes()).collect();
        assert!(bytes.windows(2).all(|w| w[0] < w[1]));
    }
}
