//! Extensions `1 → ℤᵖ → G → F → 1` with `F` finite, given by a point-group
//! multiplication table, the conjugation action and a cocycle table.
//!
//! An element `(h, a)` stands for `φ(h)·a` with `φ` the fixed unital splitting
//! and `a ∈ ℤᵖ`. With `c(h)a = φ(h)⁻¹ a φ(h)` and
//! `φ(h₁)φ(h₂) = φ(h₁h₂)θ(h₁, h₂)` the product is
//!
//! ```text
//! (h₁, a₁)(h₂, a₂) = (h₁h₂, θ(h₁, h₂) + c(h₂)a₁ + a₂).
//! ```

mod canned;
mod center;
mod extension_rank;

pub use canned::{
    all as canned_groups, by_name as canned_group,
    d_infinity, nonsplit_z, p2, p4, pg, z2_times_c2, z_times_c2, CannedGroup,
};
pub use center::{
    center_generators_commute, crystal_entropy, induced_rho, preserves_center, stabilizer_center,
    theorem64_entropy, StabilizerCenter,
};
pub use extension_rank::{lemma511_bound_check, ExtensionRankCheck};

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::IntMatrix;

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    #[serde(skip)]
    identity: usize,
    #[serde(skip)]
    inverse: Vec<usize>,
}

pub const MAX_POINT_GROUP_ORDER: usize = 64;

impl PointGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_POINT_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!(
                "point group order {n} outside 1..={MAX_POINT_GROUP_ORDER}"
            )));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidGroup("point group names must be distinct".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("multiplication table must be n×n over the element list".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("multiplication table has no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let right: Vec<usize> = (0..n).filter(|&y| table[x][y] == identity).collect();
            match right.as_slice() {
                [y] if table[*y][x] == identity => inverse[x] = *y,
                _ => {
                    return Err(Error::InvalidGroup(format!(
                        "{} has no two-sided inverse",
                        names[x]
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(PointGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// `ℤ/n` with elements named `e0 .. e{n-1}`, or the supplied names.
    pub fn cyclic(names: &[&str]) -> Self {
        let n = names.len();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        PointGroup::new(names.iter().map(|s| s.to_string()).collect(), table)
            .expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// `(h, a)`: point-group index and lattice vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrystalElement {
    pub h: usize,
    pub lattice: Vec<i64>,
}

impl CrystalElement {
    pub fn new(h: usize, lattice: Vec<i64>) -> Self {
        CrystalElement { h, lattice }
    }
}

fn mat_vec(m: &[i64], p: usize, v: &[i64]) -> Result<Vec<i64>> {
    (0..p)
        .map(|i| {
            let s: i128 = (0..p).map(|j| m[i * p + j] as i128 * v[j] as i128).sum();
            i64::try_from(s).map_err(|_| Error::Overflow("crystal lattice arithmetic"))
        })
        .collect()
}

fn add_vec(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("crystal lattice arithmetic")))
        .collect()
}

fn neg_vec(a: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .map(|x| x.checked_neg().ok_or(Error::Overflow("crystal lattice arithmetic")))
        .collect()
}

/// Extension of the finite group `F` by `ℤᵖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalGroup {
    rank: usize,
    point: PointGroup,
    action: Vec<IntMatrix>,
    action_flat: Vec<Vec<i64>>,
    cocycle: Vec<Vec<Vec<i64>>>,
}

impl CrystalGroup {
    /// `action[h]` is `c(h)`; `cocycle[h][k]` is `θ(h, k)`.
    pub fn new(
        rank: usize,
        point: PointGroup,
        action: Vec<IntMatrix>,
        cocycle: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let n = point.order();
        if action.len() != n {
            return Err(Error::InvalidGroup("one action matrix per point-group element".into()));
        }
        for (h, m) in action.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::InvalidGroup(format!(
                    "action of {} is not {rank}×{rank}",
                    point.name(h)
                )));
            }
            if !m.is_unimodular() {
                return Err(Error::InvalidGroup(format!(
                    "action of {} is not unimodular",
                    point.name(h)
                )));
            }
        }
        if !action[point.identity()].is_identity() {
            return Err(Error::InvalidGroup("the identity must act trivially".into()));
        }
        for h in 0..n {
            for k in 0..n {
                // c(hk) = c(k)c(h)
                if action[point.mul(h, k)] != &action[k] * &action[h] {
                    return Err(Error::InvalidGroup(format!(
                        "action is not compatible with the product {}·{}",
                        point.name(h),
                        point.name(k)
                    )));
                }
            }
        }
        if cocycle.len() != n
            || cocycle.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != rank))
        {
            return Err(Error::InvalidGroup("cocycle table must be n×n vectors of length p".into()));
        }
        let e = point.identity();
        for h in 0..n {
            if cocycle[e][h].iter().any(|&x| x != 0) || cocycle[h][e].iter().any(|&x| x != 0) {
                return Err(Error::InvalidGroup(format!(
                    "cocycle is not unital at {}",
                    point.name(h)
                )));
            }
        }
        let action_flat = action
            .iter()
            .map(|m| {
                m.to_i64_rows()
                    .map(|rows| rows.concat())
                    .ok_or(Error::Overflow("action matrix entries"))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = CrystalGroup {
            rank,
            point,
            action,
            action_flat,
            cocycle,
        };
        g.check_associativity()?;
        Ok(g)
    }

    /// Builds from element names; missing cocycle entries are zero and missing
    /// action entries are the identity matrix.
    pub fn from_named(
        rank: usize,
        point: PointGroup,
        action: &[(&str, IntMatrix)],
        cocycle: &[(&str, &str, Vec<i64>)],
    ) -> Result<Self> {
        let n = point.order();
        let find = |name: &str| {
            point
                .index_of(name)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown point-group element {name:?}")))
        };
        let mut mats = vec![IntMatrix::identity(rank); n];
        for (name, m) in action {
            mats[find(name)?] = m.clone();
        }
        let mut theta = vec![vec![vec![0i64; rank]; n]; n];
        for (h, k, v) in cocycle {
            theta[find(h)?][find(k)?] = v.clone();
        }
        CrystalGroup::new(rank, point, mats, theta)
    }

    fn check_associativity(&self) -> Result<()> {
        let samples = self.sample_elements();
        let bad = samples.par_iter().find_map_first(|x| {
            for y in &samples {
                let xy = match self.multiply(x, y) {
                    Ok(v) => v,
                    Err(e) => return Some(Err(e)),
                };
                for z in &samples {
                    let left = self.multiply(&xy, z);
                    let right = self.multiply(y, z).and_then(|yz| self.multiply(x, &yz));
                    match (left, right) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (Err(e), _) | (_, Err(e)) => return Some(Err(e)),
                        _ => return Some(Ok((x.clone(), y.clone(), z.clone()))),
                    }
                }
            }
            None
        });
        match bad {
            None => Ok(()),
            Some(Err(e)) => Err(e),
            Some(Ok((x, y, z))) => Err(Error::InvalidGroup(format!(
                "cocycle fails associativity on ({}, {}, {})",
                self.describe(&x),
                self.describe(&y),
                self.describe(&z)
            ))),
        }
    }

    /// `F × {0, e₁, …, e_p}`.
    pub fn sample_elements(&self) -> Vec<CrystalElement> {
        let p = self.rank;
        let mut out = Vec::with_capacity(self.order() * (p + 1));
        for h in 0..self.order() {
            out.push(CrystalElement::new(h, vec![0; p]));
            for i in 0..p {
                let mut v = vec![0; p];
                v[i] = 1;
                out.push(CrystalElement::new(h, v));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn point_group(&self) -> &PointGroup {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.point.order()
    }

    pub fn action(&self, h: usize) -> &IntMatrix {
        &self.action[h]
    }

    pub fn cocycle(&self, h: usize, k: usize) -> &[i64] {
        &self.cocycle[h][k]
    }

    pub fn act(&self, h: usize, v: &[i64]) -> Result<Vec<i64>> {
        mat_vec(&self.action_flat[h], self.rank, v)
    }

    pub fn identity(&self) -> CrystalElement {
        CrystalElement::new(self.point.identity(), vec![0; self.rank])
    }

    pub fn lattice_element(&self, v: Vec<i64>) -> Result<CrystalElement> {
        let x = CrystalElement::new(self.point.identity(), v);
        self.check(&x)?;
        Ok(x)
    }

    pub fn element(&self, name: &str, lattice: Vec<i64>) -> Result<CrystalElement> {
        let h = self
            .point
            .index_of(name)
            .ok_or_else(|| Error::InvalidGroup(format!("unknown point-group element {name:?}")))?;
        let x = CrystalElement::new(h, lattice);
        self.check(&x)?;
        Ok(x)
    }

    pub fn check(&self, x: &CrystalElement) -> Result<()> {
        if x.h >= self.order() || x.lattice.len() != self.rank {
            return Err(Error::Shape(format!("{x:?} is not an element of this group")));
        }
        Ok(())
    }

    pub fn multiply(&self, x: &CrystalElement, y: &CrystalElement) -> Result<CrystalElement> {
        self.check(x)?;
        self.check(y)?;
        let h = self.point.mul(x.h, y.h);
        let moved = self.act(y.h, &x.lattice)?;
        let lattice = add_vec(&add_vec(&self.cocycle[x.h][y.h], &moved)?, &y.lattice)?;
        Ok(CrystalElement { h, lattice })
    }

    pub fn inverse(&self, x: &CrystalElement) -> Result<CrystalElement> {
        self.check(x)?;
        let hi = self.point.inv(x.h);
        // (h, a)(h⁻¹, b) = (1, θ(h, h⁻¹) + c(h⁻¹)a + b)
        let moved = self.act(hi, &x.lattice)?;
        let lattice = neg_vec(&add_vec(&self.cocycle[x.h][hi], &moved)?)?;
        Ok(CrystalElement { h: hi, lattice })
    }

    pub fn pow(&self, x: &CrystalElement, k: i64) -> Result<CrystalElement> {
        let mut base = if k < 0 { self.inverse(x)? } else { x.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            base = self.multiply(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `(name, [a₁, …])`.
    pub fn describe(&self, x: &CrystalElement) -> String {
        let name = self.point.names.get(x.h).map(String::as_str).unwrap_or("?");
        format!("({name}, {:?})", x.lattice)
    }

    /// Elements `(h, a)` with `h ∈ F` and `a` in the sup-norm ball of radius `r`.
    pub fn ball(&self, r: i64) -> Vec<CrystalElement> {
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
        let mut out: Vec<CrystalElement> = (0..self.order())
            .flat_map(|h| lattices.iter().map(move |l| CrystalElement::new(h, l.clone())))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for CrystalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{} by a point group of order {}", self.rank, self.order())
    }
}

/// `(h, a) ↦ (γ̇(h), t(h) + σa)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalAutomorphism {
    quotient: Vec<usize>,
    sigma: IntMatrix,
    sigma_flat: Vec<i64>,
    translation: Vec<Vec<i64>>,
}

impl CrystalAutomorphism {
    /// Validates bijectivity of `γ̇`, unimodularity of `σ` and the homomorphism
    /// identity on `F × {0, e₁, …, e_p}`.
    pub fn new(
        group: &CrystalGroup,
        quotient: Vec<usize>,
        sigma: IntMatrix,
        translation: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = group.order();
        let p = group.rank();
        if quotient.len() != n || quotient.iter().any(|&h| h >= n) {
            return Err(Error::InvalidAutomorphism("quotient map must send F into F".into()));
        }
        let mut hit = vec![false; n];
        for &h in &quotient {
            if std::mem::replace(&mut hit[h], true) {
                return Err(Error::InvalidAutomorphism("quotient map is not a bijection".into()));
            }
        }
        if sigma.rows() != p || sigma.cols() != p {
            return Err(Error::InvalidAutomorphism(format!("lattice part must be {p}×{p}")));
        }
        if !sigma.is_unimodular() {
            return Err(Error::NotUnimodular {
                det: sigma.det()?.to_string(),
            });
        }
        if translation.len() != n || translation.iter().any(|v| v.len() != p) {
            return Err(Error::InvalidAutomorphism("one translation vector per point-group element".into()));
        }
        let sigma_flat = sigma
            .to_i64_rows()
            .map(|r| r.concat())
            .ok_or(Error::Overflow("automorphism entries"))?;
        let gamma = CrystalAutomorphism {
            quotient,
            sigma,
            sigma_flat,
            translation,
        };
        let samples = group.sample_elements();
        for x in &samples {
            for y in &samples {
                let lhs = gamma.apply(group, &group.multiply(x, y)?)?;
                let rhs = group.multiply(&gamma.apply(group, x)?, &gamma.apply(group, y)?)?;
                if lhs != rhs {
                    return Err(Error::InvalidAutomorphism(format!(
                        "not a homomorphism on {} · {}",
                        group.describe(x),
                        group.describe(y)
                    )));
                }
            }
        }
        Ok(gamma)
    }

    /// From names: `quotient` lists `(h, γ̇(h))` pairs (identity by default),
    /// `translation` lists `(h, t(h))` (zero by default).
    pub fn from_named(
        group: &CrystalGroup,
        sigma: IntMatrix,
        quotient: &[(&str, &str)],
        translation: &[(&str, Vec<i64>)],
    ) -> Result<Self> {
        let find = |name: &str| {
            group
                .point_group()
                .index_of(name)
                .ok_or_else(|| Error::InvalidAutomorphism(format!("unknown point-group element {name:?}")))
        };
        let mut q: Vec<usize> = (0..group.order()).collect();
        for (a, b) in quotient {
            q[find(a)?] = find(b)?;
        }
        let mut t = vec![vec![0; group.rank()]; group.order()];
        for (a, v) in translation {
            t[find(a)?] = v.clone();
        }
        CrystalAutomorphism::new(group, q, sigma, t)
    }

    pub fn identity(group: &CrystalGroup) -> Self {
        CrystalAutomorphism::new(
            group,
            (0..group.order()).collect(),
            IntMatrix::identity(group.rank()),
            vec![vec![0; group.rank()]; group.order()],
        )
        .expect("identity is an automorphism")
    }

    pub fn quotient_map(&self) -> &[usize] {
        &self.quotient
    }

    pub fn lattice_part(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn translation(&self, h: usize) -> &[i64] {
        &self.translation[h]
    }

    pub fn apply(&self, group: &CrystalGroup, x: &CrystalElement) -> Result<CrystalElement> {
        group.check(x)?;
        if self.quotient.len() != group.order() {
            return Err(Error::Shape("automorphism of a different group".into()));
        }
        let moved = mat_vec(&self.sigma_flat, group.rank(), &x.lattice)?;
        Ok(CrystalElement {
            h: self.quotient[x.h],
            lattice: add_vec(&self.translation[x.h], &moved)?,
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, group: &CrystalGroup, other: &CrystalAutomorphism) -> Result<Self> {
        let n = group.order();
        let p = group.rank();
        let quotient: Vec<usize> = (0..n).map(|h| self.quotient[other.quotient[h]]).collect();
        let sigma = self.sigma.checked_mul(&other.sigma)?;
        // t(h) = t₁(γ̇₂h) + σ₁t₂(h)
        let translation = (0..n)
            .map(|h| {
                add_vec(
                    &self.translation[other.quotient[h]],
                    &mat_vec(&self.sigma_flat, p, &other.translation[h])?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        CrystalAutomorphism::new(group, quotient, sigma, translation)
    }

    pub fn inverse(&self, group: &CrystalGroup) -> Result<Self> {
        let n = group.order();
        let p = group.rank();
        let mut quotient = vec![0; n];
        for (h, &g) in self.quotient.iter().enumerate() {
            quotient[g] = h;
        }
        let sigma = self.sigma.inverse()?;
        let sigma_inv = sigma
            .to_i64_rows()
            .map(|r| r.concat())
            .ok_or(Error::Overflow("automorphism entries"))?;
        // t'(h) = −σ⁻¹ t(γ̇⁻¹h)
        let translation = (0..n)
            .map(|h| neg_vec(&mat_vec(&sigma_inv, p, &self.translation[quotient[h]])?))
            .collect::<Result<Vec<_>>>()?;
        CrystalAutomorphism::new(group, quotient, sigma, translation)
    }

    pub fn pow(&self, group: &CrystalGroup, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.inverse(group)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CrystalAutomorphism::identity(group);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(group, &base)?;
            }
            base = base.compose(group, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}
