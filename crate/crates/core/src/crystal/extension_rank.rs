//! Rank of an extension against the ranks of its quotient and kernel.
//!
//! Writing `ω = {(φ(hᵢ)kᵢ)⁻¹}` and taking `T` minimal for `(π(ω), δ)` on `F`
//! with support `S`, the bound reads
//!
//! ```text
//! ra(ω, 2δ) ≤ ra(π(ω), δ) · ra(W, δ),
//! W = ⋃ᵢ ⋃_{x ∈ hᵢ⁻¹S} φ(x)⁻¹ kᵢ⁻¹ φ(x) θ(hᵢ, x)⁻¹ ⊂ ℤᵖ.
//! ```

use serde::Serialize;

use super::{CrystalElement, CrystalGroup};
use crate::error::{Error, Result};
use crate::folner::{min_rank_bruteforce_with, min_rank_search, LpMode, SearchSpace};
use crate::group::{AbelianElement, FgAbelianGroup};

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionRankCheck {
    pub delta: f64,
    pub radius: i64,
    /// `ra(ω, 2δ)` inside the window `F × [−R, R]ᵖ`, if some support of size at
    /// most `quotient_rank · kernel_rank` reaches it there.
    pub lhs: Option<usize>,
    pub quotient_rank: usize,
    /// Point-group names of the support of the minimal quotient function.
    pub quotient_support: Vec<String>,
    pub kernel_set: Vec<Vec<i64>>,
    pub kernel_rank: usize,
    pub rhs: usize,
    /// `lhs ≤ rhs` was witnessed. `false` only means no witness exists in the window.
    pub holds: bool,
}

pub fn lemma511_bound_check(
    group: &CrystalGroup,
    omega: &[CrystalElement],
    delta: f64,
    radius: i64,
) -> Result<ExtensionRankCheck> {
    if radius < 1 {
        return Err(Error::Invalid("search radius must be at least 1".into()));
    }
    for s in omega {
        group.check(s)?;
    }
    let pg = group.point_group();
    let n = pg.order();
    let p = group.rank();

    // s = (φ(h)k)⁻¹, so (h, k) = s⁻¹.
    let pairs = omega
        .iter()
        .map(|s| group.inverse(s))
        .collect::<Result<Vec<_>>>()?;

    let quotient_omega: Vec<usize> = pairs.iter().map(|x| pg.inv(x.h)).collect();
    let quotient_space = SearchSpace::new(
        (0..n).collect(),
        pg.identity(),
        &quotient_omega,
        |a: &usize, b: &usize| Ok(pg.mul(*a, *b)),
        |a: &usize| Ok(pg.inv(*a)),
    )?;
    let quotient = min_rank_search(&quotient_space, delta, n, LpMode::Auto)?
        .ok_or_else(|| Error::Internal("the uniform function on a finite group has defect 0".into()))?;

    let mut kernel_set: Vec<Vec<i64>> = Vec::new();
    for x in &pairs {
        let hi = pg.inv(x.h);
        for &f in &quotient.support {
            let y = pg.mul(hi, f);
            // φ(y)⁻¹ k⁻¹ φ(y) θ(h, y)⁻¹ = −c(y)k − θ(h, y)
            let moved = group.act(y, &x.lattice)?;
            let v: Vec<i64> = moved
                .iter()
                .zip(group.cocycle(x.h, y))
                .map(|(a, t)| a.checked_add(*t).and_then(i64::checked_neg))
                .collect::<Option<_>>()
                .ok_or(Error::Overflow("kernel set"))?;
            kernel_set.push(v);
        }
    }
    kernel_set.sort();
    kernel_set.dedup();
    let lattice = FgAbelianGroup::free(p);
    let kernel_omega = kernel_set
        .iter()
        .map(|v| lattice.element(v, &[]))
        .collect::<Result<Vec<AbelianElement>>>()?;
    let window = (2 * radius as usize + 1).pow(p as u32);
    let kernel = min_rank_bruteforce_with(&lattice, &kernel_omega, delta, radius, window, LpMode::Auto)?;
    let rhs = quotient.rank * kernel.rank;

    let space = SearchSpace::new(
        group.ball(radius),
        group.identity(),
        omega,
        |a: &CrystalElement, b: &CrystalElement| group.multiply(a, b),
        |a: &CrystalElement| group.inverse(a),
    )?;
    let lhs = min_rank_search(&space, 2.0 * delta, rhs, LpMode::Auto)?.map(|o| o.rank);

    Ok(ExtensionRankCheck {
        delta,
        radius,
        lhs,
        quotient_rank: quotient.rank,
        quotient_support: quotient.support.iter().map(|&h| pg.name(h).to_string()).collect(),
        kernel_set,
        kernel_rank: kernel.rank,
        rhs,
        holds: lhs.is_some_and(|l| l <= rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{d_infinity, z_times_c2};

    #[test]
    fn trivial_extension() {
        let g = z_times_c2().group;
        let omega = vec![g.lattice_element(vec![1]).unwrap(), g.element("f", vec![0]).unwrap()];
        let r = lemma511_bound_check(&g, &omega, 0.5, 4).unwrap();
        assert_eq!(r.quotient_rank, 2);
        assert_eq!(r.kernel_set, vec![vec![0], vec![1]]);
        assert_eq!(r.kernel_rank, 5);
        assert_eq!(r.rhs, 10);
        // uniform on {0,1,2} × ℤ/2 already works; a five-point weighting does too
        assert_eq!(r.lhs, Some(5));
        assert!(r.holds);
    }

    #[test]
    fn dihedral_extension() {
        let g = d_infinity().group;
        let omega = vec![g.lattice_element(vec![1]).unwrap(), g.element("f", vec![2]).unwrap()];
        let r = lemma511_bound_check(&g, &omega, 0.6, 4).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.lhs.unwrap() <= r.rhs);
    }
}
