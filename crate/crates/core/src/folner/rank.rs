//! Minimum-support search for the amenable δ-rank under the trivial action.
//!
//! A candidate support `S` (always containing the identity) is accepted when
//! the linear program
//!
//! ```text
//! minimize z  subject to  T ≥ 0 on S,  Σ T = 1,
//!             Σ_g |T(s⁻¹g) − T(g)| ≤ z   for every s ∈ ω
//! ```
//!
//! has optimum `z* < δ`. Terms where only one of `T(s⁻¹g)`, `T(g)` can be
//! nonzero are linear in `T`; the remaining absolute values get one auxiliary
//! variable each. Supports are enumerated by cardinality, then
//! lexicographically, so the first accepted support is the same on every run.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp::{minimize, Constraint, LpOutcome, Relation, Scalar};
use super::weighted::WeightedFunction;
use crate::error::{Error, Result};
use crate::group::{AbelianElement, FgAbelianGroup};

/// Exact arithmetic is used automatically up to this support size...
pub const EXACT_MAX_SUPPORT: usize = 12;
/// ...and this many candidate elements.
pub const EXACT_MAX_CANDIDATES: usize = 40;
/// Float-mode acceptance requires `z* ≤ δ − FLOAT_MARGIN`.
pub const FLOAT_MARGIN: f64 = 1e-9;

const BATCH: usize = 512;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpMode {
    #[default]
    Auto,
    Exact,
    Float,
}

/// Finite window of a group in which supports are searched, with the left
/// action of each `s ∈ ω` tabulated on it.
#[derive(Clone, Debug)]
pub struct SearchSpace<E> {
    elements: Vec<E>,
    identity: usize,
    omega: Vec<E>,
    /// `moves[k][i]` is the index of `s_k · elements[i]` when it lies in the window.
    moves: Vec<Vec<Option<u32>>>,
    symmetries: Vec<Vec<u32>>,
}

impl<E: Ord + Clone + Hash> SearchSpace<E> {
    /// `act(s, g) = s·g`. Since `‖s⁻¹.T − T‖₁ = ‖s.T − T‖₁`, only one of each
    /// pair `{s, s⁻¹}` is kept, and the identity is dropped.
    pub fn new(
        candidates: Vec<E>,
        identity: E,
        omega: &[E],
        act: impl Fn(&E, &E) -> Result<E> + Sync,
        inverse: impl Fn(&E) -> Result<E>,
    ) -> Result<Self>
    where
        E: Send + Sync,
    {
        let mut elements = candidates;
        elements.sort();
        elements.dedup();
        let identity_pos = elements
            .binary_search(&identity)
            .map_err(|_| Error::Invalid("search window must contain the identity".into()))?;
        if elements.len() > u32::MAX as usize {
            return Err(Error::Invalid("search window too large".into()));
        }
        let mut kept: Vec<E> = Vec::new();
        let mut seen: HashSet<E> = HashSet::new();
        for s in omega {
            if *s == identity || seen.contains(s) {
                continue;
            }
            seen.insert(s.clone());
            seen.insert(inverse(s)?);
            kept.push(s.clone());
        }
        let moves = kept
            .iter()
            .map(|s| {
                elements
                    .par_iter()
                    .map(|g| Ok(elements.binary_search(&act(s, g)?).ok().map(|i| i as u32)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SearchSpace {
            elements,
            identity: identity_pos,
            omega: kept,
            moves,
            symmetries: Vec::new(),
        })
    }

    /// Registers bijections of the window that fix the identity and preserve
    /// the defect of every support; only the lexicographically least support
    /// of each orbit is then tested.
    pub fn with_symmetries(mut self, perms: Vec<Vec<u32>>) -> Result<Self> {
        for p in &perms {
            let mut seen = vec![false; self.elements.len()];
            if p.len() != self.elements.len()
                || p[self.identity] as usize != self.identity
                || p.iter().any(|&i| std::mem::replace(&mut seen[i as usize], true))
            {
                return Err(Error::Invalid("symmetry is not a permutation fixing the identity".into()));
            }
        }
        self.symmetries = perms;
        Ok(self)
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// ω after removing the identity and one of each inverse pair.
    pub fn effective_omega(&self) -> &[E] {
        &self.omega
    }
}

/// Minimal support found in a [`SearchSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome<E> {
    pub rank: usize,
    pub support: Vec<E>,
    pub weights: Vec<f64>,
    pub exact_weights: Option<Vec<BigRational>>,
    /// Defect of the returned weights, recomputed from scratch.
    pub defect: f64,
    pub exact_defect: Option<BigRational>,
    pub supports_examined: u64,
}

/// Structure of one support under one `s`: edges `a → b` with `s·x_a = x_b`
/// and the positions whose term is linear.
struct Pattern {
    edges: Vec<(usize, usize)>,
    linear: Vec<usize>,
}

fn patterns<E>(space: &SearchSpace<E>, support: &[u32]) -> Vec<Pattern> {
    let pos = |idx: u32| support.binary_search(&idx).ok();
    space
        .moves
        .iter()
        .map(|mv| {
            let mut edges = Vec::new();
            let mut linear = Vec::new();
            let mut has_pred = vec![false; support.len()];
            for (a, &i) in support.iter().enumerate() {
                match mv[i as usize].and_then(pos) {
                    Some(b) => {
                        edges.push((a, b));
                        has_pred[b] = true;
                    }
                    None => linear.push(a),
                }
            }
            linear.extend((0..support.len()).filter(|&b| !has_pred[b]));
            Pattern { edges, linear }
        })
        .collect()
}

/// Without `s`-cycles, every `T` on the support has `‖s.T − T‖₁ ≥ 2/L`
/// with `L` the longest `s`-chain. Returns true when that bound rules out δ.
fn chain_bound_excludes(pattern: &Pattern, k: usize, delta: &BigRational) -> bool {
    let mut succ = vec![None; k];
    let mut has_pred = vec![false; k];
    for &(a, b) in &pattern.edges {
        succ[a] = Some(b);
        has_pred[b] = true;
    }
    let mut visited = 0;
    let mut longest = 0usize;
    for start in (0..k).filter(|&a| !has_pred[a]) {
        let mut len = 1;
        let mut cur = start;
        while let Some(next) = succ[cur] {
            cur = next;
            len += 1;
        }
        visited += len;
        longest = longest.max(len);
    }
    if visited < k {
        return false;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    two >= delta * BigRational::from_integer(BigInt::from(longest))
}

fn abs<S: Scalar>(x: S) -> S {
    if x.sign() == Ordering::Less {
        S::zero().sub(&x)
    } else {
        x
    }
}

fn defect_of<S: Scalar>(pats: &[Pattern], t: &[S]) -> S {
    let mut worst = S::zero();
    for p in pats {
        let mut total = S::zero();
        for &(a, b) in &p.edges {
            total = total.add(&abs(t[a].sub(&t[b])));
        }
        for &a in &p.linear {
            total = total.add(&t[a]);
        }
        if total.cmp_to(&worst) == Ordering::Greater {
            worst = total;
        }
    }
    worst
}

fn solve<S: Scalar>(pats: &[Pattern], k: usize) -> Result<(S, Vec<S>)> {
    let n_edges: usize = pats.iter().map(|p| p.edges.len()).sum();
    let z = k + n_edges;
    let one = S::from_i64(1);
    let minus = S::from_i64(-1);
    let mut cons = Vec::with_capacity(1 + 2 * n_edges + pats.len());
    cons.push(Constraint {
        terms: (0..k).map(|a| (a, one.clone())).collect(),
        rel: Relation::Eq,
        rhs: one.clone(),
    });
    let mut u = k;
    for p in pats {
        let mut row: Vec<(usize, S)> = Vec::new();
        for &(a, b) in &p.edges {
            cons.push(Constraint {
                terms: vec![(a, one.clone()), (b, minus.clone()), (u, minus.clone())],
                rel: Relation::Le,
                rhs: S::zero(),
            });
            cons.push(Constraint {
                terms: vec![(b, one.clone()), (a, minus.clone()), (u, minus.clone())],
                rel: Relation::Le,
                rhs: S::zero(),
            });
            row.push((u, one.clone()));
            u += 1;
        }
        for &a in &p.linear {
            row.push((a, one.clone()));
        }
        row.push((z, minus.clone()));
        cons.push(Constraint {
            terms: row,
            rel: Relation::Le,
            rhs: S::zero(),
        });
    }
    match minimize(z + 1, &[(z, one)], &cons) {
        LpOutcome::Optimal { value, x } => Ok((value, x[..k].to_vec())),
        other => Err(Error::Lp(match other {
            LpOutcome::Infeasible => "defect program reported infeasible",
            _ => "defect program reported unbounded",
        })),
    }
}

/// Accepted weights of one support.
struct Found {
    weights: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    defect: f64,
    exact_defect: Option<BigRational>,
}

/// Mixes in `η·uniform` when the optimum vanishes somewhere, keeping the
/// defect below δ: `defect((1−η)T + ηU) ≤ z* + η(2 − z*)`.
fn make_positive<S: Scalar>(t: Vec<S>, value: &S, delta: &S) -> Vec<S> {
    if t.iter().all(|w| w.sign() == Ordering::Greater) {
        return t;
    }
    let k = S::from_i64(t.len() as i64);
    let quarter = delta.sub(value).div(&S::from_i64(4));
    let half = S::from_i64(1).div(&S::from_i64(2));
    let eta = if quarter.cmp_to(&half) == Ordering::Less { quarter } else { half };
    let keep = S::from_i64(1).sub(&eta);
    let share = eta.div(&k);
    t.into_iter().map(|w| keep.mul(&w).add(&share)).collect()
}

fn test_support<E>(
    space: &SearchSpace<E>,
    support: &[u32],
    delta: f64,
    delta_q: &BigRational,
    exact: bool,
) -> Result<Option<Found>> {
    let pats = patterns(space, support);
    let k = support.len();
    if exact {
        let (value, t) = solve::<BigRational>(&pats, k)?;
        if value >= *delta_q {
            return Ok(None);
        }
        let t = make_positive(t, &value, delta_q);
        let d = defect_of(&pats, &t);
        if d >= *delta_q {
            return Err(Error::Internal("positive witness lost the defect bound".into()));
        }
        Ok(Some(Found {
            weights: t.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect(),
            defect: d.to_f64().unwrap_or(f64::NAN),
            exact: Some(t),
            exact_defect: Some(d),
        }))
    } else {
        let (value, t) = solve::<f64>(&pats, k)?;
        if value > delta - FLOAT_MARGIN {
            return Ok(None);
        }
        let t: Vec<f64> = t.into_iter().map(|w| w.max(0.0)).collect();
        let total: f64 = t.iter().sum();
        let t: Vec<f64> = t.into_iter().map(|w| w / total).collect();
        let t = if t.iter().all(|&w| w > 0.0) {
            t
        } else {
            make_positive(t, &value, &delta)
        };
        let d = defect_of(&pats, &t);
        if d > delta - FLOAT_MARGIN {
            return Err(Error::Internal("positive witness lost the defect bound".into()));
        }
        Ok(Some(Found {
            weights: t,
            exact: None,
            defect: d,
            exact_defect: None,
        }))
    }
}

/// Lexicographic successor of a strictly increasing index tuple drawn from `0..n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn is_orbit_minimal(support: &[u32], perms: &[Vec<u32>]) -> bool {
    let mut image = Vec::with_capacity(support.len());
    for p in perms {
        image.clear();
        image.extend(support.iter().map(|&i| p[i as usize]));
        image.sort_unstable();
        if image.as_slice() < support {
            return false;
        }
    }
    true
}

/// Smallest support size in the window admitting weights with defect `< δ`.
/// `Ok(None)` means no support of size `≤ max_support` works.
pub fn min_rank_search<E: Clone + Send + Sync>(
    space: &SearchSpace<E>,
    delta: f64,
    max_support: usize,
    mode: LpMode,
) -> Result<Option<SearchOutcome<E>>> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Invalid(format!("δ must be positive and finite, got {delta}")));
    }
    if max_support == 0 {
        return Err(Error::Invalid("max_support must be at least 1".into()));
    }
    let delta_q = BigRational::from_float(delta).expect("finite δ");
    let n = space.elements.len();
    let others: Vec<u32> = (0..n as u32).filter(|&i| i as usize != space.identity).collect();
    let mut examined = 0u64;

    if space.omega.is_empty() {
        return Ok(Some(SearchOutcome {
            rank: 1,
            support: vec![space.elements[space.identity].clone()],
            weights: vec![1.0],
            exact_weights: Some(vec![BigRational::one()]),
            defect: 0.0,
            exact_defect: Some(<BigRational as Zero>::zero()),
            supports_examined: 1,
        }));
    }

    for k in 1..=max_support.min(n) {
        let exact = match mode {
            LpMode::Exact => true,
            LpMode::Float => false,
            LpMode::Auto => k <= EXACT_MAX_SUPPORT && n <= EXACT_MAX_CANDIDATES,
        };
        let mut combo: Vec<usize> = (0..k - 1).collect();
        let mut more = true;
        while more {
            let mut batch: Vec<Vec<u32>> = Vec::with_capacity(BATCH);
            while more && batch.len() < BATCH {
                let mut support: Vec<u32> = combo.iter().map(|&c| others[c]).collect();
                support.push(space.identity as u32);
                support.sort_unstable();
                more = k > 1 && next_combination(&mut combo, others.len());
                examined += 1;
                if !is_orbit_minimal(&support, &space.symmetries) {
                    continue;
                }
                let pats = patterns(space, &support);
                if pats.iter().any(|p| chain_bound_excludes(p, k, &delta_q)) {
                    continue;
                }
                batch.push(support);
            }
            let hit = batch.par_iter().find_map_first(|support| {
                match test_support(space, support, delta, &delta_q, exact) {
                    Ok(Some(found)) => Some(Ok((support.clone(), found))),
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                }
            });
            if let Some(hit) = hit {
                let (support, found) = hit?;
                return Ok(Some(SearchOutcome {
                    rank: k,
                    support: support.iter().map(|&i| space.elements[i as usize].clone()).collect(),
                    weights: found.weights,
                    exact_weights: found.exact,
                    defect: found.defect,
                    exact_defect: found.exact_defect,
                    supports_examined: examined,
                }));
            }
        }
    }
    Ok(None)
}

/// Result of a rank computation on an abelian group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub witness: WeightedFunction,
    /// Achieved `max_{s∈ω} ‖s.T − T‖₁`.
    pub defect: f64,
    pub delta: f64,
    pub omega: Vec<AbelianElement>,
    pub search_radius: i64,
    /// Every smaller support inside the search window was ruled out. Never a
    /// claim of global minimality.
    pub exhaustive_within_radius: bool,
    pub exact_arithmetic: bool,
    pub supports_examined: u64,
    pub method: String,
}

impl RankCertificate {
    /// Certificate for a constructed (not searched) witness.
    pub fn upper_bound(
        witness: WeightedFunction,
        omega: &[AbelianElement],
        delta: f64,
        method: &str,
    ) -> Result<RankCertificate> {
        let defect = super::weighted::defect(&witness, omega)?;
        Ok(RankCertificate {
            rank: witness.len(),
            exact_arithmetic: witness.is_exact(),
            witness,
            defect,
            delta,
            omega: omega.to_vec(),
            search_radius: 0,
            exhaustive_within_radius: false,
            supports_examined: 0,
            method: method.to_string(),
        })
    }

    /// `defect < δ`, decided exactly for rational witnesses.
    pub fn achieves_delta(&self) -> bool {
        match super::weighted::defect_exact(&self.witness, &self.omega) {
            Ok(Some(d)) => BigRational::from_float(self.delta).is_some_and(|q| d < q),
            _ => self.defect < self.delta,
        }
    }
}

fn lattice_symmetries(
    group: &FgAbelianGroup,
    window: &[AbelianElement],
    omega: &[AbelianElement],
) -> Result<Vec<Vec<u32>>> {
    let p = group.rank();
    if p < 2 || p > 5 {
        return Ok(Vec::new());
    }
    let omega_set: HashSet<&AbelianElement> = omega.iter().collect();
    let mut perms = Vec::new();
    let mut sigma: Vec<usize> = (0..p).collect();
    let permute = |x: &AbelianElement, sigma: &[usize]| -> Result<AbelianElement> {
        let l = x.lattice();
        let moved: Vec<i64> = (0..p).map(|i| l[sigma[i]]).collect();
        group.element(&moved, x.torsion())
    };
    while next_permutation(&mut sigma) {
        let fixes_omega = omega
            .iter()
            .map(|s| permute(s, &sigma))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|s| omega_set.contains(s));
        if !fixes_omega {
            continue;
        }
        let mut image = Vec::with_capacity(window.len());
        let mut closed = true;
        for x in window {
            match window.binary_search(&permute(x, &sigma)?) {
                Ok(i) => image.push(i as u32),
                Err(_) => {
                    closed = false;
                    break;
                }
            }
        }
        if closed {
            perms.push(image);
        }
    }
    Ok(perms)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// δ-rank of `ω` searched over supports inside the sup-norm ball of radius
/// `radius` (torsion unrestricted).
pub fn min_rank_bruteforce(
    group: &FgAbelianGroup,
    omega: &[AbelianElement],
    delta: f64,
    radius: i64,
    max_support: usize,
) -> Result<RankCertificate> {
    min_rank_bruteforce_with(group, omega, delta, radius, max_support, LpMode::Auto)
}

pub fn min_rank_bruteforce_with(
    group: &FgAbelianGroup,
    omega: &[AbelianElement],
    delta: f64,
    radius: i64,
    max_support: usize,
    mode: LpMode,
) -> Result<RankCertificate> {
    if radius < 1 {
        return Err(Error::Invalid("search radius must be at least 1".into()));
    }
    let window = group.ball(radius);
    let cert = min_rank_in_window(group, window, omega, delta, max_support, mode, radius, true)?;
    Ok(cert)
}

/// Rank search over an arbitrary finite window containing `0`.
/// `use_symmetries` enables pruning by lattice-coordinate permutations that
/// fix both the window and `ω`.
#[allow(clippy::too_many_arguments)]
pub fn min_rank_in_window(
    group: &FgAbelianGroup,
    window: Vec<AbelianElement>,
    omega: &[AbelianElement],
    delta: f64,
    max_support: usize,
    mode: LpMode,
    radius: i64,
    use_symmetries: bool,
) -> Result<RankCertificate> {
    if let Some(bad) = omega.iter().chain(&window).find(|x| !group.contains(x)) {
        return Err(Error::Shape(format!("{bad:?} is not an element of {group}")));
    }
    let space = SearchSpace::new(
        window,
        group.zero(),
        omega,
        |s, g| group.add(s, g),
        |s| group.neg(s),
    )?;
    let space = if use_symmetries {
        let perms = lattice_symmetries(group, space.elements(), omega)?;
        space.with_symmetries(perms)?
    } else {
        space
    };
    let outcome = min_rank_search(&space, delta, max_support, mode)?.ok_or(
        Error::RankSearchExhausted {
            radius,
            max_support,
            delta,
        },
    )?;
    let witness = match &outcome.exact_weights {
        Some(w) => WeightedFunction::new_exact(
            group.clone(),
            outcome.support.iter().cloned().zip(w.iter().cloned()),
        )?,
        None => WeightedFunction::new_float(
            group.clone(),
            outcome.support.iter().cloned().zip(outcome.weights.iter().cloned()),
        )?,
    };
    Ok(RankCertificate {
        rank: outcome.rank,
        exact_arithmetic: witness.is_exact(),
        witness,
        defect: outcome.defect,
        delta,
        omega: omega.to_vec(),
        search_radius: radius,
        exhaustive_within_radius: true,
        supports_examined: outcome.supports_examined,
        method: "lp".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::free(1)
    }

    fn e(v: i64) -> AbelianElement {
        z().element(&[v], &[]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn trivial_omega_gives_point_mass() {
        let c = min_rank_bruteforce(&z(), &[e(0)], 0.1, 3, 4).unwrap();
        assert_eq!(c.rank, 1);
        assert_eq!(c.witness.support(), &[e(0)]);
        assert_eq!(c.defect, 0.0);
    }

    #[test]
    fn point_mass_below_two_point_one() {
        let c = min_rank_bruteforce(&z(), &[e(1)], 2.1, 3, 4).unwrap();
        assert_eq!(c.rank, 1);
        assert_eq!(c.defect, 2.0);
        // δ = 2 is not enough: the inequality is strict
        let c = min_rank_bruteforce(&z(), &[e(1)], 2.0, 3, 4).unwrap();
        assert_eq!(c.rank, 2);
    }

    #[test]
    fn plus_minus_one_at_half() {
        let c = min_rank_bruteforce(&z(), &[e(1), e(-1)], 0.5, 8, 8).unwrap();
        assert_eq!(c.rank, 5);
        assert!(c.exact_arithmetic && c.exhaustive_within_radius);
        assert_eq!(c.witness.support(), &[e(-4), e(-3), e(-2), e(-1), e(0)]);
        assert_eq!(
            super::super::weighted::defect_exact(&c.witness, &c.omega).unwrap(),
            Some(q(2, 5))
        );
        assert!((c.defect - 0.4).abs() < 1e-15);
        assert!(c.achieves_delta());
    }

    #[test]
    fn float_mode_agrees() {
        let c = min_rank_bruteforce_with(&z(), &[e(1), e(-1)], 0.5, 8, 8, LpMode::Float).unwrap();
        assert_eq!(c.rank, 5);
        assert!(!c.exact_arithmetic);
        assert!((c.defect - 0.4).abs() < 1e-9);
    }

    #[test]
    fn exhaustion_is_an_error() {
        let err = min_rank_bruteforce(&z(), &[e(1)], 0.5, 2, 3).unwrap_err();
        assert!(matches!(err, Error::RankSearchExhausted { radius: 2, max_support: 3, .. }));
    }

    #[test]
    fn torsion_group_rank() {
        // in Z/3 the uniform measure is exactly invariant
        let g = FgAbelianGroup::new(0, vec![3]).unwrap();
        let s = g.element(&[], &[1]).unwrap();
        let c = min_rank_in_window(&g, g.ball(0), &[s], 0.01, 3, LpMode::Auto, 0, false).unwrap();
        assert_eq!(c.rank, 3);
        assert_eq!(c.defect, 0.0);
    }

    #[test]
    fn two_dimensional_symmetric_search() {
        let g = FgAbelianGroup::free(2);
        let omega: Vec<AbelianElement> = [[1, 0], [0, 1]]
            .iter()
            .map(|v| g.element(v, &[]).unwrap())
            .collect();
        let with = min_rank_in_window(&g, g.ball(2), &omega, 1.2, 6, LpMode::Auto, 2, true).unwrap();
        let without = min_rank_in_window(&g, g.ball(2), &omega, 1.2, 6, LpMode::Auto, 2, false).unwrap();
        assert_eq!(with.rank, without.rank);
        assert_eq!(with.witness, without.witness);
        assert!(with.supports_examined <= without.supports_examined);
        // a 2×2 square has defect 1 for each unit vector
        assert_eq!(with.rank, 4);
    }

    #[test]
    fn combination_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }
}
