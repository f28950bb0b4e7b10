//! Sumset growth `|E + γE + … + γⁿ⁻¹E|` and the growth-rate estimator.
//!
//! For an automorphism `γ` of a discrete abelian group, the supremum over
//! finite `E` of `limsup log|E + γE + … + γⁿ⁻¹E| / n` is the topological
//! entropy of the dual automorphism. This module evaluates the sequence for a
//! chosen `E` only; it never claims the supremum.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{Diagnostics, EntropyEstimate, Method};
use crate::group::{AbelianAutomorphism, AbelianElement, FgAbelianGroup};

pub const DEFAULT_CAP: usize = 5_000_000;
pub const DEFAULT_TAIL_WINDOW: usize = 3;

/// Below this many pairs the translates are formed on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Finite subset of an [`FgAbelianGroup`] with set semantics, stored sorted in
/// the canonical element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubset {
    group: FgAbelianGroup,
    elements: Vec<AbelianElement>,
}

impl FiniteSubset {
    pub fn new(
        group: FgAbelianGroup,
        elements: impl IntoIterator<Item = AbelianElement>,
    ) -> Result<Self> {
        let mut elements: Vec<AbelianElement> = elements.into_iter().collect();
        if let Some(bad) = elements.iter().find(|x| !group.contains(x)) {
            return Err(Error::Shape(format!("{bad:?} is not an element of {group}")));
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(FiniteSubset { group, elements })
    }

    pub fn singleton_zero(group: &FgAbelianGroup) -> Self {
        FiniteSubset {
            group: group.clone(),
            elements: vec![group.zero()],
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &AbelianElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[AbelianElement] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &AbelianElement> {
        self.elements.iter()
    }

    pub fn insert(&mut self, x: AbelianElement) -> Result<bool> {
        if !self.group.contains(&x) {
            return Err(Error::Shape(format!("{x:?} is not an element of {}", self.group)));
        }
        match self.elements.binary_search(&x) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.elements.insert(i, x);
                Ok(true)
            }
        }
    }

    pub fn map(&self, gamma: &AbelianAutomorphism) -> Result<FiniteSubset> {
        if gamma.group() != &self.group {
            return Err(Error::Shape("automorphism of a different group".into()));
        }
        let mut elements = self
            .elements
            .iter()
            .map(|x| gamma.apply_unchecked(x))
            .collect::<Result<Vec<_>>>()?;
        elements.sort_unstable();
        Ok(FiniteSubset {
            group: self.group.clone(),
            elements,
        })
    }
}

/// `{x + y : x ∈ X, y ∈ Y}` without a size budget.
pub fn sumset(x: &FiniteSubset, y: &FiniteSubset) -> Result<FiniteSubset> {
    sumset_capped(x, y, usize::MAX)
}

/// `{x + y : x ∈ X, y ∈ Y}`; fails with [`Error::CapExceeded`] once the result
/// would hold more than `cap` elements.
///
/// The result is the union of the translates `X + y`. Translation preserves
/// the lexicographic order of lattice parts, so on torsion-free groups every
/// translate is already sorted and the union is a merge. Translates are built
/// in parallel; the output is a sorted set and does not depend on the schedule.
pub fn sumset_capped(x: &FiniteSubset, y: &FiniteSubset, cap: usize) -> Result<FiniteSubset> {
    if x.group != y.group {
        return Err(Error::Shape(format!(
            "sumset of subsets of {} and {}",
            x.group, y.group
        )));
    }
    let group = &x.group;
    let translate = |b: &AbelianElement| -> Result<Vec<AbelianElement>> {
        let mut t = x
            .elements
            .iter()
            .map(|a| group.add_unchecked(a, b))
            .collect::<Result<Vec<_>>>()?;
        if group.torsion_len() > 0 {
            t.sort_unstable();
        }
        Ok(t)
    };
    let translates: Vec<Vec<AbelianElement>> =
        if x.len().saturating_mul(y.len()) < PARALLEL_THRESHOLD {
            y.elements.iter().map(translate).collect::<Result<_>>()?
        } else {
            y.elements.par_iter().map(translate).collect::<Result<_>>()?
        };
    let elements = merge_all(translates, cap)?;
    Ok(FiniteSubset {
        group: group.clone(),
        elements,
    })
}

/// Union of sorted duplicate-free runs by pairwise merging.
fn merge_all(mut runs: Vec<Vec<AbelianElement>>, cap: usize) -> Result<Vec<AbelianElement>> {
    if runs.is_empty() {
        return Ok(Vec::new());
    }
    while runs.len() > 1 {
        let mut next = Vec::with_capacity(runs.len().div_ceil(2));
        let mut it = runs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge_two(a, b, cap)?),
                None => next.push(a),
            }
        }
        runs = next;
    }
    let out = runs.pop().unwrap_or_default();
    if out.len() > cap {
        return Err(Error::CapExceeded {
            cap,
            lower_bound: out.len(),
        });
    }
    Ok(out)
}

fn merge_two(
    a: Vec<AbelianElement>,
    b: Vec<AbelianElement>,
    cap: usize,
) -> Result<Vec<AbelianElement>> {
    let mut out = Vec::with_capacity((a.len() + b.len()).min(cap.saturating_add(1)));
    let mut a = a.into_iter().peekable();
    let mut b = b.into_iter().peekable();
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => match x.cmp(y) {
                std::cmp::Ordering::Less => a.next(),
                std::cmp::Ordering::Greater => b.next(),
                std::cmp::Ordering::Equal => {
                    b.next();
                    a.next()
                }
            },
            (Some(_), None) => a.next(),
            (None, Some(_)) => b.next(),
            (None, None) => break,
        };
        out.extend(next);
        if out.len() > cap {
            return Err(Error::CapExceeded {
                cap,
                lower_bound: out.len(),
            });
        }
    }
    Ok(out)
}

/// `s_n = |E + γE + … + γⁿ⁻¹E|` for `n = 1, 2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub sizes: Vec<u64>,
    /// The run stopped early because the next sumset exceeded the budget.
    pub capped: bool,
    /// `0` was not in the supplied `E` and was added before iterating.
    pub zero_adjoined: bool,
    pub requested: usize,
}

impl GrowthSeries {
    pub fn from_sizes(sizes: Vec<u64>) -> Self {
        let requested = sizes.len();
        GrowthSeries {
            sizes,
            capped: false,
            zero_adjoined: false,
            requested,
        }
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `s_n` for 1-based `n`.
    pub fn size(&self, n: usize) -> u64 {
        self.sizes[n - 1]
    }

    /// First pair `(n, m)` with `s_{n+m} > s_n·s_m`, if any.
    pub fn submultiplicativity_violation(&self) -> Option<(usize, usize)> {
        let len = self.len();
        for n in 1..len {
            for m in 1..=len - n {
                if (self.size(n + m) as u128) > self.size(n) as u128 * self.size(m) as u128 {
                    return Some((n, m));
                }
            }
        }
        None
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] <= w[1])
    }

    /// `log(s_n)/n` for every computed `n`.
    pub fn log_rates(&self) -> Vec<f64> {
        self.sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| (s as f64).ln() / (i + 1) as f64)
            .collect()
    }

    /// CSV with header `n,size,log_size_over_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,size,log_size_over_n\n");
        for (i, (&s, r)) in self.sizes.iter().zip(self.log_rates()).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, s, r));
        }
        out
    }
}

/// Computes `s_1..s_N` incrementally via `S_n = S_{n-1} + γⁿ⁻¹(E)`.
///
/// `0` is adjoined to `E` first (recorded in the result), which makes the
/// series nondecreasing. Exceeding `cap` is a soft stop: the series is
/// returned truncated with `capped` set.
pub fn peters_growth(
    gamma: &AbelianAutomorphism,
    e: &FiniteSubset,
    n: usize,
    cap: usize,
) -> Result<GrowthSeries> {
    if n == 0 {
        return Err(Error::Invalid("growth series length must be at least 1".into()));
    }
    if cap == 0 {
        return Err(Error::Invalid("cap must be positive".into()));
    }
    if gamma.group() != e.group() {
        return Err(Error::Shape("automorphism and set live in different groups".into()));
    }
    let group = e.group().clone();
    let mut base = e.clone();
    let zero_adjoined = base.insert(group.zero())?;

    let mut series = GrowthSeries {
        sizes: Vec::with_capacity(n),
        capped: false,
        zero_adjoined,
        requested: n,
    };
    if base.len() > cap {
        series.capped = true;
        return Ok(series);
    }
    let mut current = base.clone();
    let mut image = base;
    series.sizes.push(current.len() as u64);
    for _ in 2..=n {
        image = image.map(gamma)?;
        match sumset_capped(&current, &image, cap) {
            Ok(next) => {
                current = next;
                series.sizes.push(current.len() as u64);
            }
            Err(Error::CapExceeded { .. }) => {
                series.capped = true;
                break;
            }
            Err(err) => return Err(err),
        }
    }
    Ok(series)
}

/// Growth-rate estimate with the default tail window.
pub fn growth_rate_estimate(series: &GrowthSeries) -> Result<EntropyEstimate> {
    growth_rate_estimate_with(series, DEFAULT_TAIL_WINDOW)
}

/// `log(s_N / s_{N-k}) / k`, with `k` shrunk to `N - 1` on short series.
///
/// `log s_n = n·h + O(log n)` for toral automorphisms, so differencing over
/// the tail removes the polynomial factor that biases `log(s_N)/N`.
pub fn growth_rate_estimate_with(series: &GrowthSeries, window: usize) -> Result<EntropyEstimate> {
    let len = series.len();
    if len < 3 {
        return Err(Error::Invalid(format!(
            "growth series has {len} terms; at least 3 are needed"
        )));
    }
    if window == 0 {
        return Err(Error::Invalid("tail window must be positive".into()));
    }
    let k = window.min(len - 1);
    let last = series.size(len) as f64;
    let earlier = series.size(len - k) as f64;
    let value = ((last / earlier).ln() / k as f64).max(0.0);
    let naive = last.ln() / len as f64;
    Ok(EntropyEstimate {
        value,
        method: Method::Peters,
        diagnostics: Diagnostics::Peters {
            sizes: series.sizes.clone(),
            naive_rate: naive,
            tail_window: k,
            capped: series.capped,
            zero_adjoined: series.zero_adjoined,
        },
        tolerance: 0.0,
        note: None,
    })
}

/// `{0,1}^p` in the lattice coordinates, torsion zero.
pub fn unit_cube_corners(group: &FgAbelianGroup) -> FiniteSubset {
    let p = group.rank();
    let zeros = vec![0; group.torsion_len()];
    let elements = (0u64..1 << p).map(|mask| {
        let lattice: Vec<i64> = (0..p).map(|i| ((mask >> i) & 1) as i64).collect();
        group.element(&lattice, &zeros).expect("cube corner shape")
    });
    FiniteSubset::new(group.clone(), elements).expect("cube corners lie in the group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IntMatrix;

    fn set(group: &FgAbelianGroup, pts: &[&[i64]]) -> FiniteSubset {
        FiniteSubset::new(
            group.clone(),
            pts.iter().map(|p| group.element_from_flat(p).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn sumset_examples() {
        let z = FgAbelianGroup::free(1);
        let x = set(&z, &[&[0], &[1]]);
        assert_eq!(sumset(&x, &x).unwrap(), set(&z, &[&[0], &[1], &[2]]));
        assert_eq!(sumset(&x, &FiniteSubset::singleton_zero(&z)).unwrap(), x);

        let z2 = FgAbelianGroup::free(2);
        let y = set(&z2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let s = sumset(&y, &y).unwrap();
        assert_eq!(
            s,
            set(&z2, &[&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[0, 2], &[1, 1]])
        );
    }

    #[test]
    fn sumset_cap_reports_lower_bound() {
        let z = FgAbelianGroup::free(1);
        let x = set(&z, &[&[0], &[1], &[2], &[3]]);
        let y = set(&z, &[&[0], &[10], &[20]]);
        match sumset_capped(&x, &y, 5) {
            Err(Error::CapExceeded { cap, lower_bound }) => {
                assert_eq!(cap, 5);
                assert!(lower_bound > 5);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn sumset_in_torsion_group() {
        let g = FgAbelianGroup::new(1, vec![2]).unwrap();
        let x = set(&g, &[&[0, 0], &[0, 1]]);
        assert_eq!(sumset(&x, &x).unwrap(), x);
    }

    #[test]
    fn identity_simplex_counts() {
        let z2 = FgAbelianGroup::free(2);
        let e = set(&z2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let id = AbelianAutomorphism::identity(&z2);
        let s = peters_growth(&id, &e, 5, DEFAULT_CAP).unwrap();
        let expected: Vec<u64> = (1..=5u64).map(|n| (n + 1) * (n + 2) / 2).collect();
        assert_eq!(s.sizes, expected);
        assert_eq!(s.size(3), 10);
        assert!(!s.zero_adjoined);
    }

    #[test]
    fn minus_identity_is_linear() {
        let z = FgAbelianGroup::free(1);
        let e = set(&z, &[&[0], &[1]]);
        let neg = AbelianAutomorphism::of_matrix(&IntMatrix::from_i64(&[&[-1]])).unwrap();
        let s = peters_growth(&neg, &e, 12, DEFAULT_CAP).unwrap();
        let expected: Vec<u64> = (1..=12u64).map(|n| n + 1).collect();
        assert_eq!(s.sizes, expected);
        let est = growth_rate_estimate(&s).unwrap();
        assert!((est.value - (13.0f64 / 10.0).ln() / 3.0).abs() < 1e-15);
        assert!((est.value - 0.0875).abs() < 1e-4);
    }

    #[test]
    fn zero_is_adjoined() {
        let z = FgAbelianGroup::free(1);
        let e = set(&z, &[&[1]]);
        let id = AbelianAutomorphism::identity(&z);
        let s = peters_growth(&id, &e, 3, DEFAULT_CAP).unwrap();
        assert!(s.zero_adjoined);
        assert_eq!(s.sizes, vec![2, 3, 4]);
    }

    #[test]
    fn constant_series_has_zero_rate() {
        let s = GrowthSeries::from_sizes(vec![1, 1, 1, 1]);
        assert_eq!(growth_rate_estimate(&s).unwrap().value, 0.0);
        assert!(growth_rate_estimate(&GrowthSeries::from_sizes(vec![1, 2])).is_err());
    }

    #[test]
    fn cap_is_a_soft_stop() {
        let z2 = FgAbelianGroup::free(2);
        let cat = AbelianAutomorphism::of_matrix(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let s = peters_growth(&cat, &unit_cube_corners(&z2), 12, 500).unwrap();
        assert!(s.capped);
        assert!(s.sizes.len() < 12);
        assert!(*s.sizes.last().unwrap() <= 500);
    }

    #[test]
    fn csv_rows() {
        let s = GrowthSeries::from_sizes(vec![3, 6, 10]);
        let csv = s.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,size,log_size_over_n");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,3,"));
    }
}
