use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{AbelianAutomorphism, AbelianElement, FgAbelianGroup};

/// Tolerance on `Σ T(g) = 1` for float weights.
pub const FLOAT_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Finitely supported probability weights `T` on an abelian group.
///
/// The support is kept in canonical order and every weight is strictly
/// positive.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFunction {
    group: FgAbelianGroup,
    support: Vec<AbelianElement>,
    weights: Weights,
}

fn check_support(group: &FgAbelianGroup, support: &[AbelianElement]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidWeights("empty support".into()));
    }
    if let Some(x) = support.iter().find(|x| !group.contains(x)) {
        return Err(Error::Shape(format!("{x:?} is not an element of {group}")));
    }
    if support.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidWeights("support has a repeated element".into()));
    }
    Ok(())
}

impl WeightedFunction {
    pub fn new_exact(
        group: FgAbelianGroup,
        entries: impl IntoIterator<Item = (AbelianElement, BigRational)>,
    ) -> Result<Self> {
        let mut entries: Vec<(AbelianElement, BigRational)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let (support, weights): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        check_support(&group, &support)?;
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidWeights("weights must be positive on the support".into()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightedFunction {
            group,
            support,
            weights: Weights::Exact(weights),
        })
    }

    pub fn new_float(
        group: FgAbelianGroup,
        entries: impl IntoIterator<Item = (AbelianElement, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(AbelianElement, f64)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let (support, weights): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        check_support(&group, &support)?;
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights("weights must be positive and finite".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > FLOAT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightedFunction {
            group,
            support,
            weights: Weights::Float(weights),
        })
    }

    /// Uniform weights `1/|S|` on `support`.
    pub fn uniform(
        group: FgAbelianGroup,
        support: impl IntoIterator<Item = AbelianElement>,
    ) -> Result<Self> {
        let mut support: Vec<AbelianElement> = support.into_iter().collect();
        support.sort();
        support.dedup();
        let w = BigRational::new(BigInt::one(), BigInt::from(support.len().max(1)));
        let n = support.len();
        WeightedFunction::new_exact(group, support.into_iter().zip(std::iter::repeat(w).take(n)))
    }

    pub fn point_mass(group: FgAbelianGroup, x: AbelianElement) -> Result<Self> {
        WeightedFunction::new_exact(group, [(x, BigRational::one())])
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn support(&self) -> &[AbelianElement] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.weights, Weights::Exact(_))
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        match &self.weights {
            Weights::Exact(w) => w.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect(),
            Weights::Float(w) => w.clone(),
        }
    }

    /// `T(x)`, zero off the support.
    pub fn weight(&self, x: &AbelianElement) -> f64 {
        match self.support.binary_search(x) {
            Ok(i) => match &self.weights {
                Weights::Exact(w) => w[i].to_f64().unwrap_or(f64::NAN),
                Weights::Float(w) => w[i],
            },
            Err(_) => 0.0,
        }
    }

    pub fn weight_exact(&self, x: &AbelianElement) -> Option<BigRational> {
        let Weights::Exact(w) = &self.weights else {
            return None;
        };
        Some(match self.support.binary_search(x) {
            Ok(i) => w[i].clone(),
            Err(_) => BigRational::zero(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AbelianElement, f64)> {
        self.support.iter().zip(self.weights_f64())
    }

    pub fn to_float(&self) -> WeightedFunction {
        WeightedFunction {
            group: self.group.clone(),
            support: self.support.clone(),
            weights: Weights::Float(self.weights_f64()),
        }
    }

    /// `g ↦ T(g − r)`, i.e. the support moved by `r`.
    pub fn translate(&self, r: &AbelianElement) -> Result<WeightedFunction> {
        self.relabel(|x| self.group.add(x, r))
    }

    /// Push-forward `T ∘ γ⁻¹`, supported on `γ(supp T)`.
    pub fn push_forward(&self, gamma: &AbelianAutomorphism) -> Result<WeightedFunction> {
        if gamma.group() != &self.group {
            return Err(Error::Shape("automorphism of a different group".into()));
        }
        self.relabel(|x| gamma.apply(x))
    }

    fn relabel(
        &self,
        f: impl Fn(&AbelianElement) -> Result<AbelianElement>,
    ) -> Result<WeightedFunction> {
        let support = self.support.iter().map(f).collect::<Result<Vec<_>>>()?;
        let mut order: Vec<usize> = (0..support.len()).collect();
        order.sort_by(|&a, &b| support[a].cmp(&support[b]));
        let permute = |i: &usize| support[*i].clone();
        let new_support: Vec<AbelianElement> = order.iter().map(permute).collect();
        let weights = match &self.weights {
            Weights::Exact(w) => Weights::Exact(order.iter().map(|&i| w[i].clone()).collect()),
            Weights::Float(w) => Weights::Float(order.iter().map(|&i| w[i]).collect()),
        };
        Ok(WeightedFunction {
            group: self.group.clone(),
            support: new_support,
            weights,
        })
    }

    fn check_element(&self, s: &AbelianElement) -> Result<()> {
        if self.group.contains(s) {
            Ok(())
        } else {
            Err(Error::Shape(format!("{s:?} is not an element of {}", self.group)))
        }
    }

    /// `‖s.T − T‖₁ = Σ_g |T(g − s) − T(g)|`.
    pub fn translation_defect(&self, s: &AbelianElement) -> Result<f64> {
        if let Some(exact) = self.translation_defect_exact(s)? {
            return Ok(exact.to_f64().unwrap_or(f64::NAN));
        }
        self.check_element(s)?;
        let w = self.weights_f64();
        let mut total = 0.0;
        for (i, g) in self.support.iter().enumerate() {
            let shifted = self.group.sub(g, s)?;
            total += (self.weight(&shifted) - w[i]).abs();
        }
        for (i, x) in self.support.iter().enumerate() {
            let g = self.group.add(x, s)?;
            if self.support.binary_search(&g).is_err() {
                total += w[i];
            }
        }
        Ok(total)
    }

    /// Exact `‖s.T − T‖₁`; `None` for float weights.
    pub fn translation_defect_exact(&self, s: &AbelianElement) -> Result<Option<BigRational>> {
        let Weights::Exact(w) = &self.weights else {
            return Ok(None);
        };
        self.check_element(s)?;
        let mut total = BigRational::zero();
        for (i, g) in self.support.iter().enumerate() {
            let shifted = self.group.sub(g, s)?;
            let other = match self.support.binary_search(&shifted) {
                Ok(j) => w[j].clone(),
                Err(_) => BigRational::zero(),
            };
            total += (other - &w[i]).abs();
        }
        for (i, x) in self.support.iter().enumerate() {
            let g = self.group.add(x, s)?;
            if self.support.binary_search(&g).is_err() {
                total += &w[i];
            }
        }
        Ok(Some(total))
    }
}

/// `max_{s ∈ ω} ‖s.T − T‖₁` under the trivial action.
pub fn defect(t: &WeightedFunction, omega: &[AbelianElement]) -> Result<f64> {
    if omega.is_empty() {
        return Err(Error::Invalid("ω must be nonempty".into()));
    }
    omega
        .iter()
        .map(|s| t.translation_defect(s))
        .try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
}

/// Exact defect for rational weights.
pub fn defect_exact(t: &WeightedFunction, omega: &[AbelianElement]) -> Result<Option<BigRational>> {
    if omega.is_empty() {
        return Err(Error::Invalid("ω must be nonempty".into()));
    }
    let mut best: Option<BigRational> = None;
    for s in omega {
        let Some(d) = t.translation_defect_exact(s)? else {
            return Ok(None);
        };
        best = Some(match best {
            Some(b) if b >= d => b,
            _ => d,
        });
    }
    Ok(best)
}

/// Both sides of `|1 − Σ_g √(T(g)·T(g − h))|² ≤ ‖h.T − T‖₁`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma31Check {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub const LEMMA31_SLACK: f64 = 1e-12;

pub fn lemma31_check(t: &WeightedFunction, h: &AbelianElement) -> Result<Lemma31Check> {
    let mut overlap = 0.0;
    for (g, w) in t.iter() {
        let shifted = t.group().sub(g, h)?;
        let v = t.weight(&shifted);
        if v > 0.0 {
            overlap += (w * v).sqrt();
        }
    }
    let lhs = (1.0 - overlap).powi(2);
    let rhs = t.translation_defect(h)?;
    Ok(Lemma31Check {
        lhs,
        rhs,
        holds: lhs <= rhs + LEMMA31_SLACK,
    })
}

/// `f ∗ g` on an abelian group.
pub fn convolve(f: &WeightedFunction, g: &WeightedFunction) -> Result<WeightedFunction> {
    if f.group != g.group {
        return Err(Error::Shape("convolution of functions on different groups".into()));
    }
    let group = f.group.clone();
    match (&f.weights, &g.weights) {
        (Weights::Exact(a), Weights::Exact(b)) => {
            let mut acc: BTreeMap<AbelianElement, BigRational> = BTreeMap::new();
            for (x, wx) in f.support.iter().zip(a) {
                for (y, wy) in g.support.iter().zip(b) {
                    *acc.entry(group.add(x, y)?).or_insert_with(BigRational::zero) += wx * wy;
                }
            }
            WeightedFunction::new_exact(group, acc)
        }
        _ => {
            let (a, b) = (f.weights_f64(), g.weights_f64());
            let mut acc: BTreeMap<AbelianElement, f64> = BTreeMap::new();
            for (x, wx) in f.support.iter().zip(&a) {
                for (y, wy) in g.support.iter().zip(&b) {
                    *acc.entry(group.add(x, y)?).or_insert(0.0) += wx * wy;
                }
            }
            let total: f64 = acc.values().sum();
            WeightedFunction::new_float(group, acc.into_iter().map(|(k, v)| (k, v / total)))
        }
    }
}

impl Serialize for WeightedFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let weights: Vec<serde_json::Value> = match &self.weights {
            Weights::Exact(w) => w.iter().map(|q| serde_json::Value::from(q.to_string())).collect(),
            Weights::Float(w) => w.iter().map(|&v| serde_json::Value::from(v)).collect(),
        };
        let mut st = s.serialize_struct("WeightedFunction", 4)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("exact", &self.is_exact())?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("weights", &weights)?;
        st.end()
    }
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
    fn uniform_interval_defect() {
        let t = WeightedFunction::uniform(z(), (0..5).map(e)).unwrap();
        assert_eq!(t.translation_defect_exact(&e(1)).unwrap(), Some(q(2, 5)));
        assert_eq!(defect(&t, &[e(1)]).unwrap(), 0.4);
        assert_eq!(defect_exact(&t, &[e(1), e(-1)]).unwrap(), Some(q(2, 5)));
    }

    #[test]
    fn point_mass_defects() {
        let t = WeightedFunction::point_mass(z(), e(0)).unwrap();
        assert_eq!(defect(&t, &[e(0)]).unwrap(), 0.0);
        assert_eq!(defect(&t, &[e(3)]).unwrap(), 2.0);
        assert_eq!(defect(&t, &[e(0), e(-1)]).unwrap(), 2.0);
    }

    #[test]
    fn interval_defect_is_two_over_length() {
        for len in 1..20 {
            let t = WeightedFunction::uniform(z(), (0..len).map(e)).unwrap();
            assert_eq!(
                defect_exact(&t, &[e(1), e(-1)]).unwrap(),
                Some(q(2, len))
            );
        }
    }

    #[test]
    fn float_and_exact_agree() {
        let t = WeightedFunction::new_exact(z(), [(e(0), q(1, 3)), (e(2), q(1, 2)), (e(3), q(1, 6))])
            .unwrap();
        let f = t.to_float();
        for s in [-3, -1, 0, 1, 2, 5] {
            let a = t.translation_defect(&e(s)).unwrap();
            let b = f.translation_defect(&e(s)).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_invalid_weights() {
        assert!(WeightedFunction::new_exact(z(), [(e(0), q(1, 2))]).is_err());
        assert!(WeightedFunction::new_exact(z(), [(e(0), q(3, 2)), (e(1), q(-1, 2))]).is_err());
        assert!(WeightedFunction::new_float(z(), [(e(0), 0.5), (e(0), 0.5)]).is_err());
        assert!(WeightedFunction::new_float(z(), [(e(0), 1.0 + 1e-9)]).is_err());
        assert!(WeightedFunction::new_float(z(), [(e(0), 1.0 + 1e-14)]).is_ok());
    }

    #[test]
    fn lemma31_examples() {
        let p = WeightedFunction::point_mass(z(), e(0)).unwrap();
        let c = lemma31_check(&p, &e(0)).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (0.0, 0.0, true));
        let c = lemma31_check(&p, &e(2)).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (1.0, 2.0, true));

        let t = WeightedFunction::uniform(z(), (0..5).map(e)).unwrap();
        let c = lemma31_check(&t, &e(1)).unwrap();
        assert!((c.lhs - 0.04).abs() < 1e-15);
        assert!((c.rhs - 0.4).abs() < 1e-15);
        assert!(c.holds);
    }

    #[test]
    fn convolution_of_coin_flips() {
        let f = WeightedFunction::uniform(z(), [e(0), e(1)]).unwrap();
        let g = convolve(&f, &f).unwrap();
        assert_eq!(g.support(), &[e(0), e(1), e(2)]);
        assert_eq!(
            g.weights(),
            &Weights::Exact(vec![q(1, 4), q(1, 2), q(1, 4)])
        );
    }

    #[test]
    fn torsion_defect() {
        let g = FgAbelianGroup::new(0, vec![3]).unwrap();
        let all = g.ball(0);
        let t = WeightedFunction::uniform(g.clone(), all).unwrap();
        let s = g.element(&[], &[1]).unwrap();
        assert_eq!(defect(&t, &[s]).unwrap(), 0.0);
    }
}
