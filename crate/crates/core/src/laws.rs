//! Seeded checks of structural entropy and rank laws over random and fixed
//! instances. Every failure carries the inputs needed to rerun it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::folner::{lemma31_check, min_rank_bruteforce, min_rank_in_window, LpMode, WeightedFunction};
use crate::group::{AbelianAutomorphism, AbelianElement, FgAbelianGroup, IntMatrix};
use crate::peters::{growth_rate_estimate, peters_growth, unit_cube_corners, FiniteSubset, DEFAULT_CAP};
use crate::spectral::{char_poly, eigen_entropy};

pub const ENTROPY_TOL: f64 = 1e-9;
pub const PETERS_TOL: f64 = 0.15;
pub const PETERS_N: usize = 12;
pub const ENTRY_CAP: i64 = 50;
pub const MAX_FACTORS: usize = 8;
pub const DEFAULT_TRIALS: usize = 100;
pub const LEMMA31_TRIALS: usize = 1000;
pub const COORDINATE_CHANGE_MAX_SUPPORT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawCase {
    pub instance: usize,
    pub inputs: Value,
    pub detail: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub seed: Option<u64>,
    pub instances: usize,
    pub failures: Vec<LawCase>,
    pub inconclusive: Vec<LawCase>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl LawReport {
    pub fn verdict(&self) -> Verdict {
        if !self.failures.is_empty() {
            Verdict::Fail
        } else if !self.inconclusive.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_line(&self) -> String {
        let verdict = match self.verdict() {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        format!(
            "{verdict:<12} {:<24} instances={:<5} failures={} inconclusive={} max_deviation={:.3e} tol={:.1e}",
            self.law,
            self.instances,
            self.failures.len(),
            self.inconclusive.len(),
            self.max_deviation,
            self.tolerance
        )
    }
}

enum Outcome {
    Pass(f64),
    Fail(LawCase),
    Inconclusive(LawCase),
}

fn collect(law: &str, seed: Option<u64>, tolerance: f64, outcomes: Vec<Outcome>) -> LawReport {
    let mut report = LawReport {
        law: law.to_string(),
        seed,
        instances: outcomes.len(),
        failures: Vec::new(),
        inconclusive: Vec::new(),
        max_deviation: 0.0,
        tolerance,
    };
    for o in outcomes {
        let dev = match &o {
            Outcome::Pass(d) => *d,
            Outcome::Fail(c) | Outcome::Inconclusive(c) => c.deviation,
        };
        if dev.is_finite() {
            report.max_deviation = report.max_deviation.max(dev);
        }
        match o {
            Outcome::Pass(_) => {}
            Outcome::Fail(c) => report.failures.push(c),
            Outcome::Inconclusive(c) => report.inconclusive.push(c),
        }
    }
    report
}

fn error_case(instance: usize, inputs: Value, e: Error) -> Outcome {
    Outcome::Fail(LawCase {
        instance,
        inputs,
        detail: format!("computation error: {e}"),
        deviation: f64::INFINITY,
    })
}

/// Independent stream per trial so that results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Product of at most [`MAX_FACTORS`] transvections and signed permutations,
/// skipping any factor that would push an entry above `cap`.
pub fn random_unimodular<R: Rng>(rng: &mut R, dim: usize, cap: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(dim);
    if dim == 0 {
        return m;
    }
    let factors = rng.gen_range(1..=MAX_FACTORS);
    for _ in 0..factors {
        let f = if dim > 1 && rng.gen_bool(0.75) {
            let i = rng.gen_range(0..dim);
            let mut j = rng.gen_range(0..dim - 1);
            if j >= i {
                j += 1;
            }
            let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
            let mut t = IntMatrix::identity(dim);
            t.set(i, j, c.into());
            t
        } else {
            let mut perm: Vec<usize> = (0..dim).collect();
            for i in (1..dim).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut t = IntMatrix::zeros(dim, dim);
            for (i, &j) in perm.iter().enumerate() {
                t.set(i, j, if rng.gen_bool(0.5) { 1 } else { -1 }.into());
            }
            t
        };
        let next = &m * &f;
        if next.max_abs_entry() <= cap.into() {
            m = next;
        }
    }
    m
}

fn entropy(m: &IntMatrix) -> Result<f64> {
    Ok(eigen_entropy(m, crate::spectral::DEFAULT_ROOT_TOL)?.value)
}

pub fn check_power_law(trials: usize, seed: u64) -> LawReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let dim = rng.gen_range(2..=4);
            let m = random_unimodular(&mut rng, dim, ENTRY_CAP);
            let k: i64 = rng.gen_range(-3..=3);
            let inputs = json!({ "trial": t, "seed": seed, "matrix": m, "k": k });
            let run = || -> Result<f64> {
                let lhs = entropy(&m.pow(k)?)?;
                let rhs = k.unsigned_abs() as f64 * entropy(&m)?;
                Ok((lhs - rhs).abs())
            };
            match run() {
                Ok(d) if d <= ENTROPY_TOL => Outcome::Pass(d),
                Ok(d) => Outcome::Fail(LawCase {
                    instance: t,
                    inputs,
                    detail: "entropy of the power differs from |k| times the entropy".into(),
                    deviation: d,
                }),
                Err(e) => error_case(t, inputs, e),
            }
        })
        .collect();
    collect("power_law", Some(seed), ENTROPY_TOL, outcomes)
}

pub fn check_conjugacy(trials: usize, seed: u64) -> LawReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let dim = rng.gen_range(2..=4);
            let m = random_unimodular(&mut rng, dim, ENTRY_CAP);
            let s = random_unimodular(&mut rng, dim, ENTRY_CAP);
            let inputs = json!({ "trial": t, "seed": seed, "matrix": m, "conjugator": s });
            let run = || -> Result<(bool, f64)> {
                let conj = s.checked_mul(&m)?.checked_mul(&s.inverse()?)?;
                let same = char_poly(&conj)? == char_poly(&m)?;
                Ok((same, (entropy(&conj)? - entropy(&m)?).abs()))
            };
            match run() {
                Ok((true, d)) => Outcome::Pass(d),
                Ok((false, d)) => Outcome::Fail(LawCase {
                    instance: t,
                    inputs,
                    detail: "characteristic polynomials differ after conjugation".into(),
                    deviation: d,
                }),
                Err(e) => error_case(t, inputs, e),
            }
        })
        .collect();
    collect("conjugacy", Some(seed), 0.0, outcomes)
}

pub fn check_product_bounds(trials: usize, seed: u64) -> LawReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let d1 = rng.gen_range(1..=3);
            let d2 = rng.gen_range(1..=3);
            let m1 = random_unimodular(&mut rng, d1, ENTRY_CAP);
            let m2 = random_unimodular(&mut rng, d2, ENTRY_CAP);
            let inputs = json!({ "trial": t, "seed": seed, "first": m1, "second": m2 });
            let run = || -> Result<(f64, f64, f64)> {
                Ok((entropy(&m1)?, entropy(&m2)?, entropy(&m1.direct_sum(&m2))?))
            };
            match run() {
                Ok((h1, h2, h)) => {
                    let dev = (h - (h1 + h2)).abs();
                    let sandwich = h1.max(h2) <= h + ENTROPY_TOL && h <= h1 + h2 + ENTROPY_TOL;
                    if sandwich && dev <= ENTROPY_TOL {
                        Outcome::Pass(dev)
                    } else {
                        Outcome::Fail(LawCase {
                            instance: t,
                            inputs,
                            detail: format!("h1 = {h1}, h2 = {h2}, product = {h}"),
                            deviation: dev,
                        })
                    }
                }
                Err(e) => error_case(t, inputs, e),
            }
        })
        .collect();
    collect("product_bounds", Some(seed), ENTROPY_TOL, outcomes)
}

/// `G → H` keeping the listed lattice coordinates and dropping torsion.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientInstance {
    pub group: FgAbelianGroup,
    pub kept: Vec<usize>,
    pub omega: Vec<AbelianElement>,
    pub delta: f64,
    pub radius: i64,
}

impl QuotientInstance {
    fn quotient(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.kept.len())
    }

    fn project(&self, x: &AbelianElement) -> Result<AbelianElement> {
        let lattice: Vec<i64> = self.kept.iter().map(|&i| x.lattice()[i]).collect();
        self.quotient().element(&lattice, &[])
    }
}

fn el(g: &FgAbelianGroup, lattice: &[i64], torsion: &[i64]) -> AbelianElement {
    g.element(lattice, torsion).expect("fixed instance element")
}

pub fn quotient_rank_instances() -> Vec<QuotientInstance> {
    let z2 = FgAbelianGroup::free(2);
    let zc2 = FgAbelianGroup::new(1, vec![2]).expect("valid");
    let inst = |group: &FgAbelianGroup, omega: Vec<AbelianElement>, delta: f64, radius: i64| QuotientInstance {
        group: group.clone(),
        kept: vec![0],
        omega,
        delta,
        radius,
    };
    vec![
        inst(&z2, vec![z2.zero()], 0.5, 2),
        inst(&z2, vec![el(&z2, &[1, 0], &[]), el(&z2, &[-1, 0], &[])], 0.5, 2),
        inst(&z2, vec![el(&z2, &[0, 1], &[]), el(&z2, &[0, -1], &[])], 0.5, 2),
        inst(&z2, vec![el(&z2, &[1, 1], &[])], 1.0, 2),
        inst(&zc2, vec![el(&zc2, &[1], &[0])], 0.5, 4),
        inst(&zc2, vec![el(&zc2, &[0], &[1])], 0.5, 4),
        inst(&zc2, vec![el(&zc2, &[1], &[1])], 0.5, 4),
    ]
}

fn rank_or_none(
    group: &FgAbelianGroup,
    omega: &[AbelianElement],
    delta: f64,
    radius: i64,
    max_support: usize,
) -> Result<Option<usize>> {
    match min_rank_bruteforce(group, omega, delta, radius, max_support) {
        Ok(c) => Ok(Some(c.rank)),
        Err(Error::RankSearchExhausted { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `ra(ω, δ) ≥ ra(π(ω), δ)`.
pub fn check_quotient_rank(instances: &[QuotientInstance]) -> LawReport {
    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let inputs = serde_json::to_value(inst).unwrap_or(Value::Null);
            let run = || -> Result<(Option<usize>, Option<usize>)> {
                let projected = inst.omega.iter().map(|x| inst.project(x)).collect::<Result<Vec<_>>>()?;
                let window = (2 * inst.radius as usize + 1).pow(inst.group.rank() as u32);
                let g = rank_or_none(&inst.group, &inst.omega, inst.delta, inst.radius, window * inst.group.torsion_size() as usize)?;
                let h = rank_or_none(&inst.quotient(), &projected, inst.delta, inst.radius, 2 * inst.radius as usize + 1)?;
                Ok((g, h))
            };
            rank_verdict(i, inputs, run(), |g, h| g >= h, "rank in G is below rank of the image")
        })
        .collect();
    collect("quotient_rank", None, 0.0, outcomes)
}

fn rank_verdict(
    i: usize,
    inputs: Value,
    res: Result<(Option<usize>, Option<usize>)>,
    ok: impl Fn(usize, usize) -> bool,
    what: &str,
) -> Outcome {
    match res {
        Ok((Some(a), Some(b))) if ok(a, b) => Outcome::Pass(0.0),
        Ok((Some(a), Some(b))) => Outcome::Fail(LawCase {
            instance: i,
            inputs,
            detail: format!("{what}: {a} vs {b}"),
            deviation: (a as f64 - b as f64).abs(),
        }),
        Ok((a, b)) => Outcome::Inconclusive(LawCase {
            instance: i,
            inputs,
            detail: format!("search window exhausted on one side: {a:?} vs {b:?}"),
            deviation: 0.0,
        }),
        Err(e) => error_case(i, inputs, e),
    }
}

/// `ω ⊂ ℤ × {0} ⊆ ℤ²`, given by first coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupInstance {
    pub omega: Vec<i64>,
    pub delta: f64,
    pub radius: i64,
}

pub fn subgroup_rank_instances() -> Vec<SubgroupInstance> {
    let inst = |omega: Vec<i64>, delta: f64, radius: i64| SubgroupInstance { omega, delta, radius };
    vec![
        inst(vec![0], 0.5, 2),
        inst(vec![1, -1], 0.5, 2),
        inst(vec![1], 2.1, 2),
        inst(vec![1, 2], 1.5, 2),
        inst(vec![1], 1.0, 2),
    ]
}

/// Rank in `H` at most rank in `G`, windows matched by intersecting the `G`-ball with `H`.
pub fn check_subgroup_rank(instances: &[SubgroupInstance]) -> LawReport {
    let z = FgAbelianGroup::free(1);
    let z2 = FgAbelianGroup::free(2);
    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let inputs = serde_json::to_value(inst).unwrap_or(Value::Null);
            let run = || -> Result<(Option<usize>, Option<usize>)> {
                let in_h = inst.omega.iter().map(|&a| z.element(&[a], &[])).collect::<Result<Vec<_>>>()?;
                let in_g = inst.omega.iter().map(|&a| z2.element(&[a, 0], &[])).collect::<Result<Vec<_>>>()?;
                let side = 2 * inst.radius as usize + 1;
                let h = rank_or_none(&z, &in_h, inst.delta, inst.radius, side)?;
                let g = rank_or_none(&z2, &in_g, inst.delta, inst.radius, side * side)?;
                Ok((h, g))
            };
            rank_verdict(i, inputs, run(), |h, g| h <= g, "rank in the subgroup exceeds rank in G")
        })
        .collect();
    collect("subgroup_rank", None, 0.0, outcomes)
}

/// Rank is non-increasing in `δ` and non-decreasing in `ω`, within one window.
pub fn check_rank_monotonicity() -> LawReport {
    let z = FgAbelianGroup::free(1);
    let deltas = [0.6, 0.8, 1.0, 1.5, 2.1];
    let omegas: [&[i64]; 4] = [&[1], &[1, -1], &[1, 2], &[1, 2, 3]];
    let mut grid = Vec::new();
    for (oi, o) in omegas.iter().enumerate() {
        for (di, &d) in deltas.iter().enumerate() {
            grid.push((oi, di, o.to_vec(), d));
        }
    }
    let radius = 8;
    let ranks: Vec<Result<Option<usize>>> = grid
        .par_iter()
        .map(|(_, _, o, d)| {
            let omega = o.iter().map(|&a| z.element(&[a], &[])).collect::<Result<Vec<_>>>()?;
            rank_or_none(&z, &omega, *d, radius, 2 * radius as usize + 1)
        })
        .collect();
    let at = |oi: usize, di: usize| &ranks[oi * deltas.len() + di];
    let mut outcomes = Vec::new();
    for (idx, (oi, di, o, d)) in grid.iter().enumerate() {
        let inputs = json!({ "omega": o, "delta": d, "radius": radius });
        let mut comparisons = Vec::new();
        if *di + 1 < deltas.len() {
            comparisons.push((at(*oi, *di + 1), "larger delta"));
        }
        // ω sets are nested along the list except {1,−1} ⊄ {1,2}
        if *oi + 1 < omegas.len() && omegas[*oi].iter().all(|x| omegas[*oi + 1].contains(x)) {
            comparisons.push((at(*oi + 1, *di), "larger omega"));
        }
        if *oi == 0 {
            comparisons.push((at(2, *di), "larger omega"));
        }
        let mine = at(*oi, *di);
        let mut outcome = Outcome::Pass(0.0);
        for (other, label) in comparisons {
            let (a, b) = match (mine, other) {
                (Err(e), _) | (_, Err(e)) => {
                    outcome = error_case(idx, inputs.clone(), e.clone());
                    break;
                }
                (Ok(a), Ok(b)) => (*a, *b),
            };
            let ok = match label {
                "larger delta" => matches!((a, b), (Some(a), Some(b)) if b <= a),
                _ => matches!((a, b), (Some(a), Some(b)) if a <= b),
            };
            if !ok {
                let both = a.is_some() && b.is_some();
                let case = LawCase {
                    instance: idx,
                    inputs: inputs.clone(),
                    detail: format!("{label}: {a:?} vs {b:?}"),
                    deviation: 1.0,
                };
                outcome = if both { Outcome::Fail(case) } else { Outcome::Inconclusive(case) };
                break;
            }
        }
        outcomes.push(outcome);
    }
    collect("rank_monotonicity", None, 0.0, outcomes)
}

/// `ra(σ(ω), δ) = ra(ω, δ)` with the window transported by `σ`.
pub fn check_coordinate_change(trials: usize, seed: u64) -> LawReport {
    let z2 = FgAbelianGroup::free(2);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let sigma = random_unimodular(&mut rng, 2, 5);
            let v = [rng.gen_range(-1..=1), rng.gen_range(-1..=1)];
            let omega = vec![el(&z2, &v, &[])];
            let delta = [0.6, 1.0, 1.5][rng.gen_range(0..3)];
            let radius = 2;
            let inputs = json!({ "trial": t, "seed": seed, "sigma": sigma, "omega": omega, "delta": delta });
            let run = || -> Result<(Option<usize>, Option<usize>)> {
                let auto = AbelianAutomorphism::from_lattice(z2.clone(), sigma.clone())?;
                let window = z2.ball(radius);
                let moved_window = window.iter().map(|x| auto.apply(x)).collect::<Result<Vec<_>>>()?;
                let moved_omega = omega.iter().map(|x| auto.apply(x)).collect::<Result<Vec<_>>>()?;
                let max = COORDINATE_CHANGE_MAX_SUPPORT;
                let rank = |w: Vec<AbelianElement>, o: &[AbelianElement]| {
                    match min_rank_in_window(&z2, w, o, delta, max, LpMode::Auto, radius, false) {
                        Ok(c) => Ok(Some(c.rank)),
                        Err(Error::RankSearchExhausted { .. }) => Ok(None),
                        Err(e) => Err(e),
                    }
                };
                Ok((rank(window, &omega)?, rank(moved_window, &moved_omega)?))
            };
            match run() {
                Ok((a, b)) if a == b => Outcome::Pass(0.0),
                Ok((a, b)) => Outcome::Fail(LawCase {
                    instance: t,
                    inputs,
                    detail: format!("rank changed under the coordinate change: {a:?} vs {b:?}"),
                    deviation: 1.0,
                }),
                Err(e) => error_case(t, inputs, e),
            }
        })
        .collect();
    collect("coordinate_change", Some(seed), 0.0, outcomes)
}

#[derive(Clone, Debug, Serialize)]
pub struct PetersInstance {
    pub name: String,
    pub matrix: IntMatrix,
    /// Lattice points of `E`; `None` means the unit-cube corners.
    pub set: Option<Vec<Vec<i64>>>,
}

pub fn peters_instances() -> Vec<PetersInstance> {
    let cat = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
    let square = IntMatrix::from_i64(&[&[2, 3], &[3, 5]]);
    let inst = |name: &str, matrix: IntMatrix, set: Option<Vec<Vec<i64>>>| PetersInstance {
        name: name.into(),
        matrix,
        set,
    };
    let three_by_three: Vec<Vec<i64>> = (0..3)
        .flat_map(|x| (0..3).map(move |y| vec![x, y]))
        .collect();
    vec![
        inst("cat", cat, None),
        inst("cat_squared", square.clone(), None),
        inst("cat_squared_3x3", square, Some(three_by_three)),
        inst("companion_t3_t_1", IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]), None),
        inst("identity", IntMatrix::identity(2), None),
        inst("quarter_turn", IntMatrix::from_i64(&[&[0, -1], &[1, 0]]), None),
    ]
}

/// Smallest `k ≤ 24` with `mᵏ = I`.
fn finite_order(m: &IntMatrix) -> Option<usize> {
    let mut acc = m.clone();
    for k in 1..=24 {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.checked_mul(m).ok()?;
    }
    None
}

/// Tail-difference growth rate against the spectral value.
///
/// When `log|E ∪ {0}|` is itself below the spectral value minus the tolerance
/// no finite `N` can agree, and the instance is INCONCLUSIVE. For a matrix of
/// finite order every `γⁱE` lies in the ball of radius `r = max |γⁱe|`, so
/// `s_n ≤ (2nr + 1)ᵖ`; that polynomial bound is what is checked there, since
/// the tail estimate of a polynomially growing series only tends to 0.
pub fn check_peters_vs_spectral(instances: &[PetersInstance], n: usize) -> LawReport {
    let outcomes = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let inputs = serde_json::to_value(inst).unwrap_or(Value::Null);
            let run = || -> Result<Outcome> {
                let p = inst.matrix.rows();
                let group = FgAbelianGroup::free(p);
                let gamma = AbelianAutomorphism::from_lattice(group.clone(), inst.matrix.clone())?;
                let e = match &inst.set {
                    None => unit_cube_corners(&group),
                    Some(pts) => FiniteSubset::new(
                        group.clone(),
                        pts.iter().map(|v| group.element(v, &[])).collect::<Result<Vec<_>>>()?,
                    )?,
                };
                let series = peters_growth(&gamma, &e, n, DEFAULT_CAP)?;
                let est = growth_rate_estimate(&series)?.value;
                let spec = entropy(&inst.matrix)?;
                let case = |detail: String, deviation: f64| LawCase {
                    instance: i,
                    inputs: inputs.clone(),
                    detail,
                    deviation,
                };
                if let Some(order) = finite_order(&inst.matrix) {
                    let mut r = 0;
                    let mut power = gamma.clone();
                    for _ in 0..order {
                        for x in e.iter() {
                            r = r.max(power.apply(x)?.lattice_norm());
                        }
                        power = power.compose(&gamma)?;
                    }
                    let worst = series
                        .sizes
                        .iter()
                        .enumerate()
                        .map(|(k, &s)| s as f64 / ((2 * (k as i64 + 1) * r + 1) as f64).powi(p as i32))
                        .fold(0.0, f64::max);
                    return Ok(if spec == 0.0 && worst <= 1.0 {
                        Outcome::Pass(0.0)
                    } else {
                        Outcome::Fail(case(
                            format!("finite order {order}: spectral {spec}, size over polynomial bound {worst:.3}"),
                            spec.max(worst - 1.0),
                        ))
                    });
                }
                let dev = (est - spec).abs();
                if dev <= PETERS_TOL {
                    return Ok(Outcome::Pass(dev));
                }
                let size = e.len() + usize::from(!e.contains(&group.zero()));
                let detail = format!("growth estimate {est:.6} against spectral {spec:.6}");
                Ok(if (size as f64).ln() < spec - PETERS_TOL {
                    Outcome::Inconclusive(case(
                        format!("{detail}; every rate is at most log|E| = {:.6}", (size as f64).ln()),
                        dev,
                    ))
                } else {
                    Outcome::Fail(case(detail, dev))
                })
            };
            run().unwrap_or_else(|e| error_case(i, inputs.clone(), e))
        })
        .collect();
    collect("peters_vs_spectral", None, PETERS_TOL, outcomes)
}

pub fn check_lemma31(trials: usize, seed: u64) -> LawReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let p = rng.gen_range(1..=2);
            let group = FgAbelianGroup::free(p);
            let point = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..p).map(|_| rng.gen_range(-3..=3)).collect() };
            let size = rng.gen_range(1..=8);
            let mut entries: Vec<(Vec<i64>, f64)> = Vec::new();
            for _ in 0..size {
                let x = point(&mut rng);
                if !entries.iter().any(|(y, _)| *y == x) {
                    entries.push((x, rng.gen_range(0.01..1.0)));
                }
            }
            let total: f64 = entries.iter().map(|(_, w)| w).sum();
            let h = point(&mut rng);
            let inputs = json!({ "trial": t, "seed": seed, "support": entries, "h": h });
            let run = || -> Result<(bool, f64)> {
                let f = WeightedFunction::new_float(
                    group.clone(),
                    entries
                        .iter()
                        .map(|(x, w)| Ok((group.element(x, &[])?, w / total)))
                        .collect::<Result<Vec<_>>>()?,
                )?;
                let c = lemma31_check(&f, &group.element(&h, &[])?)?;
                Ok((c.holds, (c.lhs - c.rhs).max(0.0)))
            };
            match run() {
                Ok((true, d)) => Outcome::Pass(d),
                Ok((false, d)) => Outcome::Fail(LawCase {
                    instance: t,
                    inputs,
                    detail: "squared Hellinger-type overlap exceeds the defect".into(),
                    deviation: d,
                }),
                Err(e) => error_case(t, inputs, e),
            }
        })
        .collect();
    collect("lemma31", Some(seed), crate::folner::LEMMA31_SLACK, outcomes)
}

pub const SUITES: &[&str] = &["all", "spectral", "rank", "cross"];

/// Runs a named suite. Reports are ordered as listed here.
pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<LawReport>> {
    let spectral = |out: &mut Vec<LawReport>| {
        out.push(check_power_law(DEFAULT_TRIALS, seed));
        out.push(check_conjugacy(DEFAULT_TRIALS, seed));
        out.push(check_product_bounds(DEFAULT_TRIALS, seed));
    };
    let rank = |out: &mut Vec<LawReport>| {
        out.push(check_quotient_rank(&quotient_rank_instances()));
        out.push(check_subgroup_rank(&subgroup_rank_instances()));
        out.push(check_rank_monotonicity());
        out.push(check_coordinate_change(10, seed));
    };
    let cross = |out: &mut Vec<LawReport>| {
        out.push(check_peters_vs_spectral(&peters_instances(), PETERS_N));
        out.push(check_lemma31(LEMMA31_TRIALS, seed));
    };
    let mut out = Vec::new();
    match suite {
        "all" => {
            spectral(&mut out);
            rank(&mut out);
            cross(&mut out);
        }
        "spectral" => spectral(&mut out),
        "rank" => rank(&mut out),
        "cross" => cross(&mut out),
        other => {
            return Err(Error::Invalid(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(out)
}
