use proptest::prelude::*;

use dualent::crystal::{canned_groups, z2_times_c2, CrystalAutomorphism, CrystalElement};
use dualent::folner::{lemma31_check, WeightedFunction};
use dualent::group::{AbelianAutomorphism, FgAbelianGroup, IntMatrix};
use dualent::laws::{random_unimodular, trial_rng};
use dualent::peters::{peters_growth, unit_cube_corners};
use dualent::spectral::{char_poly, eigen_entropy};

fn mixed() -> FgAbelianGroup {
    FgAbelianGroup::new(2, vec![2, 4]).unwrap()
}

fn mixed_element() -> impl Strategy<Value = Vec<i64>> {
    (-20i64..=20, -20i64..=20, 0i64..2, 0i64..4).prop_map(|(a, b, s, t)| vec![a, b, s, t])
}

fn unimodular(dim: usize, cap: i64) -> impl Strategy<Value = IntMatrix> {
    any::<u64>().prop_map(move |seed| random_unimodular(&mut trial_rng(seed, 0), dim, cap))
}

/// Automorphism of ℤ² ⊕ ℤ/2 ⊕ ℤ/4 with random lattice part and mixing.
fn mixed_automorphism() -> impl Strategy<Value = AbelianAutomorphism> {
    (unimodular(2, 20), prop::sample::select(vec![1i64, 3]), 0i64..2, 0i64..2, 0i64..4, 0i64..4).prop_map(
        |(m, u, x1, x2, y1, y2)| {
            let t = IntMatrix::from_i64(&[&[1, 0], &[0, u]]);
            let mix = IntMatrix::from_i64(&[&[x1, x2], &[y1, y2]]);
            AbelianAutomorphism::new(mixed(), m, t, mix).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abelian_group_laws(a in mixed_element(), b in mixed_element(), c in mixed_element()) {
        let g = mixed();
        let (a, b, c) = (
            g.element_from_flat(&a).unwrap(),
            g.element_from_flat(&b).unwrap(),
            g.element_from_flat(&c).unwrap(),
        );
        let ab = g.add(&a, &b).unwrap();
        prop_assert_eq!(&ab, &g.add(&b, &a).unwrap());
        prop_assert_eq!(g.add(&ab, &c).unwrap(), g.add(&a, &g.add(&b, &c).unwrap()).unwrap());
        prop_assert!(g.add(&a, &g.neg(&a).unwrap()).unwrap().is_zero());
        let twice = g.add(&a, &a).unwrap();
        prop_assert_eq!(g.scale(&a, 3).unwrap(), g.add(&twice, &a).unwrap());
    }

    #[test]
    fn automorphism_is_additive(gamma in mixed_automorphism(), a in mixed_element(), b in mixed_element()) {
        let g = mixed();
        let (a, b) = (g.element_from_flat(&a).unwrap(), g.element_from_flat(&b).unwrap());
        let lhs = gamma.apply(&g.add(&a, &b).unwrap()).unwrap();
        let rhs = g.add(&gamma.apply(&a).unwrap(), &gamma.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn automorphism_compose_and_invert(
        gamma in mixed_automorphism(),
        delta in mixed_automorphism(),
        a in mixed_element(),
    ) {
        let g = mixed();
        let a = g.element_from_flat(&a).unwrap();
        let composed = gamma.compose(&delta).unwrap();
        prop_assert_eq!(composed.apply(&a).unwrap(), gamma.apply(&delta.apply(&a).unwrap()).unwrap());
        let inv = gamma.invert().unwrap();
        prop_assert!(gamma.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&gamma).unwrap().is_identity());
        prop_assert_eq!(gamma.pow(-2).unwrap(), inv.compose(&inv).unwrap());
    }

    #[test]
    fn char_poly_is_a_conjugacy_invariant(m in unimodular(3, 12), s in unimodular(3, 12)) {
        let conj = s.checked_mul(&m).unwrap().checked_mul(&s.inverse().unwrap()).unwrap();
        prop_assert_eq!(char_poly(&m).unwrap(), char_poly(&conj).unwrap());
    }

    #[test]
    fn entropy_of_inverse_and_powers(m in unimodular(2, 30)) {
        let h = eigen_entropy(&m, 1e-12).unwrap().value;
        let hi = eigen_entropy(&m.inverse().unwrap(), 1e-12).unwrap().value;
        let h3 = eigen_entropy(&m.pow(3).unwrap(), 1e-12).unwrap().value;
        prop_assert!((h - hi).abs() < 1e-9);
        prop_assert!((h3 - 3.0 * h).abs() < 1e-7 * (1.0 + h3));
        prop_assert!(h >= 0.0);
    }

    #[test]
    fn growth_series_shape(m in unimodular(2, 6)) {
        let group = FgAbelianGroup::free(2);
        let gamma = AbelianAutomorphism::from_lattice(group.clone(), m).unwrap();
        let series = peters_growth(&gamma, &unit_cube_corners(&group), 6, 200_000).unwrap();
        prop_assert!(series.is_nondecreasing());
        prop_assert_eq!(series.submultiplicativity_violation(), None);
        prop_assert!(series.size(1) <= 4);
    }

    #[test]
    fn defect_is_symmetric_under_negation(
        points in prop::collection::btree_set((-6i64..=6, -6i64..=6), 1..12),
        s in (-4i64..=4, -4i64..=4),
    ) {
        let g = FgAbelianGroup::free(2);
        let t = WeightedFunction::uniform(
            g.clone(),
            points.iter().map(|&(a, b)| g.element(&[a, b], &[]).unwrap()),
        ).unwrap();
        let s = g.element(&[s.0, s.1], &[]).unwrap();
        let forward = t.translation_defect_exact(&s).unwrap().unwrap();
        let backward = t.translation_defect_exact(&g.neg(&s).unwrap()).unwrap().unwrap();
        prop_assert_eq!(&forward, &backward);
        prop_assert!(t.translation_defect(&s).unwrap() <= 2.0 + 1e-12);
    }

    #[test]
    fn overlap_bound_holds(
        weights in prop::collection::vec((-5i64..=5, 0i64..4, 1u32..100), 1..10),
        shift in (-6i64..=6, 0i64..4),
    ) {
        let g = FgAbelianGroup::new(1, vec![4]).unwrap();
        let mut entries = std::collections::BTreeMap::new();
        for (a, t, w) in weights {
            *entries.entry(g.element(&[a], &[t]).unwrap()).or_insert(0.0) += w as f64;
        }
        let total: f64 = entries.values().sum();
        let t = WeightedFunction::new_float(g.clone(), entries.into_iter().map(|(x, w)| (x, w / total))).unwrap();
        let check = lemma31_check(&t, &g.element(&[shift.0], &[shift.1]).unwrap()).unwrap();
        prop_assert!(check.holds, "{} > {}", check.lhs, check.rhs);
    }

    #[test]
    fn crystal_group_laws(
        which in 0usize..7,
        seeds in prop::collection::vec((0usize..8, prop::collection::vec(-6i64..=6, 2)), 3),
    ) {
        let groups = canned_groups();
        let g = &groups[which % groups.len()].group;
        let elems: Vec<CrystalElement> = seeds
            .into_iter()
            .map(|(h, v)| CrystalElement { h: h % g.order(), lattice: v[..g.rank()].to_vec() })
            .collect();
        let (x, y, z) = (&elems[0], &elems[1], &elems[2]);
        let xy = g.multiply(x, y).unwrap();
        prop_assert_eq!(g.multiply(&xy, z).unwrap(), g.multiply(x, &g.multiply(y, z).unwrap()).unwrap());
        prop_assert_eq!(g.multiply(x, &g.inverse(x).unwrap()).unwrap(), g.identity());
        prop_assert_eq!(g.inverse(&xy).unwrap(), g.multiply(&g.inverse(y).unwrap(), &g.inverse(x).unwrap()).unwrap());
    }

    #[test]
    fn crystal_automorphism_algebra(
        sa in unimodular(2, 10),
        sb in unimodular(2, 10),
        h in 0usize..2,
        v in prop::collection::vec(-6i64..=6, 2),
    ) {
        let g = z2_times_c2().group;
        let a = CrystalAutomorphism::new(&g, vec![0, 1], sa, vec![vec![0, 0]; 2]).unwrap();
        let b = CrystalAutomorphism::new(&g, vec![0, 1], sb, vec![vec![0, 0]; 2]).unwrap();
        let x = CrystalElement { h, lattice: v };
        let ab = a.compose(&g, &b).unwrap();
        prop_assert_eq!(ab.apply(&g, &x).unwrap(), a.apply(&g, &b.apply(&g, &x).unwrap()).unwrap());
        let back = a.inverse(&g).unwrap().apply(&g, &a.apply(&g, &x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}
