//! Small crystallographic groups used in tests, examples and the CLI.

use super::{CrystalGroup, PointGroup};
use crate::group::IntMatrix;

#[derive(Clone, Debug)]
pub struct CannedGroup {
    pub name: &'static str,
    pub group: CrystalGroup,
}

fn build(
    name: &'static str,
    rank: usize,
    point: &[&str],
    action: &[(&str, IntMatrix)],
    cocycle: &[(&str, &str, Vec<i64>)],
) -> CannedGroup {
    let group = CrystalGroup::from_named(rank, PointGroup::cyclic(point), action, cocycle)
        .unwrap_or_else(|e| panic!("canned group {name} is invalid: {e}"));
    CannedGroup { name, group }
}

/// `ℤ ⋊ ℤ/2` with the flip acting by `−1`.
pub fn d_infinity() -> CannedGroup {
    build("d_infinity", 1, &["1", "f"], &[("f", IntMatrix::from_i64(&[&[-1]]))], &[])
}

/// `ℤ × ℤ/2`.
pub fn z_times_c2() -> CannedGroup {
    build("z_times_c2", 1, &["1", "f"], &[], &[])
}

/// `ℤ² × ℤ/2`.
pub fn z2_times_c2() -> CannedGroup {
    build("z2_times_c2", 2, &["1", "f"], &[], &[])
}

/// `ℤ` presented as an extension of `ℤ/2` by `2ℤ`: `f² = e₁`.
pub fn nonsplit_z() -> CannedGroup {
    build("nonsplit_z", 1, &["1", "f"], &[], &[("f", "f", vec![1])])
}

/// Wallpaper group with a half-turn.
pub fn p2() -> CannedGroup {
    build("p2", 2, &["1", "f"], &[("f", IntMatrix::diag(&[-1, -1]))], &[])
}

/// Wallpaper group with a glide reflection.
pub fn pg() -> CannedGroup {
    build(
        "pg",
        2,
        &["1", "f"],
        &[("f", IntMatrix::diag(&[1, -1]))],
        &[("f", "f", vec![1, 0])],
    )
}

/// Wallpaper group with a quarter-turn.
pub fn p4() -> CannedGroup {
    let r = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let r2 = r.checked_mul(&r).expect("small");
    let r3 = r2.checked_mul(&r).expect("small");
    build("p4", 2, &["1", "r", "r2", "r3"], &[("r", r), ("r2", r2), ("r3", r3)], &[])
}

pub fn all() -> Vec<CannedGroup> {
    vec![d_infinity(), z_times_c2(), z2_times_c2(), nonsplit_z(), p2(), pg(), p4()]
}

pub fn by_name(name: &str) -> Option<CannedGroup> {
    all().into_iter().find(|g| g.name == name)
}
