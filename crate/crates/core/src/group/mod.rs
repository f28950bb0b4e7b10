//! Exact arithmetic for finitely generated abelian groups and their automorphisms.

mod abelian;
mod matrix;
mod snf;

pub use abelian::{AbelianAutomorphism, AbelianElement, FgAbelianGroup};
pub use matrix::IntMatrix;
pub use snf::{hermite_normal_form, smith_normal_form, SmithForm};
