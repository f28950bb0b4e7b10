//! Defects, amenable δ-ranks and explicit Følner functions.
//!
//! Everything here uses the trivial action `s.T(g) = T(s⁻¹g)`; for amenable
//! groups the δ-rank over any amenable action equals the rank over this one.

mod construct;
mod lp;
mod rank;
mod weighted;

pub use construct::{
    adapted_basis, box_folner, box_upper_bound, choose_folner_constant, convolution_tower,
    iterate_inclusion_holds, lemma61_check, parallelepiped_folner, symmetric_difference_ratio,
    tower_defects, AdaptedBasis, Lemma61Report, Parallelepiped, TowerDefect, ADAPTED_CHECK_MAX,
    MEMBERSHIP_TOL,
};
pub use rank::{
    min_rank_bruteforce, min_rank_bruteforce_with, min_rank_in_window, min_rank_search, LpMode,
    RankCertificate, SearchOutcome, SearchSpace, EXACT_MAX_CANDIDATES, EXACT_MAX_SUPPORT,
    FLOAT_MARGIN,
};
pub use weighted::{
    convolve, defect, defect_exact, lemma31_check, Lemma31Check, WeightedFunction, Weights,
    FLOAT_SUM_TOL, LEMMA31_SLACK,
};
