//! Result records shared by the three entropy routes.

use serde::Serialize;

use crate::spectral::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Peters,
    Rank,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Spectral {
        char_poly: IntPolynomial,
        /// `[re, im]` pairs, sorted by decreasing modulus.
        roots: Vec<[f64; 2]>,
        root_moduli: Vec<f64>,
    },
    Peters {
        sizes: Vec<u64>,
        /// `log(s_N)/N`, an upper bound on the growth rate of the chosen set.
        naive_rate: f64,
        tail_window: usize,
        capped: bool,
        zero_adjoined: bool,
    },
    Rank {
        ranks: Vec<usize>,
        delta: f64,
    },
}

/// An entropy value in nats together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}
