pub mod error;
pub mod estimate;
pub mod cli;
pub mod crystal;
pub mod folner;
pub mod group;
pub mod laws;
pub mod peters;
pub mod spectral;

pub use error::{Error, Result};
pub use estimate::{Diagnostics, EntropyEstimate, Method};
