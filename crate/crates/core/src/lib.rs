pub mod analyzer;
pub mod cli;
pub mod curve;
pub mod double;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod registry;
pub mod tangent;

pub use error::{Error, Result};

#[cfg(test)]
mod properties;
