//! Ideal membership over ℚ via reduced Gröbner bases.

mod buchberger;
mod division;
mod ideal;

pub use buchberger::{Budget, GroebnerBasis};
pub use division::{divide, reduce, Division};
pub use ideal::{buchberger, ideal_contains, ideal_member, verify_lift, Ideal};
