//! Exact multivariate polynomial arithmetic over ℚ.

mod monomial;
mod parse;
mod polynomial;
mod ring;
mod univariate;

pub use monomial::Monomial;
pub(crate) use parse::parse_rational;
pub(crate) use polynomial::same_ring;
pub use polynomial::{ratio, rational, Polynomial, Rational};
pub use ring::{MonomialOrder, Ring, RingContext, DEFAULT_EXPONENT_CAP};
pub use univariate::{order_of_vanishing, Order, UnivariatePoly};

/// Parses a rational literal such as `3`, `-2/5`.
pub fn parse_rational_literal(text: &str) -> crate::error::Result<Rational> {
    parse_rational(text)
}
