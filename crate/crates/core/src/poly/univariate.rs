use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::polynomial::write_rational;
use crate::poly::{MonomialOrder, Polynomial, Rational, RingContext};

/// Order of vanishing at `s = 0`; the zero polynomial has infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("∞"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u32(*n),
            Order::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// Dense polynomial in one variable `s`, coefficient `i` for degree `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnivariatePoly {
    coeffs: Vec<Rational>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    /// `c · s^e`
    pub fn monomial(c: Rational, e: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); e as usize];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> Rational {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(0)
    }

    /// Least degree with a nonzero coefficient.
    pub fn order_of_vanishing(&self) -> Order {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(Order::Infinite, |i| Order::Finite(i as u32))
    }

    /// Single-term curve component `c·s^e`, if it is one.
    pub fn as_monomial(&self) -> Option<(Rational, u32)> {
        let nz: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        match nz.as_slice() {
            [(e, c)] => Some(((*c).clone(), *e as u32)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coefficient(i) + other.coefficient(i))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Reads a polynomial in the single variable `s`.
    pub fn parse(text: &str) -> Result<Self> {
        let ring = RingContext::new(&["s"], MonomialOrder::GrevLex)?;
        Self::from_polynomial(&Polynomial::parse(text, &ring)?)
    }

    /// Converts a polynomial of a one-variable ring.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        if p.ring().arity() != 1 {
            return Err(Error::RingMismatch(format!(
                "expected a one-variable ring, got {}",
                p.ring()
            )));
        }
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponents()[0] as usize] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    pub fn to_polynomial(&self, ring: &crate::poly::Ring) -> Polynomial {
        debug_assert_eq!(ring.arity(), 1);
        Polynomial::from_terms(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (crate::poly::Monomial::new(vec![i as u32]), c.clone())),
        )
    }
}

pub fn order_of_vanishing(p: &UnivariatePoly) -> Order {
    p.order_of_vanishing()
}

impl PartialOrd for UnivariatePoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnivariatePoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for UnivariatePoly {
    /// Ascending degree, so the leading printed term is the one that decides
    /// the order of vanishing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if i == 0 {
                write_rational(f, &abs)?;
                continue;
            }
            if !abs.is_one() {
                write_rational(f, &abs)?;
            }
            f.write_str("s")?;
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    #[test]
    fn orders() {
        let p = UnivariatePoly::parse("3s^2 + 5s^4").unwrap();
        assert_eq!(p.order_of_vanishing(), Order::Finite(2));
        // (2^3 - 1) s^3
        let q = UnivariatePoly::monomial(rational(2i64.pow(3) - 1), 3);
        assert_eq!(order_of_vanishing(&q), Order::Finite(3));
        assert_eq!(UnivariatePoly::zero().order_of_vanishing(), Order::Infinite);
        assert!(Order::Finite(100) < Order::Infinite);
    }

    #[test]
    fn display_round_trip() {
        for text in ["s^4", "2s^4 - 1/3s", "0", "7 + s"] {
            let p = UnivariatePoly::parse(text).unwrap();
            assert_eq!(UnivariatePoly::parse(&p.to_string()).unwrap(), p);
        }
        assert_eq!(
            UnivariatePoly::parse("2s^2 + s").unwrap().to_string(),
            "s + 2s^2"
        );
    }

    #[test]
    fn monomial_detection() {
        assert_eq!(
            UnivariatePoly::parse("2s^3").unwrap().as_monomial(),
            Some((rational(2), 3))
        );
        assert_eq!(
            UnivariatePoly::parse("s + s^2").unwrap().as_monomial(),
            None
        );
    }
}
