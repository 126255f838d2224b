use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Monomial;

pub const DEFAULT_EXPONENT_CAP: u32 = 64;

/// Term order used to sort polynomials and pick leading terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    GrevLex,
    Lex,
}

impl MonomialOrder {
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::GrevLex => {
                let by_degree = a.degree().cmp(&b.degree());
                if by_degree != Ordering::Equal {
                    return by_degree;
                }
                // smaller exponent in the last differing variable wins
                for (x, y) in ea.iter().zip(eb.iter()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::GrevLex => "grevlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

/// Named, ordered variables plus the term order of a polynomial ring over ℚ.
///
/// Doubled rings have the shape `(v₁..v_m, v₁'..v_m')`: the second half is the
/// primed copy of the first half, in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingContext {
    names: Vec<String>,
    order: MonomialOrder,
    doubled: bool,
    exponent_cap: u32,
}

/// Shared handle to a ring context; polynomials hold one each.
pub type Ring = Arc<RingContext>;

pub(crate) fn is_valid_name(name: &str) -> bool {
    let base = name.trim_end_matches('\'');
    let mut chars = base.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingContext {
    pub fn new<S: AsRef<str>>(names: &[S], order: MonomialOrder) -> Result<Ring> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        Self::validate(&names)?;
        Ok(Arc::new(RingContext {
            names,
            order,
            doubled: false,
            exponent_cap: DEFAULT_EXPONENT_CAP,
        }))
    }

    fn validate(names: &[String]) -> Result<()> {
        let mut seen = HashMap::new();
        for n in names {
            if !is_valid_name(n) {
                return Err(Error::InvalidVariable(n.clone()));
            }
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(())
    }

    /// The ring `(v, v')` doubling every variable of `base`.
    pub fn doubled_of(base: &RingContext) -> Result<Ring> {
        let mut names = base.names.clone();
        names.extend(base.names.iter().map(|n| format!("{n}'")));
        Self::validate(&names)?;
        Ok(Arc::new(RingContext {
            names,
            order: base.order,
            doubled: true,
            exponent_cap: base.exponent_cap,
        }))
    }

    /// `(t, v₁..v_r)`: prepends a parameter symbol.
    pub fn with_parameter(base: &RingContext, parameter: &str) -> Result<Ring> {
        if base.index_of(parameter).is_some() {
            return Err(Error::SymbolCollision(parameter.to_string()));
        }
        let mut names = vec![parameter.to_string()];
        names.extend(base.names.iter().cloned());
        Self::validate(&names)?;
        Ok(Arc::new(RingContext {
            names,
            order: base.order,
            doubled: false,
            exponent_cap: base.exponent_cap,
        }))
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Arc::new(RingContext {
            order,
            ..self.clone()
        })
    }

    pub fn with_exponent_cap(&self, cap: u32) -> Ring {
        Arc::new(RingContext {
            exponent_cap: cap,
            ..self.clone()
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled
    }

    pub fn exponent_cap(&self) -> u32 {
        self.exponent_cap
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of unprimed variables in a doubled ring.
    pub fn half(&self) -> Option<usize> {
        self.doubled.then_some(self.names.len() / 2)
    }

    /// Unprimed names of a doubled ring.
    pub fn unprimed_names(&self) -> Option<&[String]> {
        self.half().map(|h| &self.names[..h])
    }

    /// True if `doubled` is the doubled extension of `self`, ignoring order.
    pub fn is_doubled_by(&self, doubled: &RingContext) -> bool {
        doubled.doubled && doubled.unprimed_names() == Some(&self.names[..])
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℚ[{}; {}]", self.names.join(", "), self.order.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_ring_layout() {
        let base = RingContext::new(&["t", "x", "y"], MonomialOrder::GrevLex).unwrap();
        let d = RingContext::doubled_of(&base).unwrap();
        assert_eq!(d.names(), &["t", "x", "y", "t'", "x'", "y'"]);
        assert_eq!(d.half(), Some(3));
        assert!(base.is_doubled_by(&d));
        assert!(!d.is_doubled_by(&base));
    }

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert_eq!(
            RingContext::new(&["x", "x"], MonomialOrder::Lex),
            Err(Error::DuplicateVariable("x".into()))
        );
        assert!(RingContext::new(&["2x"], MonomialOrder::Lex).is_err());
        assert!(RingContext::new(&["x'"], MonomialOrder::Lex).is_ok());
    }

    #[test]
    fn parameter_collision() {
        let base = RingContext::new(&["t", "x"], MonomialOrder::GrevLex).unwrap();
        assert_eq!(
            RingContext::with_parameter(&base, "t"),
            Err(Error::SymbolCollision("t".into()))
        );
    }

    #[test]
    fn grevlex_and_lex() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        let g = MonomialOrder::GrevLex;
        // x*z < y^2 in grevlex on (x, y, z)
        assert_eq!(g.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(g.compare(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
        let l = MonomialOrder::Lex;
        assert_eq!(l.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }
}
