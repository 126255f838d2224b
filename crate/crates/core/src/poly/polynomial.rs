use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Ring};

pub type Rational = BigRational;

/// Exact multivariate polynomial over ℚ.
///
/// Terms are kept sorted by the ring's monomial order, leading term first,
/// with no zero coefficients and no repeated monomials.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(ring.arity()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.arity(), ring.arity());
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn variable(ring: &Ring, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Self::var_index(ring, i))
    }

    pub fn var_index(ring: &Ring, index: usize) -> Self {
        Self::monomial(
            ring,
            Monomial::variable(ring.arity(), index),
            Rational::one(),
        )
    }

    /// Builds a canonical polynomial from arbitrary terms (any order,
    /// duplicates and zeros allowed).
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms: merged,
        }
    }

    /// Terms must already be in canonical order.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().compare(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Lowest total degree of a term (order at the origin).
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.max_exponent())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(tm, _)| tm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .cloned()
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    /// Terms of total degree ≤ `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= d)
            .cloned()
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )))
        }
    }

    fn check_cap(self) -> Result<Self> {
        let e = self.max_exponent();
        if e > self.ring.exponent_cap() {
            return Err(Error::ExponentCap {
                exponent: e.into(),
                cap: self.ring.exponent_cap(),
            });
        }
        Ok(self)
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        self.mul_unchecked(other).check_cap()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    /// `c · m · self`, used by reduction.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        // multiplying by a monomial preserves any monomial order
        let terms = self
            .terms
            .iter()
            .map(|(tm, a)| (tm.mul(m), a * c))
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self).check_cap()?;
        }
        Ok(acc)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            let c = if negate { -c } else { c.clone() };
            (m.clone(), c)
        }));
        Polynomial::from_sorted(&self.ring, out)
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let mut acc: Vec<(Monomial, Rational)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| Error::UnknownSymbol(var.to_string()))?;
        Ok(self.derivative_index(i))
    }

    pub fn derivative_index(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[i];
            (e > 0).then(|| {
                let mut ex = m.exponents().to_vec();
                ex[i] -= 1;
                (Monomial::new(ex), c * rational(e.into()))
            })
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Substitutes `images[i]` for the i-th variable. All images must share
    /// one target ring.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.arity() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.ring.arity()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => {
                // nullary ring: only constants
                return Ok(self.clone());
            }
        };
        if let Some(bad) = images.iter().find(|p| !same_ring(&p.ring, &target)) {
            return Err(Error::RingMismatch(format!(
                "substitution images live in {} and {}",
                target, bad.ring
            )));
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut acc = Vec::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_unchecked(&cache[1]).check_cap()?;
                    cache.push(next);
                }
                term = term.mul_unchecked(&cache[e as usize]);
            }
            acc.extend(term.terms);
        }
        Polynomial::from_terms(&target, acc).check_cap()
    }

    /// Substitution by variable name: every variable of the source ring
    /// needs an image, and all images must share a target ring.
    pub fn substitute(&self, assignment: &BTreeMap<String, Polynomial>) -> Result<Polynomial> {
        let images = self
            .ring
            .names()
            .iter()
            .map(|n| {
                assignment
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::MissingImage(n.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.compose(&images)
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `map[i]` of the target ring.
    pub fn embed(&self, target: &Ring, map: &[usize]) -> Polynomial {
        debug_assert_eq!(map.len(), self.ring.arity());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.arity()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            (Monomial::new(e), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Embeds by matching variable names; every source name must exist in
    /// `target`.
    pub fn embed_by_name(&self, target: &Ring) -> Result<Polynomial> {
        let map = self
            .ring
            .names()
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownSymbol(n.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.embed(target, &map))
    }

    /// Same polynomial re-sorted for a ring that differs only in order.
    pub fn reorder(&self, target: &Ring) -> Result<Polynomial> {
        if target.names() != self.ring.names() {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, target)));
        }
        Ok(Polynomial::from_terms(target, self.terms.iter().cloned()))
    }

    /// Variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.arity()];
        for (m, _) in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// # Panics
    /// On operands from different rings; use `checked_add` for untrusted input.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "polynomial ring mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial::from_sorted(&self.ring, terms)
    }
}

pub(crate) fn write_monomial(
    f: &mut impl fmt::Write,
    names: &[String],
    m: &Monomial,
) -> fmt::Result {
    let mut first = true;
    for (name, &e) in names.iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(name)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

pub(crate) fn write_rational(f: &mut impl fmt::Write, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write_rational(f, &abs)?;
                continue;
            }
            if !abs.is_one() {
                write_rational(f, &abs)?;
                f.write_str("*")?;
            }
            write_monomial(f, self.ring.names(), m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, RingContext};

    fn ring(names: &[&str]) -> Ring {
        RingContext::new(names, MonomialOrder::GrevLex).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "x'"]);
        let prod = &p(&r, "x - x'") * &p(&r, "x + x'");
        assert_eq!(prod, p(&r, "x^2 - x'^2"));
    }

    #[test]
    fn cube_difference_has_two_terms() {
        let r = RingContext::doubled_of(&ring(&["t", "x", "y"])).unwrap();
        let d = p(&r, "y^3").checked_sub(&p(&r, "y'^3")).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.to_string(), "y^3 - y'^3");
    }

    #[test]
    fn scale_by_zero() {
        let r = ring(&["x", "y"]);
        assert!(p(&r, "x^2 + 3*y").scale(&rational(0)).is_zero());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring(&["x"]);
        let b = ring(&["y"]);
        assert!(matches!(
            p(&a, "x").checked_add(&p(&b, "y")),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn exponent_cap_enforced() {
        let r = ring(&["x"]).with_exponent_cap(4);
        let x2 = p(&r, "x^2");
        assert!(x2.checked_mul(&x2).is_ok());
        assert!(matches!(
            x2.checked_mul(&p(&r, "x^3")),
            Err(Error::ExponentCap {
                exponent: 5,
                cap: 4
            })
        ));
    }

    #[test]
    fn derivatives() {
        let r = ring(&["t", "x", "y"]);
        assert_eq!(
            p(&r, "y^3").partial_derivative("y").unwrap(),
            p(&r, "3*y^2")
        );
        assert_eq!(
            p(&r, "y^3 + 2/3*t").partial_derivative("t").unwrap(),
            p(&r, "2/3")
        );
        assert!(p(&r, "x").partial_derivative("y").unwrap().is_zero());
        assert_eq!(
            p(&r, "x").partial_derivative("z"),
            Err(Error::UnknownSymbol("z".into()))
        );
    }

    #[test]
    fn substitute_witness_curve_components() {
        let src = RingContext::doubled_of(&ring(&["t", "x", "y"])).unwrap();
        let s = ring(&["s"]);
        let images = ["s", "2*s^2", "2*s", "s", "s^2", "s"];
        let assignment: BTreeMap<String, Polynomial> = src
            .names()
            .iter()
            .zip(images)
            .map(|(n, e)| (n.clone(), p(&s, e)))
            .collect();
        assert_eq!(
            p(&src, "x - x'").substitute(&assignment).unwrap(),
            p(&s, "s^2")
        );
        assert_eq!(
            p(&src, "t*y - t'*y'").substitute(&assignment).unwrap(),
            p(&s, "s^2")
        );
        assert_eq!(p(&src, "5").substitute(&assignment).unwrap(), p(&s, "5"));
    }

    #[test]
    fn substitute_errors() {
        let src = ring(&["x", "y"]);
        let a = ring(&["s"]);
        let b = ring(&["u"]);
        let mut assignment = BTreeMap::new();
        assignment.insert("x".to_string(), p(&a, "s"));
        assert_eq!(
            p(&src, "x + y").substitute(&assignment),
            Err(Error::MissingImage("y".into()))
        );
        assignment.insert("y".to_string(), p(&b, "u"));
        assert!(matches!(
            p(&src, "x + y").substitute(&assignment),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn display_orders_terms() {
        let r = ring(&["x", "y"]);
        assert_eq!(p(&r, "1 + y^3 - x^2").to_string(), "y^3 - x^2 + 1");
        assert_eq!(p(&r, "-1/2*x*y + 3").to_string(), "-1/2*x*y + 3");
        assert_eq!(p(&r, "0").to_string(), "0");
    }
}
