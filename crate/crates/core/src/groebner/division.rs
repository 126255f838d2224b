use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{same_ring, Monomial, Polynomial, Rational};

/// Result of multivariate division `p = Σ qᵢ·gᵢ + r`.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// `a − c·m·g`, all inputs in descending term order.
fn sub_multiple(
    a: &[(Monomial, Rational)],
    g: &Polynomial,
    m: &Monomial,
    c: &Rational,
) -> Vec<(Monomial, Rational)> {
    let order = g.ring().order();
    let b = g.terms();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(m);
        match order.compare(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, -(&b[j].1 * c)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &a[i].1 - &b[j].1 * c;
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(bm, bc)| (bm.mul(m), -(bc * c))));
    out
}

fn check_rings(p: &Polynomial, divisors: &[Polynomial]) -> Result<()> {
    match divisors.iter().find(|g| !same_ring(g.ring(), p.ring())) {
        Some(g) => Err(Error::RingMismatch(format!("{} vs {}", p.ring(), g.ring()))),
        None => Ok(()),
    }
}

/// Full multivariate division. Divisors are tried in list order; no term of
/// the remainder is divisible by any divisor's leading monomial.
pub fn divide(p: &Polynomial, divisors: &[Polynomial]) -> Result<Division> {
    check_rings(p, divisors)?;
    let ring = p.ring().clone();
    let mut quotients: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();
    let mut rest: Vec<(Monomial, Rational)> = p.terms().to_vec();
    let mut start = 0;
    while start < rest.len() {
        let (m, c) = &rest[start];
        let hit = divisors
            .iter()
            .enumerate()
            .find(|(_, g)| g.leading_monomial().is_some_and(|lm| lm.divides(m)));
        match hit {
            Some((i, g)) => {
                let (lm, lc) = g.leading_term().unwrap();
                let qm = m.div(lm);
                let qc = c / lc;
                rest = sub_multiple(&rest[start..], g, &qm, &qc);
                start = 0;
                quotients[i].push((qm, qc));
            }
            None => {
                remainder.push(rest[start].clone());
                start += 1;
            }
        }
    }
    Ok(Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(&ring, q))
            .collect(),
        remainder: Polynomial::from_sorted(&ring, remainder),
    })
}

/// Remainder of `p` on division by `basis`.
pub fn reduce(p: &Polynomial, basis: &[Polynomial]) -> Result<Polynomial> {
    Ok(divide(p, basis)?.remainder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, Ring, RingContext};

    fn ring(names: &[&str]) -> Ring {
        RingContext::new(names, MonomialOrder::GrevLex).unwrap()
    }

    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    #[test]
    fn difference_of_squares_reduces_to_zero() {
        let r = ring(&["x", "x'"]);
        assert!(reduce(&p(&r, "x^2 - x'^2"), &[p(&r, "x - x'")])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn irreducible_term_stays() {
        let r = ring(&["x", "y"]);
        assert_eq!(reduce(&p(&r, "y"), &[p(&r, "x")]).unwrap(), p(&r, "y"));
    }

    #[test]
    fn weighted_power_differences_reduce() {
        // b1 (x - x') + b2 (x^2 - x'^2) with b1 = b2 = 1
        let r = RingContext::doubled_of(&ring(&["t", "x", "y"])).unwrap();
        let h = p(&r, "x - x' + x^2 - x'^2");
        assert!(reduce(&h, &[p(&r, "x - x'")]).unwrap().is_zero());
    }

    #[test]
    fn quotients_recombine() {
        let r = ring(&["x", "y", "z"]);
        let f = p(&r, "x^3*y - 2*x*z^2 + y^4 - 7");
        let gs = [p(&r, "x*y - z"), p(&r, "y^2 + x"), p(&r, "z^2 - 1/2")];
        let d = divide(&f, &gs).unwrap();
        let mut acc = d.remainder.clone();
        for (q, g) in d.quotients.iter().zip(&gs) {
            acc = &acc + &(q * g);
        }
        assert_eq!(acc, f);
        for (m, _) in d.remainder.terms() {
            assert!(gs.iter().all(|g| !g.leading_monomial().unwrap().divides(m)));
        }
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(&["x"]);
        let b = ring(&["y"]);
        assert!(matches!(
            reduce(&p(&a, "x"), &[p(&b, "y")]),
            Err(Error::RingMismatch(_))
        ));
    }
}
