use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::groebner::buchberger::{compute, Budget, GroebnerBasis};
use crate::poly::{same_ring, Polynomial, Ring};

/// Finitely generated ideal; the Gröbner basis is computed on first use and
/// cached (plain and cofactor-tracked bases are cached separately).
#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<GroebnerBasis>,
    tracked: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            basis: self.basis.clone(),
            tracked: self.tracked.clone(),
        }
    }
}

impl Ideal {
    /// Zero generators are dropped; an empty list gives the zero ideal.
    pub fn new(ring: &Ring, generators: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        let mut gens = Vec::new();
        for g in generators {
            if !same_ring(g.ring(), ring) {
                return Err(Error::RingMismatch(format!("{} vs {}", g.ring(), ring)));
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
            basis: OnceLock::new(),
            tracked: OnceLock::new(),
        })
    }

    pub fn parse(ring: &Ring, generators: &[&str]) -> Result<Ideal> {
        let gens = generators
            .iter()
            .map(|g| Polynomial::parse(g, ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::new(ring, []).unwrap()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner(&self, budget: &Budget) -> Result<&GroebnerBasis> {
        if let Some(b) = self.basis.get().or_else(|| self.tracked.get()) {
            return Ok(b);
        }
        let b = compute(&self.ring, &self.generators, budget, false)?;
        Ok(self.basis.get_or_init(|| b))
    }

    pub fn groebner_tracked(&self, budget: &Budget) -> Result<&GroebnerBasis> {
        if let Some(b) = self.tracked.get() {
            return Ok(b);
        }
        let b = compute(&self.ring, &self.generators, budget, true)?;
        Ok(self.tracked.get_or_init(|| b))
    }

    pub fn contains_poly(&self, p: &Polynomial, budget: &Budget) -> Result<bool> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                p.ring(),
                self.ring
            )));
        }
        if p.is_zero() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        self.groebner(budget)?.contains(p)
    }

    /// `other ⊆ self`, checked generator by generator.
    pub fn contains_ideal(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        for g in other.generators() {
            if !self.contains_poly(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cofactors `c` with `p = Σ c_j · generators()[j]`, or `None` when `p`
    /// is not a member.
    pub fn lift(&self, p: &Polynomial, budget: &Budget) -> Result<Option<Vec<Polynomial>>> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                p.ring(),
                self.ring
            )));
        }
        if p.is_zero() {
            return Ok(Some(vec![
                Polynomial::zero(&self.ring);
                self.generators.len()
            ]));
        }
        if self.is_zero() {
            return Ok(None);
        }
        self.groebner_tracked(budget)?.lift(p)
    }
}

/// Recombines `Σ c_j g_j` and compares with `p`; used to replay certificates.
pub fn verify_lift(p: &Polynomial, generators: &[Polynomial], cofactors: &[Polynomial]) -> bool {
    if generators.len() != cofactors.len() {
        return false;
    }
    let mut acc = Polynomial::zero(p.ring());
    for (g, c) in generators.iter().zip(cofactors) {
        if !same_ring(g.ring(), p.ring()) || !same_ring(c.ring(), p.ring()) {
            return false;
        }
        acc = &acc + &(c * g);
    }
    &acc == p
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("⟩")
    }
}

/// Reduced Gröbner basis of `ideal`.
pub fn buchberger(ideal: &Ideal, budget: &Budget) -> Result<GroebnerBasis> {
    ideal.groebner(budget).cloned()
}

pub fn ideal_member(p: &Polynomial, ideal: &Ideal, budget: &Budget) -> Result<bool> {
    ideal.contains_poly(p, budget)
}

/// `a ⊆ b`
pub fn ideal_contains(a: &Ideal, b: &Ideal, budget: &Budget) -> Result<bool> {
    b.contains_ideal(a, budget)
}
