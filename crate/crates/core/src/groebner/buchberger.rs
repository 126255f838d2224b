use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::groebner::division::divide;
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

/// Limits for a single basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// S-pairs actually reduced (pairs removed by a criterion are free).
    pub max_pairs: usize,
    /// Largest total degree allowed for a basis element.
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 100_000,
            max_degree: 60,
        }
    }
}

/// Reduced Gröbner basis, optionally with the representation of every basis
/// element in terms of the input generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    polys: Vec<Polynomial>,
    generators: Vec<Polynomial>,
    cofactors: Option<Vec<Vec<Polynomial>>>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Input generators the basis was computed from.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// `cofactors()[i][j]` multiplies generator `j` in the expression of
    /// basis element `i`.
    pub fn cofactors(&self) -> Option<&[Vec<Polynomial>]> {
        self.cofactors.as_deref()
    }

    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(divide(p, &self.polys)?.remainder)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Cofactors `c` with `p = Σ c_j · generator_j`, or `None` when `p` is
    /// not in the ideal. Requires a tracked basis.
    pub fn lift(&self, p: &Polynomial) -> Result<Option<Vec<Polynomial>>> {
        let cof = self
            .cofactors
            .as_ref()
            .expect("lift needs a basis computed with cofactor tracking");
        let d = divide(p, &self.polys)?;
        if !d.remainder.is_zero() {
            return Ok(None);
        }
        let mut out = vec![Polynomial::zero(&self.ring); self.generators.len()];
        for (q, row) in d.quotients.iter().zip(cof) {
            if q.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(row) {
                if !c.is_zero() {
                    *o = &*o + &(q * c);
                }
            }
        }
        Ok(Some(out))
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

struct Work {
    ring: Ring,
    n_gens: usize,
    polys: Vec<Polynomial>,
    cofs: Option<Vec<Vec<Polynomial>>>,
}

impl Work {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn zero_row(&self) -> Vec<Polynomial> {
        vec![Polynomial::zero(&self.ring); self.n_gens]
    }

    /// Reduces `p` (with cofactor row `cof`) by the listed basis elements.
    fn reduce_tracked(
        &self,
        p: &Polynomial,
        cof: Option<Vec<Polynomial>>,
        by: &[usize],
    ) -> Result<(Polynomial, Option<Vec<Polynomial>>)> {
        let divisors: Vec<Polynomial> = by.iter().map(|&i| self.polys[i].clone()).collect();
        let d = divide(p, &divisors)?;
        let cof = match (cof, &self.cofs) {
            (Some(mut row), Some(all)) => {
                for (q, &i) in d.quotients.iter().zip(by) {
                    if q.is_zero() {
                        continue;
                    }
                    for (r, c) in row.iter_mut().zip(&all[i]) {
                        if !c.is_zero() {
                            *r = &*r - &(q * c);
                        }
                    }
                }
                Some(row)
            }
            _ => None,
        };
        Ok((d.remainder, cof))
    }

    fn push_monic(&mut self, p: Polynomial, cof: Option<Vec<Polynomial>>) {
        let lc = p.leading_coefficient().unwrap().clone();
        let inv = lc.recip();
        if let (Some(all), Some(row)) = (&mut self.cofs, cof) {
            all.push(row.iter().map(|c| c.scale(&inv)).collect());
        }
        self.polys.push(p.scale(&inv));
    }
}

/// Buchberger's algorithm with the coprime and chain criteria; pairs are
/// taken smallest lcm degree first, ties broken by index.
pub(crate) fn compute(
    ring: &Ring,
    generators: &[Polynomial],
    budget: &Budget,
    track: bool,
) -> Result<GroebnerBasis> {
    let mut w = Work {
        ring: ring.clone(),
        n_gens: generators.len(),
        polys: Vec::new(),
        cofs: track.then(Vec::new),
    };
    for (j, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        if g.total_degree().unwrap() > budget.max_degree {
            return Err(Error::BudgetExceeded(format!(
                "generator degree {} above cap {}",
                g.total_degree().unwrap(),
                budget.max_degree
            )));
        }
        let row = track.then(|| {
            let mut r = w.zero_row();
            r[j] = Polynomial::one(ring);
            r
        });
        w.push_monic(g.clone(), row);
    }

    // (lcm degree, j, i) with i < j
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..w.polys.len() {
        for i in 0..j {
            let d = w.lm(i).lcm(w.lm(j)).degree();
            queue.insert((d, j, i));
            pending.insert((i, j));
        }
    }

    let mut reduced_pairs = 0usize;
    while let Some(&(deg, j, i)) = queue.iter().next() {
        queue.remove(&(deg, j, i));
        pending.remove(&(i, j));
        let (lmi, lmj) = (w.lm(i).clone(), w.lm(j).clone());
        if lmi.is_coprime(&lmj) {
            continue;
        }
        let lcm = lmi.lcm(&lmj);
        let chain = (0..w.polys.len()).any(|k| {
            k != i
                && k != j
                && w.lm(k).divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        reduced_pairs += 1;
        if reduced_pairs > budget.max_pairs {
            return Err(Error::BudgetExceeded(format!(
                "more than {} S-pairs",
                budget.max_pairs
            )));
        }
        let (mi, mj) = (lcm.div(&lmi), lcm.div(&lmj));
        let one = Rational::one();
        let s = &w.polys[i].mul_term(&mi, &one) - &w.polys[j].mul_term(&mj, &one);
        let s_cof = w.cofs.as_ref().map(|all| {
            all[i]
                .iter()
                .zip(&all[j])
                .map(|(a, b)| &a.mul_term(&mi, &one) - &b.mul_term(&mj, &one))
                .collect::<Vec<_>>()
        });
        let all: Vec<usize> = (0..w.polys.len()).collect();
        let (r, r_cof) = w.reduce_tracked(&s, s_cof, &all)?;
        if r.is_zero() {
            continue;
        }
        let rdeg = r.total_degree().unwrap();
        if rdeg > budget.max_degree {
            return Err(Error::BudgetExceeded(format!(
                "basis element of degree {rdeg} above cap {}",
                budget.max_degree
            )));
        }
        w.push_monic(r, r_cof);
        let new = w.polys.len() - 1;
        for i in 0..new {
            let d = w.lm(i).lcm(w.lm(new)).degree();
            queue.insert((d, new, i));
            pending.insert((i, new));
        }
    }

    finish(w, generators)
}

/// Minimalizes, interreduces, normalizes and sorts the basis.
fn finish(w: Work, generators: &[Polynomial]) -> Result<GroebnerBasis> {
    let n = w.polys.len();
    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            !(0..n).any(|j| j != i && w.lm(j).divides(w.lm(i)) && (w.lm(j) != w.lm(i) || j < i))
        })
        .collect();

    let mut polys: Vec<Polynomial> = Vec::with_capacity(keep.len());
    let mut cofs: Option<Vec<Vec<Polynomial>>> = w.cofs.as_ref().map(|_| Vec::new());
    let mut cur = Work {
        ring: w.ring.clone(),
        n_gens: w.n_gens,
        polys: keep.iter().map(|&i| w.polys[i].clone()).collect(),
        cofs: w
            .cofs
            .as_ref()
            .map(|all| keep.iter().map(|&i| all[i].clone()).collect()),
    };
    for idx in 0..cur.polys.len() {
        let others: Vec<usize> = (0..cur.polys.len()).filter(|&k| k != idx).collect();
        let row = cur.cofs.as_ref().map(|all| all[idx].clone());
        let (r, r_cof) = cur.reduce_tracked(&cur.polys[idx].clone(), row, &others)?;
        let inv = r.leading_coefficient().unwrap().recip();
        let r_cof = r_cof.map(|row| row.iter().map(|c| c.scale(&inv)).collect::<Vec<_>>());
        cur.polys[idx] = r.scale(&inv);
        if let (Some(all), Some(row)) = (&mut cur.cofs, r_cof) {
            all[idx] = row;
        }
    }

    let order = w.ring.order();
    let mut idx: Vec<usize> = (0..cur.polys.len()).collect();
    idx.sort_by(|&a, &b| order.compare(cur.lm(a), cur.lm(b)));
    for &i in &idx {
        polys.push(cur.polys[i].clone());
        if let (Some(out), Some(all)) = (&mut cofs, &cur.cofs) {
            out.push(all[i].clone());
        }
    }
    Ok(GroebnerBasis {
        ring: w.ring,
        polys,
        generators: generators.to_vec(),
        cofactors: cofs,
    })
}
