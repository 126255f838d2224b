//! Jet-truncated extended tangent spaces and normal-space bases.

mod action;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

pub use action::{
    action, action_names, default_action, tangent_generators, General, GroupAction,
    SymmetricCongruence,
};

use crate::double::{positions, scaled_unit, MatrixGerm};
use crate::error::{Error, Result};
use crate::linalg::{rank, Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// Largest jet space the echelon is allowed to work in.
pub const MAX_JET_DIMENSION: usize = 200_000;

/// `2·(max entry degree) + 2`.
pub fn default_jet_degree(f: &MatrixGerm) -> u32 {
    2 * f.max_degree() + 2
}

/// All monomials of degree `≤ d` in `arity` variables.
fn monomials_up_to(arity: usize, d: u32) -> Vec<Monomial> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, d, &mut vec![0; arity], &mut out);
    out
}

/// Basis element `m · E_pos` of the jet space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JetCoordinate {
    pub monomial: Monomial,
    pub position: (usize, usize),
}

/// Preference for normal-space representatives, most preferred first:
/// lower degree, then earlier position, then fewer powers of the earlier
/// variables.
fn preference(
    a: &JetCoordinate,
    b: &JetCoordinate,
    pos_index: &HashMap<(usize, usize), usize>,
) -> Ordering {
    a.monomial
        .degree()
        .cmp(&b.monomial.degree())
        .then_with(|| pos_index[&a.position].cmp(&pos_index[&b.position]))
        .then_with(|| a.monomial.exponents().cmp(b.monomial.exponents()))
}

/// `(monomials of degree ≤ d) × (independent matrix positions)`.
#[derive(Debug, Clone)]
pub struct JetSpace {
    ring: Ring,
    degree: u32,
    rows: usize,
    cols: usize,
    symmetric: bool,
    /// Least preferred first.
    coords: Vec<JetCoordinate>,
    index: HashMap<JetCoordinate, usize>,
}

impl JetSpace {
    pub fn new(
        ring: &Ring,
        degree: u32,
        rows: usize,
        cols: usize,
        symmetric: bool,
    ) -> Result<JetSpace> {
        let mons = monomials_up_to(ring.arity(), degree);
        let pos = positions(rows, cols, symmetric);
        let dim = mons.len().saturating_mul(pos.len());
        if dim > MAX_JET_DIMENSION {
            return Err(Error::BudgetExceeded(format!(
                "jet space of dimension {dim} above {MAX_JET_DIMENSION}"
            )));
        }
        let pos_index: HashMap<(usize, usize), usize> =
            pos.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut coords: Vec<JetCoordinate> = mons
            .iter()
            .flat_map(|m| {
                pos.iter().map(move |p| JetCoordinate {
                    monomial: m.clone(),
                    position: *p,
                })
            })
            .collect();
        coords.sort_by(|a, b| preference(b, a, &pos_index));
        let index = coords
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Ok(JetSpace {
            ring: ring.clone(),
            degree,
            rows,
            cols,
            symmetric,
            coords,
            index,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinate(&self, column: usize) -> &JetCoordinate {
        &self.coords[column]
    }

    /// Coordinates of the degree `≤ d` part of `m`.
    pub fn coordinates(&self, m: &MatrixGerm) -> SparseVec {
        let mut v: Vec<(usize, Rational)> = Vec::new();
        for (i, j) in positions(self.rows, self.cols, self.symmetric) {
            for (mono, c) in m.entry(i, j).terms() {
                if mono.degree() > self.degree {
                    continue;
                }
                let key = JetCoordinate {
                    monomial: mono.clone(),
                    position: (i, j),
                };
                v.push((self.index[&key], c.clone()));
            }
        }
        v.sort_by_key(|(c, _)| *c);
        v
    }

    /// `m · E_pos` as a matrix germ.
    pub fn element(&self, column: usize) -> MatrixGerm {
        let c = &self.coords[column];
        let entry = Polynomial::monomial(
            &self.ring,
            c.monomial.clone(),
            Rational::from_integer(1.into()),
        );
        scaled_unit(
            &self.ring,
            (self.rows, self.cols, self.symmetric),
            c.position,
            entry,
        )
    }
}

/// Normal-space element `m · E_ij` with a readable label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalElement {
    pub coordinate: JetCoordinate,
    pub matrix: MatrixGerm,
}

impl NormalElement {
    pub fn label(&self) -> String {
        let (i, j) = self.coordinate.position;
        let unit = format!("E{}{}", i + 1, j + 1);
        let m = Polynomial::monomial(
            self.matrix.ring(),
            self.coordinate.monomial.clone(),
            Rational::from_integer(1.into()),
        );
        if self.coordinate.monomial.is_one() {
            unit
        } else {
            format!("{m}·{unit}")
        }
    }
}

impl fmt::Display for NormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Truncated `T𝒢ₑF` and the chosen complement.
#[derive(Debug, Clone)]
pub struct TangentSpaceResult {
    pub action: &'static str,
    pub generators: Vec<MatrixGerm>,
    pub jet: JetSpace,
    pub rank: usize,
    pub codimension: usize,
    pub normal_basis: Vec<NormalElement>,
    /// Whether the basis at degree `d + 1` equals the one at `d`.
    pub stable: bool,
    echelon: Echelon,
}

impl TangentSpaceResult {
    pub fn normal_matrices(&self) -> Vec<MatrixGerm> {
        self.normal_basis.iter().map(|e| e.matrix.clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.normal_basis.iter().map(NormalElement::label).collect()
    }

    /// Membership of the `d`-jet of `m` in the truncated tangent space.
    pub fn contains(&self, m: &MatrixGerm) -> bool {
        self.echelon.contains(&self.jet.coordinates(m))
    }

    /// Rank increase from adjoining `m`.
    pub fn rank_gain(&self, m: &MatrixGerm) -> usize {
        let mut e = self.echelon.clone();
        usize::from(e.insert(&self.jet.coordinates(m)))
    }

    /// True iff the classes of `candidates` form a basis of the quotient.
    pub fn is_quotient_basis(&self, candidates: &[MatrixGerm]) -> bool {
        if candidates.len() != self.codimension {
            return false;
        }
        let reduced: Vec<SparseVec> = candidates
            .iter()
            .map(|m| self.echelon.reduce(&self.jet.coordinates(m)))
            .collect();
        rank(self.jet.dimension(), &reduced) == self.codimension
    }
}

fn truncated_product(m: &Monomial, g: &MatrixGerm, d: u32, ring: &Ring) -> MatrixGerm {
    g.map(|e| {
        if e.is_zero() {
            return Polynomial::zero(ring);
        }
        let terms = e
            .terms()
            .iter()
            .filter(|(t, _)| t.degree() + m.degree() <= d)
            .map(|(t, c)| (t.mul(m), c.clone()));
        Polynomial::from_terms(ring, terms)
    })
}

fn echelon_at(
    f: &MatrixGerm,
    generators: &[MatrixGerm],
    d: u32,
    symmetric: bool,
) -> Result<(JetSpace, Echelon)> {
    let (rows, cols) = f.shape();
    let jet = JetSpace::new(f.ring(), d, rows, cols, symmetric)?;
    let mut ech = Echelon::new(jet.dimension());
    let mons = monomials_up_to(f.ring().arity(), d);
    for g in generators {
        let low = g.entries().iter().filter_map(Polynomial::low_degree).min();
        let Some(low) = low else { continue };
        for m in &mons {
            if m.degree() + low > d {
                continue;
            }
            let prod = truncated_product(m, g, d, f.ring());
            let v = jet.coordinates(&prod);
            if !v.is_empty() {
                ech.insert(&v);
                if ech.is_full() {
                    return Ok((jet, ech));
                }
            }
        }
    }
    Ok((jet, ech))
}

fn basis_from(jet: &JetSpace, ech: &Echelon) -> Vec<NormalElement> {
    let mut free = ech.free_columns();
    // most preferred first
    free.reverse();
    free.into_iter()
        .map(|c| NormalElement {
            coordinate: jet.coordinate(c).clone(),
            matrix: jet.element(c),
        })
        .collect()
}

/// Complement of `T𝒢ₑF + m^{d+1}` spanned by monomial matrix units, chosen
/// greedily from the most preferred coordinate.
pub fn normal_space_basis(
    f: &MatrixGerm,
    action: &dyn GroupAction,
    jet_degree: u32,
) -> Result<TangentSpaceResult> {
    if jet_degree == 0 {
        return Err(Error::Catalog("jet degree must be at least 1".into()));
    }
    let generators = tangent_generators(f, action)?;
    let symmetric = action.symmetric();
    let (jet, ech) = echelon_at(f, &generators, jet_degree, symmetric)?;
    let normal_basis = basis_from(&jet, &ech);
    let (jet2, ech2) = echelon_at(f, &generators, jet_degree + 1, symmetric)?;
    let next = basis_from(&jet2, &ech2);
    let stable = next
        .iter()
        .map(|e| &e.coordinate)
        .eq(normal_basis.iter().map(|e| &e.coordinate));
    Ok(TangentSpaceResult {
        action: action.name(),
        generators,
        rank: ech.rank(),
        codimension: jet.dimension() - ech.rank(),
        jet,
        normal_basis,
        stable,
        echelon: ech,
    })
}

/// Whether the linear parts of the entries span every linear form in the
/// source variables.
pub fn is_reduced_point_minors(f: &MatrixGerm) -> bool {
    let r = f.ring().arity();
    if r == 0 {
        return false;
    }
    let vecs: Vec<SparseVec> = f
        .linear_parts()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    rank(r, &vecs) == r
}
