//! Exact sparse row echelon over ℚ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

/// Sparse vector as `(column, value)` pairs, columns strictly increasing,
/// no zero values.
pub type SparseVec = Vec<(usize, Rational)>;

/// Rows in semi-echelon form: every stored row has value 1 at its pivot,
/// which is its smallest column, and no other stored row has its pivot in a
/// column where an earlier row is nonzero to the left of it.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Columns without a pivot, increasing.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect()
    }

    /// Remainder of `v` modulo the row span; it vanishes on every pivot
    /// column.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut work: BTreeMap<usize, Rational> = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        let mut from = 0usize;
        loop {
            let next = work
                .range(from..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, factor)) = next else { break };
            let row = &self.rows[self.pivots[&col]];
            for (c, x) in row {
                let entry = work.entry(*c).or_insert_with(Rational::zero);
                *entry -= &factor * x;
                if entry.is_zero() {
                    work.remove(c);
                }
            }
            from = col + 1;
        }
        work.into_iter().collect()
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> bool {
        debug_assert!(v.iter().all(|(c, _)| *c < self.ncols));
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = Rational::one() / lead;
        let row: SparseVec = r.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(ncols: usize, vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(ncols);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(c, x)| (c, rational(x))).collect()
    }

    #[test]
    fn dependent_rows() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 2), (1, 5), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![2]);
    }

    #[test]
    fn reduce_clears_pivots() {
        let mut e = Echelon::new(4);
        e.insert(&v(&[(1, 3), (3, 1)]));
        e.insert(&v(&[(0, 1), (1, 1)]));
        let r = e.reduce(&v(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert!(r.iter().all(|(c, _)| *c == 2 || *c == 3));
        assert!(!r.is_empty());
    }

    #[test]
    fn zero_vector() {
        let mut e = Echelon::new(2);
        assert!(!e.insert(&[]));
        assert!(e.contains(&[]));
        assert_eq!(rank(2, &[v(&[(0, 1)]), v(&[(0, 3)])]), 1);
    }
}
