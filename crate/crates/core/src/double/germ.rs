use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{same_ring, MonomialOrder, Polynomial, Rational, Ring, RingContext};

/// `n × p` matrix of polynomials over a common source ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGerm {
    ring: Ring,
    rows: usize,
    cols: usize,
    symmetric: bool,
    /// Row-major.
    entries: Vec<Polynomial>,
}

impl MatrixGerm {
    pub fn new(
        ring: &Ring,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
        symmetric: bool,
    ) -> Result<MatrixGerm> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}×{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| !same_ring(e.ring(), ring)) {
            return Err(Error::RingMismatch(format!("{} vs {}", e.ring(), ring)));
        }
        let m = MatrixGerm {
            ring: ring.clone(),
            rows,
            cols,
            symmetric,
            entries,
        };
        if symmetric {
            if rows != cols {
                return Err(Error::SymmetryMismatch(format!(
                    "{rows}×{cols} is not square"
                )));
            }
            for i in 0..rows {
                for j in i + 1..cols {
                    if m.entry(i, j) != m.entry(j, i) {
                        return Err(Error::SymmetryMismatch(format!(
                            "entry ({},{}) = {} but ({},{}) = {}",
                            i + 1,
                            j + 1,
                            m.entry(i, j),
                            j + 1,
                            i + 1,
                            m.entry(j, i)
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(
        ring: &Ring,
        rows: Vec<Vec<Polynomial>>,
        symmetric: bool,
    ) -> Result<MatrixGerm> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        MatrixGerm::new(ring, n, p, rows.into_iter().flatten().collect(), symmetric)
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize, symmetric: bool) -> MatrixGerm {
        MatrixGerm {
            ring: ring.clone(),
            rows,
            cols,
            symmetric,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    /// Matrix unit at `(i, j)`; for symmetric shapes the symmetrized unit
    /// `E_ij + E_ji` (just `E_ii` on the diagonal).
    pub fn unit(
        ring: &Ring,
        rows: usize,
        cols: usize,
        i: usize,
        j: usize,
        symmetric: bool,
    ) -> MatrixGerm {
        let mut m = MatrixGerm::zero(ring, rows, cols, symmetric);
        m.entries[i * cols + j] = Polynomial::one(ring);
        if symmetric {
            m.entries[j * cols + i] = Polynomial::one(ring);
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    /// Independent positions: the upper triangle for symmetric germs,
    /// every position otherwise; row-major.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        positions(self.rows, self.cols, self.symmetric)
    }

    /// Entries at the independent positions.
    pub fn components(&self) -> Vec<Polynomial> {
        self.positions()
            .into_iter()
            .map(|(i, j)| self.entry(i, j).clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Polynomial::is_constant)
    }

    /// Largest total degree among the entries (0 for the zero matrix).
    pub fn max_degree(&self) -> u32 {
        self.entries
            .iter()
            .filter_map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> MatrixGerm {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let ring = entries
            .first()
            .map_or(self.ring.clone(), |e| e.ring().clone());
        MatrixGerm {
            ring,
            rows: self.rows,
            cols: self.cols,
            symmetric: self.symmetric,
            entries,
        }
    }

    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<MatrixGerm> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        let ring = entries
            .first()
            .map_or(self.ring.clone(), |e| e.ring().clone());
        Ok(MatrixGerm {
            ring,
            rows: self.rows,
            cols: self.cols,
            symmetric: self.symmetric,
            entries,
        })
    }

    fn check_same_shape(&self, other: &MatrixGerm) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixGerm) -> Result<MatrixGerm> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MatrixGerm {
            entries,
            symmetric: self.symmetric && other.symmetric,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Rational) -> MatrixGerm {
        self.map(|e| e.scale(c))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> MatrixGerm {
        self.map(|e| e * p)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MatrixGerm> {
        self.try_map(|e| e.partial_derivative(var))
    }

    /// Re-expresses every entry in `target` by variable name.
    pub fn embed(&self, target: &Ring) -> Result<MatrixGerm> {
        let mut m = self.try_map(|e| e.embed_by_name(target))?;
        m.ring = target.clone();
        Ok(m)
    }

    /// Degree-1 part of each entry, as coefficient vectors over the ring's
    /// variables.
    pub fn linear_parts(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|e| {
                let h = e.homogeneous_part(1);
                (0..self.ring.arity())
                    .map(|i| h.coefficient(&crate::poly::Monomial::variable(self.ring.arity(), i)))
                    .collect()
            })
            .collect()
    }

    /// Reads the text format
    /// `[vars: x, y]` newline `sym: e11, e12 ; e21, e22` (or `gen:`).
    /// Without a `vars` line the variables are the identifiers that occur,
    /// sorted.
    pub fn parse(text: &str) -> Result<MatrixGerm> {
        let (vars, body) = split_vars(text)?;
        let names = match vars {
            Some(v) => v,
            None => infer_variables(body),
        };
        let ring = RingContext::new(&names, MonomialOrder::GrevLex)?;
        MatrixGerm::parse_body(body, &ring)
    }

    /// Reads the text format over a given ring; a `vars` line, if present,
    /// must list the ring's variables.
    pub fn parse_in(text: &str, ring: &Ring) -> Result<MatrixGerm> {
        let (vars, body) = split_vars(text)?;
        if let Some(v) = vars {
            if v != ring.names() {
                return Err(Error::RingMismatch(format!(
                    "file declares variables [{}], expected [{}]",
                    v.join(", "),
                    ring.names().join(", ")
                )));
            }
        }
        MatrixGerm::parse_body(body, ring)
    }

    fn parse_body(body: &str, ring: &Ring) -> Result<MatrixGerm> {
        let body = body.trim();
        let (head, rest) = body
            .split_once(':')
            .ok_or_else(|| Error::syntax(0, "expected `sym:` or `gen:` header"))?;
        let symmetric = match head.trim() {
            "sym" => true,
            "gen" => false,
            other => {
                return Err(Error::syntax(
                    0,
                    format!("unknown header `{other}`, expected `sym` or `gen`"),
                ))
            }
        };
        let rows = rest
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| Polynomial::parse(e.trim(), ring))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixGerm::from_rows(ring, rows, symmetric)
    }

    /// Text form including a `vars` line, so that it reparses to the same ring.
    pub fn to_text(&self) -> String {
        format!("vars: {}\n{}", self.ring.names().join(", "), self)
    }
}

pub(crate) fn positions(rows: usize, cols: usize, symmetric: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if !symmetric || j >= i {
                out.push((i, j));
            }
        }
    }
    out
}

fn split_vars(text: &str) -> Result<(Option<Vec<String>>, &str)> {
    let trimmed = text.trim_start();
    let Some(rest) = trimmed.strip_prefix("vars:") else {
        return Ok((None, text));
    };
    let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
    let names: Vec<String> = line
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Ok((Some(names), body))
}

fn infer_variables(body: &str) -> Vec<String> {
    let body = body.split_once(':').map_or(body, |(_, r)| r);
    let bytes = body.as_bytes();
    let mut names = BTreeSet::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            while i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            names.insert(body[start..i].to_string());
        } else if c.is_ascii_digit() {
            // skip numeric tokens, including exponents like `2y` split later
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    names.into_iter().collect()
}

impl fmt::Display for MatrixGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.symmetric { "sym: " } else { "gen: " })?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

/// `c · m · E` where `E` is the (symmetrized) unit at `(i, j)`.
pub(crate) fn scaled_unit(
    ring: &Ring,
    shape: (usize, usize, bool),
    pos: (usize, usize),
    entry: Polynomial,
) -> MatrixGerm {
    let (rows, cols, symmetric) = shape;
    let mut m = MatrixGerm::zero(ring, rows, cols, symmetric);
    m.entries[pos.0 * cols + pos.1] = entry.clone();
    if symmetric {
        m.entries[pos.1 * cols + pos.0] = entry;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = MatrixGerm::parse("sym: y^3, x ; x, y^2").unwrap();
        assert_eq!(f.ring().names(), &["x", "y"]);
        assert!(f.is_symmetric());
        assert_eq!(f.to_string(), "sym: y^3, x ; x, y^2");
        assert_eq!(MatrixGerm::parse(&f.to_text()).unwrap(), f);
        assert_eq!(f.components().len(), 3);
        assert_eq!(f.max_degree(), 3);
    }

    #[test]
    fn explicit_variables() {
        let f = MatrixGerm::parse("vars: x, y, z\ngen: x ; 2y").unwrap();
        assert_eq!(f.shape(), (2, 1));
        assert_eq!(f.ring().arity(), 3);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(matches!(
            MatrixGerm::parse("sym: x, y ; x, y"),
            Err(Error::SymmetryMismatch(_))
        ));
        assert!(matches!(
            MatrixGerm::parse("gen: x, y ; x"),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(MatrixGerm::parse("x, y").is_err());
    }

    #[test]
    fn symmetric_unit() {
        let r = RingContext::new(&["x", "y"], MonomialOrder::GrevLex).unwrap();
        let e = MatrixGerm::unit(&r, 2, 2, 0, 1, true);
        assert_eq!(e.to_string(), "sym: 0, 1 ; 1, 0");
    }
}
