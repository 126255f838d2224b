use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::curve::TestCurve;
use crate::double::{scaled_unit, MatrixGerm};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring, RingContext};
use crate::tangent::TangentSpaceResult;

/// One coefficient of a normal-space direction: `name · x^i y^j · E_pos`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Param {
    pub name: String,
    /// Exponents of `(x, y)`.
    pub exponents: (u32, u32),
    pub position: (usize, usize),
}

impl Param {
    fn new(name: impl Into<String>, exponents: (u32, u32), position: (usize, usize)) -> Param {
        Param {
            name: name.into(),
            exponents,
            position,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.exponents == (0, 0)
    }

    pub fn label(&self) -> String {
        let (i, j) = self.position;
        let unit = format!("E{}{}", i + 1, j + 1);
        let m = match self.exponents {
            (0, 0) => String::new(),
            (a, b) => {
                let part = |v: &str, e: u32| match e {
                    0 => String::new(),
                    1 => v.to_string(),
                    e => format!("{v}^{e}"),
                };
                let xs = part("x", a);
                let ys = part("y", b);
                let joined = match (xs.is_empty(), ys.is_empty()) {
                    (false, false) => format!("{xs}*{ys}"),
                    (true, _) => ys,
                    (_, true) => xs,
                };
                format!("{joined}·")
            }
        };
        format!("{m}{unit}")
    }
}

/// What the classification statements claim for a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Lipschitz,
    NotLipschitz,
    /// No claim is made; any outcome is accepted.
    Unclaimed,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Lipschitz => "Lipschitz",
            Expectation::NotLipschitz => "NotLipschitz",
            Expectation::Unclaimed => "unclaimed",
        })
    }
}

/// A simple symmetric 2×2 germ of rank 0 from the built-in table.
#[derive(Debug, Clone)]
pub struct NormalForm {
    id: u8,
    k: Option<u32>,
    l: Option<u32>,
    germ: MatrixGerm,
    params: Vec<Param>,
}

/// Rows 1..=6.
pub const CATALOG_ROWS: [u8; 6] = [1, 2, 3, 4, 5, 6];

fn source_ring() -> Ring {
    RingContext::new(&["x", "y"], MonomialOrder::GrevLex).expect("static ring")
}

impl NormalForm {
    /// `k` and `l` are required where the row has them and ignored
    /// otherwise. Row 1 needs `k ≥ 1, l ≥ 2`; rows 2–4 need `k ≥ 2`.
    pub fn new(id: u8, k: Option<u32>, l: Option<u32>) -> Result<NormalForm> {
        let need = |v: Option<u32>, name: &str, min: u32| -> Result<u32> {
            let v = v.ok_or_else(|| Error::Catalog(format!("row {id} needs parameter {name}")))?;
            if v < min {
                return Err(Error::Catalog(format!(
                    "row {id} needs {name} ≥ {min}, got {v}"
                )));
            }
            if v > 32 {
                return Err(Error::Catalog(format!(
                    "{name} = {v} is beyond the supported range"
                )));
            }
            Ok(v)
        };
        let (k, l) = match id {
            1 => (Some(need(k, "k", 1)?), Some(need(l, "l", 2)?)),
            2..=4 => (Some(need(k, "k", 2)?), None),
            5 | 6 => (None, None),
            _ => return Err(Error::Catalog(format!("no row {id}; rows are 1 to 6"))),
        };
        let text = match (id, k, l) {
            (1, Some(k), Some(l)) => format!("sym: y^{k}, x ; x, y^{l}"),
            (2, Some(k), _) => format!("sym: x, 0 ; 0, y^2 + x^{k}"),
            (3, Some(k), _) => format!("sym: x, 0 ; 0, x*y + y^{k}"),
            (4, Some(k), _) => format!("sym: x, y^{k} ; y^{k}, x*y"),
            (5, _, _) => "sym: x, y^2 ; y^2, x^2".to_string(),
            (6, _, _) => "sym: x, 0 ; 0, x^2 + y^3".to_string(),
            _ => unreachable!(),
        };
        let germ = MatrixGerm::parse_in(&text, &source_ring())?;
        let params = params_for(id, k, l);
        Ok(NormalForm {
            id,
            k,
            l,
            germ,
            params,
        })
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn l(&self) -> Option<u32> {
        self.l
    }

    pub fn germ(&self) -> &MatrixGerm {
        &self.germ
    }

    pub fn ring(&self) -> &Ring {
        self.germ.ring()
    }

    /// Coefficient names of the direction parameterization, in order.
    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn parameters(&self) -> BTreeMap<&'static str, u32> {
        let mut m = BTreeMap::new();
        if let Some(k) = self.k {
            m.insert("k", k);
        }
        if let Some(l) = self.l {
            m.insert("l", l);
        }
        m
    }

    pub fn name(&self) -> String {
        match (self.k, self.l) {
            (Some(k), Some(l)) => format!("row {} (k={k}, l={l})", self.id),
            (Some(k), None) => format!("row {} (k={k})", self.id),
            _ => format!("row {}", self.id),
        }
    }

    /// Discriminant type as printed in the classification table.
    pub fn table_label(&self) -> String {
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => format!("A_{}", k + l + 1),
            (2, Some(k), _) => format!("D_{}", k + 2),
            (3, Some(k), _) => format!("D_{}", 2 * k),
            (4, Some(k), _) => format!("D_{}", 2 * k + 1),
            (5, _, _) => "E_6".into(),
            _ => "E_7".into(),
        }
    }

    /// Discriminant type as stated in the row's own lemma.
    pub fn lemma_label(&self) -> String {
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => format!("A_{}", k + l - 1),
            _ => self.table_label(),
        }
    }

    /// Whether the two labels disagree (only row 1 does).
    pub fn label_discrepancy(&self) -> bool {
        self.table_label() != self.lemma_label()
    }

    /// Milnor number of the discriminant, equal to the 𝒢ₑ-codimension.
    pub fn milnor_number(&self) -> usize {
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => (k + l - 1) as usize,
            (2, Some(k), _) => (k + 2) as usize,
            (3, Some(k), _) => (2 * k) as usize,
            (4, Some(k), _) => (2 * k + 1) as usize,
            (5, _, _) => 6,
            _ => 7,
        }
    }

    /// Normal-space generators as displayed with the row's lemma, as
    /// `(x-exponent, y-exponent, position)`.
    pub fn displayed_normal_space(&self) -> Vec<Param> {
        let d = (0, 0);
        let o = (0, 1);
        let t = (1, 1);
        let mut v: Vec<((u32, u32), (usize, usize))> = Vec::new();
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => {
                v.push(((0, 0), d));
                v.push(((0, 0), t));
                v.extend((1..k).map(|i| ((0, i), d)));
                v.extend((1..l.saturating_sub(1)).map(|j| ((0, j), t)));
            }
            (2, Some(k), _) => {
                v.extend([((0, 0), d), ((0, 0), o), ((0, 1), o), ((0, 0), t)]);
                v.extend((1..k - 1).map(|i| ((i, 0), t)));
            }
            (3, Some(k), _) => {
                v.extend([((0, 0), d), ((0, 0), t), ((0, 0), o)]);
                v.extend((1..k - 1).map(|i| ((0, i), d)));
                v.extend((1..k).map(|j| ((0, j), t)));
            }
            (4, Some(k), _) => {
                v.extend([((0, 0), d), ((0, 0), o), ((0, 0), t)]);
                v.extend((1..k).map(|i| ((0, i), d)));
                v.extend((1..k).map(|j| ((j, 0), t)));
            }
            (5, _, _) => v.extend([
                ((0, 0), d),
                ((0, 0), t),
                ((0, 0), o),
                ((0, 1), d),
                ((0, 1), t),
                ((0, 2), t),
            ]),
            _ => v.extend([
                ((0, 0), d),
                ((0, 0), t),
                ((0, 0), o),
                ((0, 1), t),
                ((0, 1), d),
                ((0, 1), o),
                ((0, 2), o),
            ]),
        }
        v.into_iter()
            .enumerate()
            .map(|(i, (e, p))| Param::new(format!("n{i}"), e, p))
            .collect()
    }

    pub fn param_matrix(&self, p: &Param) -> MatrixGerm {
        let ring = self.ring();
        let m = Monomial::new(vec![p.exponents.0, p.exponents.1]);
        let entry = Polynomial::monomial(ring, m, Rational::from_integer(1.into()));
        scaled_unit(ring, (2, 2, true), p.position, entry)
    }

    pub fn displayed_normal_matrices(&self) -> Vec<MatrixGerm> {
        self.displayed_normal_space()
            .iter()
            .map(|p| self.param_matrix(p))
            .collect()
    }

    /// `θ = Σ coeff · (parameter matrix)`; missing names count as zero.
    pub fn theta(&self, coeffs: &BTreeMap<String, Rational>) -> Result<MatrixGerm> {
        for name in coeffs.keys() {
            if self.param(name).is_none() {
                return Err(Error::UnknownCoefficient {
                    name: name.clone(),
                    form: self.id,
                });
            }
        }
        let mut theta = MatrixGerm::zero(self.ring(), 2, 2, true);
        for p in &self.params {
            if let Some(c) = coeffs.get(&p.name) {
                if !c.is_zero() {
                    theta = theta.add(&self.param_matrix(p).scale(c))?;
                }
            }
        }
        Ok(theta)
    }

    /// Expected verdict for a direction given by coefficients.
    pub fn expected(&self, coeffs: &BTreeMap<String, Rational>) -> Expectation {
        let nz = |name: &str| coeffs.get(name).is_some_and(|c| !c.is_zero());
        let nonconstant = self.params.iter().any(|p| !p.is_constant() && nz(&p.name));
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => {
                let r = k.min(l);
                let low = self.params.iter().any(|p| {
                    let deg = p.exponents.1;
                    !p.is_constant() && deg < r && nz(&p.name)
                });
                if low {
                    Expectation::NotLipschitz
                } else if !nonconstant {
                    Expectation::Lipschitz
                } else {
                    Expectation::Unclaimed
                }
            }
            (2, _, _) => flag(!nz("c")),
            (4, Some(k), _) => flag((1..k).all(|i| !nz(&format!("a{i}")))),
            (5, _, _) => flag(!nz("a3") && !nz("a5")),
            _ => flag(!nonconstant),
        }
    }

    /// The curve used with the row's lemma, over `(t, x, y, t', x', y')`.
    pub fn lemma_curve(&self, doubled: &Ring) -> Result<TestCurve> {
        TestCurve::parse(&self.lemma_curve_text(), doubled)
    }

    pub fn lemma_curve_text(&self) -> String {
        let mono = |c: u32, e: u32| match (c, e) {
            (1, 1) => "s".to_string(),
            (1, e) => format!("s^{e}"),
            (c, 1) => format!("{c}s"),
            (c, e) => format!("{c}s^{e}"),
        };
        let (t, x, y, xp, yp) = match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => {
                let n = k + l;
                (mono(1, n), mono(2, n), mono(2, 1), mono(1, n), mono(1, 1))
            }
            (2, _, _) => (mono(1, 1), mono(2, 2), mono(2, 1), mono(1, 2), mono(1, 1)),
            (3, Some(k), _) | (4, Some(k), _) => {
                (mono(1, k), mono(2, k), mono(2, 1), mono(1, k), mono(1, 1))
            }
            (5, _, _) => (mono(1, 1), mono(2, 3), mono(2, 2), mono(1, 3), mono(1, 2)),
            _ => (mono(1, 2), mono(2, 3), mono(2, 1), mono(1, 3), mono(1, 1)),
        };
        format!("{t}, {x}, {y}, {t}, {xp}, {yp}")
    }

    /// Exponent `r` with `φ*(I_D(F̃)) ⊆ ⟨s^r⟩` along the lemma curve.
    pub fn containment_exponent(&self) -> u32 {
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => k.min(l),
            (2, _, _) => 2,
            (3, Some(k), _) | (4, Some(k), _) => k,
            _ => 3,
        }
    }

    /// Default largest exponent for enumerated test curves.
    pub fn default_max_exponent(&self) -> u32 {
        match (self.id, self.k, self.l) {
            (1, Some(k), Some(l)) => k + l + 2,
            (_, Some(k), _) => 2 * k + 2,
            _ => 6,
        }
    }

    /// Parameters whose matrix lies in the truncated tangent space, i.e.
    /// that do not give independent normal directions.
    pub fn redundant_params(&self, tangent: &TangentSpaceResult) -> Vec<String> {
        self.params
            .iter()
            .filter(|p| tangent.contains(&self.param_matrix(p)))
            .map(|p| p.name.clone())
            .collect()
    }
}

fn flag(lipschitz: bool) -> Expectation {
    if lipschitz {
        Expectation::Lipschitz
    } else {
        Expectation::NotLipschitz
    }
}

fn params_for(id: u8, k: Option<u32>, l: Option<u32>) -> Vec<Param> {
    let d = (0, 0);
    let o = (0, 1);
    let t = (1, 1);
    let mut v = Vec::new();
    match (id, k, l) {
        (1, Some(k), Some(l)) => {
            v.extend((0..k).map(|i| Param::new(format!("a{i}"), (0, i), d)));
            v.extend((0..l - 1).map(|j| Param::new(format!("b{j}"), (0, j), t)));
        }
        (2, Some(k), _) => {
            v.push(Param::new("a", (0, 0), d));
            v.push(Param::new("b", (0, 0), o));
            v.push(Param::new("c", (0, 1), o));
            v.extend((0..k - 1).map(|i| Param::new(format!("d{i}"), (i, 0), t)));
        }
        (3, Some(k), _) => {
            v.extend((0..k - 1).map(|i| Param::new(format!("a{i}"), (0, i), d)));
            v.push(Param::new("a", (0, 0), o));
            v.extend((0..k).map(|j| Param::new(format!("b{j}"), (0, j), t)));
        }
        (4, Some(k), _) => {
            v.push(Param::new("a", (0, 0), d));
            v.extend((1..k).map(|i| Param::new(format!("a{i}"), (0, i), d)));
            v.push(Param::new("b", (0, 0), o));
            v.extend((0..k).map(|j| Param::new(format!("b{j}"), (j, 0), t)));
        }
        (5, _, _) => {
            v.push(Param::new("a1", (0, 0), d));
            v.push(Param::new("a2", (0, 0), t));
            v.push(Param::new("a3", (0, 1), d));
            v.push(Param::new("a4", (0, 2), d));
            v.push(Param::new("a5", (0, 1), t));
            v.push(Param::new("a6", (0, 2), t));
            v.push(Param::new("b", (0, 0), o));
        }
        _ => {
            v.push(Param::new("a1", (0, 0), d));
            v.push(Param::new("a2", (0, 0), t));
            v.push(Param::new("a3", (0, 0), o));
            v.push(Param::new("a4", (0, 1), t));
            v.push(Param::new("a5", (0, 1), d));
            v.push(Param::new("a6", (0, 1), o));
            v.push(Param::new("a7", (0, 2), o));
        }
    }
    v
}

/// Reads `name=rational, …`.
pub fn parse_coefficients(text: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::syntax(0, format!("expected `name=value`, found `{part}`")))?;
        let value = crate::poly::parse_rational_literal(value)?;
        out.insert(name.trim().to_string(), value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn coeffs(pairs: &[(&str, i64)]) -> BTreeMap<String, Rational> {
        pairs
            .iter()
            .map(|(n, v)| (n.to_string(), rational(*v)))
            .collect()
    }

    #[test]
    fn germs_match_the_table() {
        let shown = |id, k, l| NormalForm::new(id, k, l).unwrap().germ().to_string();
        assert_eq!(shown(1, Some(2), Some(3)), "sym: y^2, x ; x, y^3");
        assert_eq!(shown(2, Some(3), None), "sym: x, 0 ; 0, x^3 + y^2");
        assert_eq!(shown(3, Some(2), None), "sym: x, 0 ; 0, x*y + y^2");
        assert_eq!(shown(4, Some(2), None), "sym: x, y^2 ; y^2, x*y");
        assert_eq!(shown(5, None, None), "sym: x, y^2 ; y^2, x^2");
        assert_eq!(shown(6, None, None), "sym: x, 0 ; 0, y^3 + x^2");
    }

    #[test]
    fn parameter_constraints() {
        assert!(NormalForm::new(1, Some(0), Some(2)).is_err());
        assert!(NormalForm::new(1, Some(1), Some(1)).is_err());
        assert!(NormalForm::new(3, Some(1), None).is_err());
        assert!(NormalForm::new(2, None, None).is_err());
        assert!(NormalForm::new(7, None, None).is_err());
    }

    #[test]
    fn theta_examples() {
        let e6 = NormalForm::new(5, None, None).unwrap();
        assert_eq!(
            e6.theta(&coeffs(&[("a4", 1)])).unwrap().to_string(),
            "sym: y^2, 0 ; 0, 0"
        );
        let r3 = NormalForm::new(3, Some(2), None).unwrap();
        assert!(r3.theta(&BTreeMap::new()).unwrap().is_zero());
        let r2 = NormalForm::new(2, Some(3), None).unwrap();
        assert_eq!(
            r2.theta(&coeffs(&[("c", 1)])).unwrap().to_string(),
            "sym: 0, y ; y, 0"
        );
        assert!(matches!(
            r2.theta(&coeffs(&[("zz", 1)])),
            Err(Error::UnknownCoefficient { form: 2, .. })
        ));
    }

    #[test]
    fn expectations() {
        let r1 = NormalForm::new(1, Some(2), Some(2)).unwrap();
        assert_eq!(
            r1.expected(&coeffs(&[("a1", 1)])),
            Expectation::NotLipschitz
        );
        assert_eq!(r1.expected(&coeffs(&[("a0", 1)])), Expectation::Lipschitz);
        let r1 = NormalForm::new(1, Some(4), Some(2)).unwrap();
        assert_eq!(r1.expected(&coeffs(&[("a3", 1)])), Expectation::Unclaimed);
        assert_eq!(
            r1.expected(&coeffs(&[("a1", 1)])),
            Expectation::NotLipschitz
        );
        let r1 = NormalForm::new(1, Some(4), Some(3)).unwrap();
        assert_eq!(
            r1.expected(&coeffs(&[("a1", 1)])),
            Expectation::NotLipschitz
        );
        assert_eq!(
            r1.expected(&coeffs(&[("b1", 1)])),
            Expectation::NotLipschitz
        );
        let r5 = NormalForm::new(5, None, None).unwrap();
        assert_eq!(
            r5.expected(&coeffs(&[("a4", 1), ("a6", 1)])),
            Expectation::Lipschitz
        );
        assert_eq!(
            r5.expected(&coeffs(&[("a5", 1)])),
            Expectation::NotLipschitz
        );
        let r4 = NormalForm::new(4, Some(3), None).unwrap();
        assert_eq!(r4.expected(&coeffs(&[("b2", 1)])), Expectation::Lipschitz);
        assert_eq!(
            r4.expected(&coeffs(&[("a2", 1)])),
            Expectation::NotLipschitz
        );
    }

    #[test]
    fn labels() {
        let r1 = NormalForm::new(1, Some(2), Some(3)).unwrap();
        assert_eq!(r1.table_label(), "A_6");
        assert_eq!(r1.lemma_label(), "A_4");
        assert!(r1.label_discrepancy());
        assert_eq!(r1.milnor_number(), 4);
        assert_eq!(r1.lemma_curve_text(), "s^5, 2s^5, 2s, s^5, s^5, s");
        let r6 = NormalForm::new(6, None, None).unwrap();
        assert_eq!(r6.lemma_curve_text(), "s^2, 2s^3, 2s, s^2, s^3, s");
        assert!(!r6.label_discrepancy());
    }

    #[test]
    fn coefficient_text() {
        let c = parse_coefficients("b1=1, a2 = -3/4").unwrap();
        assert_eq!(c["a2"], crate::poly::ratio(-3, 4));
        assert!(parse_coefficients("b1").is_err());
        assert!(parse_coefficients("").unwrap().is_empty());
    }
}
