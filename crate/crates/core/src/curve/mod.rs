//! Curve test for integral closure: pull ideals back along polynomial arcs
//! `φ(s)` and compare orders of vanishing.

mod enumerate;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub use enumerate::{enumerate_test_curves, CurveConfig, CurveStream};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{same_ring, MonomialOrder, Order, Polynomial, Ring, RingContext, UnivariatePoly};

/// Arc `s ↦ (φ₁(s), …, φ_n(s))` through the origin of a ring's affine space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCurve {
    ring: Ring,
    components: Vec<UnivariatePoly>,
}

impl TestCurve {
    pub fn new(ring: &Ring, components: Vec<UnivariatePoly>) -> Result<TestCurve> {
        if components.len() != ring.arity() {
            return Err(Error::InvalidCurve(format!(
                "{} components for {} variables",
                components.len(),
                ring.arity()
            )));
        }
        if let Some(i) = components.iter().position(|c| !c.constant_term().is_zero()) {
            return Err(Error::InvalidCurve(format!(
                "component for `{}` does not vanish at s = 0",
                ring.names()[i]
            )));
        }
        Ok(TestCurve {
            ring: ring.clone(),
            components,
        })
    }

    /// Comma-separated polynomials in `s`, one per ring variable in order.
    pub fn parse(text: &str, ring: &Ring) -> Result<TestCurve> {
        let comps = text
            .split(',')
            .map(|c| UnivariatePoly::parse(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        TestCurve::new(ring, comps)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[UnivariatePoly] {
        &self.components
    }

    /// `p ∘ φ`
    pub fn pullback(&self, p: &Polynomial) -> Result<UnivariatePoly> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(Error::RingMismatch(format!(
                "curve lives in {}, polynomial in {}",
                self.ring,
                p.ring()
            )));
        }
        let mut powers: Vec<Vec<UnivariatePoly>> = self
            .components
            .iter()
            .map(|c| {
                vec![
                    UnivariatePoly::monomial(num_traits::One::one(), 0),
                    c.clone(),
                ]
            })
            .collect();
        let mut acc = UnivariatePoly::zero();
        for (m, c) in p.terms() {
            let mut term = UnivariatePoly::monomial(c.clone(), 0);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&cache[1]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Display for TestCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for TestCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Pullback of every generator and the order `m` with `φ*(I) = ⟨s^m⟩`.
#[derive(Debug, Clone)]
pub struct PullbackSummary {
    pub curve: TestCurve,
    pub pullbacks: Vec<UnivariatePoly>,
    pub orders: Vec<Order>,
    pub ideal_order: Order,
}

pub fn pullback_ideal(curve: &TestCurve, ideal: &Ideal) -> Result<PullbackSummary> {
    if !same_ring(ideal.ring(), curve.ring()) {
        return Err(Error::RingMismatch(format!(
            "curve lives in {}, ideal in {}",
            curve.ring(),
            ideal.ring()
        )));
    }
    let pullbacks = ideal
        .generators()
        .iter()
        .map(|g| curve.pullback(g))
        .collect::<Result<Vec<_>>>()?;
    let orders: Vec<Order> = pullbacks
        .iter()
        .map(UnivariatePoly::order_of_vanishing)
        .collect();
    let ideal_order = orders.iter().copied().min().unwrap_or(Order::Infinite);
    Ok(PullbackSummary {
        curve: curve.clone(),
        pullbacks,
        orders,
        ideal_order,
    })
}

/// `ideal_order − element_order`, infinite when the ideal pulls back to 0.
fn margin(ideal_order: Order, element_order: u32) -> Order {
    match ideal_order {
        Order::Finite(m) => Order::Finite(m.saturating_sub(element_order)),
        Order::Infinite => Order::Infinite,
    }
}

/// A curve on which `ord(φ*h) < ord(φ*I)`, so `h` is not integral over `I`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub curve: TestCurve,
    #[serde(serialize_with = "ser_display")]
    pub element: Polynomial,
    #[serde(serialize_with = "ser_display")]
    pub element_pullback: UnivariatePoly,
    pub element_order: u32,
    pub ideal_order: Order,
    pub margin: Order,
    #[serde(skip)]
    pub ideal_generators: Vec<Polynomial>,
}

pub(crate) fn ser_display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Orders recomputed along a separate path: generic substitution into
/// `ℚ[s]` followed by reading off the lowest exponent of the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub element_order: Order,
    pub ideal_order: Order,
}

impl Witness {
    pub fn replay(&self) -> Result<Replay> {
        let s_ring = RingContext::new(&["s"], MonomialOrder::GrevLex)?;
        let assignment: BTreeMap<String, Polynomial> = self
            .curve
            .ring()
            .names()
            .iter()
            .zip(self.curve.components())
            .map(|(n, c)| (n.clone(), c.to_polynomial(&s_ring)))
            .collect();
        let low = |p: &Polynomial| -> Result<Order> {
            let q = p.substitute(&assignment)?;
            Ok(q.low_degree().map_or(Order::Infinite, Order::Finite))
        };
        let element_order = low(&self.element)?;
        let mut ideal_order = Order::Infinite;
        for g in &self.ideal_generators {
            ideal_order = ideal_order.min(low(g)?);
        }
        Ok(Replay {
            element_order,
            ideal_order,
        })
    }

    /// Replays from scratch and checks the strict inequality and the
    /// recorded orders.
    pub fn verify(&self) -> Result<bool> {
        let r = self.replay()?;
        Ok(r.element_order == Order::Finite(self.element_order)
            && r.ideal_order == self.ideal_order
            && r.element_order < r.ideal_order)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "φ(s) = ({}): ord φ*({}) = {} < {} = ord φ*(I)",
            self.curve, self.element, self.element_order, self.ideal_order
        )
    }
}

fn witness_from(
    summary: &PullbackSummary,
    h: &Polynomial,
    ideal: &Ideal,
) -> Result<Option<Witness>> {
    let ph = summary.curve.pullback(h)?;
    let Order::Finite(o) = ph.order_of_vanishing() else {
        return Ok(None);
    };
    if Order::Finite(o) >= summary.ideal_order {
        return Ok(None);
    }
    Ok(Some(Witness {
        curve: summary.curve.clone(),
        element: h.clone(),
        element_pullback: ph,
        element_order: o,
        ideal_order: summary.ideal_order,
        margin: margin(summary.ideal_order, o),
        ideal_generators: ideal.generators().to_vec(),
    }))
}

/// A witness iff `ord(φ*h) < ord(φ*I)`.
pub fn curve_obstruction(
    curve: &TestCurve,
    h: &Polynomial,
    ideal: &Ideal,
) -> Result<Option<Witness>> {
    if !same_ring(h.ring(), curve.ring()) {
        return Err(Error::RingMismatch(format!(
            "curve lives in {}, element in {}",
            curve.ring(),
            h.ring()
        )));
    }
    let summary = pullback_ideal(curve, ideal)?;
    witness_from(&summary, h, ideal)
}

/// Curves examined without finding a witness. Not a membership proof.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchReport {
    pub curves_tried: usize,
    pub elements: usize,
    pub budget: usize,
    pub exhausted_stream: bool,
    /// Smallest `ord(φ*I) − ord(φ*h)` seen over curves where both are finite.
    pub min_margin: Option<u32>,
    /// Curve attaining `min_margin`.
    pub tightest_curve: Option<String>,
}

#[derive(Debug, Clone)]
pub enum ClosureOutcome {
    NotInClosure(Witness),
    NoObstructionFound(SearchReport),
}

impl ClosureOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ClosureOutcome::NotInClosure(w) => Some(w),
            ClosureOutcome::NoObstructionFound(_) => None,
        }
    }
}

const CHUNK: usize = 64;

/// Tests `h` against at most `budget` curves of the stream, returning the
/// first witness in stream order.
pub fn closure_test(
    h: &Polynomial,
    ideal: &Ideal,
    curves: impl IntoIterator<Item = TestCurve>,
    budget: usize,
) -> Result<ClosureOutcome> {
    closure_test_many(std::slice::from_ref(h), ideal, curves, budget)
}

/// As [`closure_test`] for several elements at once; the witness returned
/// is first by curve, then by element index.
pub fn closure_test_many(
    elements: &[Polynomial],
    ideal: &Ideal,
    curves: impl IntoIterator<Item = TestCurve>,
    budget: usize,
) -> Result<ClosureOutcome> {
    for h in elements {
        if !same_ring(h.ring(), ideal.ring()) {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                h.ring(),
                ideal.ring()
            )));
        }
    }
    let live: Vec<&Polynomial> = elements.iter().filter(|h| !h.is_zero()).collect();
    let mut report = SearchReport {
        elements: elements.len(),
        budget,
        ..SearchReport::default()
    };
    if live.is_empty() {
        return Ok(ClosureOutcome::NoObstructionFound(report));
    }
    let mut iter = curves.into_iter().take(budget);
    loop {
        let chunk: Vec<TestCurve> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            report.exhausted_stream = report.curves_tried < budget;
            return Ok(ClosureOutcome::NoObstructionFound(report));
        }
        let results: Vec<Result<(Option<Witness>, Option<u32>)>> = chunk
            .par_iter()
            .map(|curve| {
                let summary = pullback_ideal(curve, ideal)?;
                let mut best: Option<u32> = None;
                for h in &live {
                    if let Some(w) = witness_from(&summary, h, ideal)? {
                        return Ok((Some(w), None));
                    }
                    if let (Order::Finite(m), Order::Finite(o)) =
                        (summary.ideal_order, curve.pullback(h)?.order_of_vanishing())
                    {
                        let mg = m.saturating_sub(o);
                        best = Some(best.map_or(mg, |b: u32| b.min(mg)));
                    }
                }
                Ok((None, best))
            })
            .collect();
        for (curve, r) in chunk.iter().zip(results) {
            let (w, mg) = r?;
            report.curves_tried += 1;
            if let Some(w) = w {
                return Ok(ClosureOutcome::NotInClosure(w));
            }
            if let Some(mg) = mg {
                if report.min_margin.is_none_or(|b| mg < b) {
                    report.min_margin = Some(mg);
                    report.tightest_curve = Some(curve.to_string());
                }
            }
        }
    }
}
