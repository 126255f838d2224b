use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::curve::{
    closure_test_many, enumerate_test_curves, ClosureOutcome, SearchReport, TestCurve,
};
use crate::double::{DoubledIdeal, MatrixGerm, Unfolding};
use crate::error::Result;
use crate::groebner::{verify_lift, Ideal};
use crate::poly::Polynomial;
use crate::registry::Registry;
use crate::tangent::is_reduced_point_minors;

use super::{AnalyzeOptions, Certificate, Outcome};

/// Everything a route may look at; built once per analysis.
pub struct RouteContext<'a> {
    pub germ: &'a MatrixGerm,
    pub unfolding: &'a Unfolding,
    /// `I_D(F̃)`
    pub family: &'a DoubledIdeal,
    /// `I_D(θ)`
    pub direction: &'a DoubledIdeal,
    pub options: &'a AnalyzeOptions,
}

pub enum RouteResult {
    Decided(Outcome, Certificate),
    Declined {
        reason: String,
        search: Option<SearchReport>,
    },
}

impl RouteResult {
    fn declined(reason: impl Into<String>) -> RouteResult {
        RouteResult::Declined {
            reason: reason.into(),
            search: None,
        }
    }
}

/// One stage of the verdict pipeline.
pub trait VerdictRoute: Send + Sync {
    fn name(&self) -> &'static str;

    /// Budget errors are recoverable: the pipeline moves on to the next route.
    fn attempt(&self, ctx: &RouteContext<'_>) -> Result<RouteResult>;
}

/// `θ` constant, so `I_D(θ) = 0`.
pub struct ConstantDirection;

/// Entries of `F` have independent linear parts: `I_D(θ) ⊆ I_Δ ⊆ I_D(F̃)`.
pub struct DiagonalRoute;

/// `I_D(θ) ⊆ I_D(F̃)` by Gröbner membership.
pub struct InclusionRoute;

/// Curve witnesses against `I_D(θ) ⊆ closure of I_D(F̃)`.
pub struct CurveSearch;

/// `h = Σ cᵢ gᵢ` for an element of `I_D(θ)` or `I_Δ`.
#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    #[serde(serialize_with = "crate::curve::ser_display")]
    pub element: Polynomial,
    #[serde(serialize_with = "ser_polys")]
    pub cofactors: Vec<Polynomial>,
}

/// Proof that every listed element lies in the ideal spanned by
/// `ideal_generators`.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionStep {
    pub claim: String,
    #[serde(serialize_with = "ser_polys")]
    pub ideal_generators: Vec<Polynomial>,
    pub members: Vec<Membership>,
}

impl InclusionStep {
    pub fn replay(&self) -> bool {
        self.members
            .iter()
            .all(|m| verify_lift(&m.element, &self.ideal_generators, &m.cofactors))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionTrace {
    pub route: String,
    pub steps: Vec<InclusionStep>,
}

impl InclusionTrace {
    pub fn replay(&self) -> bool {
        self.steps.iter().all(InclusionStep::replay)
    }
}

pub(crate) fn ser_polys<S: serde::Serializer>(
    v: &[Polynomial],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// Lifts every element into `ideal`; `None` as soon as one is not a member.
fn lift_all(
    claim: &str,
    elements: &[Polynomial],
    ideal: &Ideal,
    ctx: &RouteContext<'_>,
) -> Result<Option<InclusionStep>> {
    let mut members = Vec::with_capacity(elements.len());
    for h in elements {
        match ideal.lift(h, &ctx.options.budget)? {
            Some(cofactors) => members.push(Membership {
                element: h.clone(),
                cofactors,
            }),
            None => return Ok(None),
        }
    }
    Ok(Some(InclusionStep {
        claim: claim.to_string(),
        ideal_generators: ideal.generators().to_vec(),
        members,
    }))
}

impl VerdictRoute for ConstantDirection {
    fn name(&self) -> &'static str {
        "constant-direction"
    }

    fn attempt(&self, ctx: &RouteContext<'_>) -> Result<RouteResult> {
        if !ctx.unfolding.direction().is_constant() {
            return Ok(RouteResult::declined("θ is not constant"));
        }
        let step = InclusionStep {
            claim: "I_D(θ) = 0".into(),
            ideal_generators: Vec::new(),
            members: Vec::new(),
        };
        Ok(RouteResult::Decided(
            Outcome::Lipschitz,
            Certificate::Inclusion(InclusionTrace {
                route: self.name().into(),
                steps: vec![step],
            }),
        ))
    }
}

impl VerdictRoute for DiagonalRoute {
    fn name(&self) -> &'static str {
        "diagonal"
    }

    fn attempt(&self, ctx: &RouteContext<'_>) -> Result<RouteResult> {
        if !is_reduced_point_minors(ctx.germ) {
            return Ok(RouteResult::declined(
                "linear parts of the entries do not span the source variables",
            ));
        }
        let diagonal = ctx.unfolding.diagonal_ideal();
        let Some(first) = lift_all("I_D(θ) ⊆ I_Δ", ctx.direction.generators(), &diagonal, ctx)?
        else {
            return Ok(RouteResult::declined("I_D(θ) ⊄ I_Δ"));
        };
        let Some(second) = lift_all(
            "I_Δ ⊆ I_D(F̃)",
            diagonal.generators(),
            ctx.family.ideal(),
            ctx,
        )?
        else {
            return Ok(RouteResult::declined("I_Δ ⊄ I_D(F̃)"));
        };
        Ok(RouteResult::Decided(
            Outcome::Lipschitz,
            Certificate::Inclusion(InclusionTrace {
                route: self.name().into(),
                steps: vec![first, second],
            }),
        ))
    }
}

impl VerdictRoute for InclusionRoute {
    fn name(&self) -> &'static str {
        "inclusion"
    }

    fn attempt(&self, ctx: &RouteContext<'_>) -> Result<RouteResult> {
        match lift_all(
            "I_D(θ) ⊆ I_D(F̃)",
            ctx.direction.generators(),
            ctx.family.ideal(),
            ctx,
        )? {
            Some(step) => Ok(RouteResult::Decided(
                Outcome::Lipschitz,
                Certificate::Inclusion(InclusionTrace {
                    route: self.name().into(),
                    steps: vec![step],
                }),
            )),
            // The closure may still contain I_D(θ).
            None => Ok(RouteResult::declined("I_D(θ) ⊄ I_D(F̃)")),
        }
    }
}

impl VerdictRoute for CurveSearch {
    fn name(&self) -> &'static str {
        "curve-search"
    }

    fn attempt(&self, ctx: &RouteContext<'_>) -> Result<RouteResult> {
        let ring = ctx.unfolding.doubled_ring();
        let extra = ctx
            .options
            .extra_curves
            .iter()
            .map(|c| TestCurve::parse(c, ring))
            .collect::<Result<Vec<_>>>()?;
        let n_extra = extra.len();
        let cfg = ctx
            .options
            .curves
            .clone()
            .unwrap_or_else(|| crate::curve::CurveConfig::new(default_max_exponent(ctx.germ)));
        let stream = extra.into_iter().chain(enumerate_test_curves(ring, &cfg)?);
        let outcome = closure_test_many(
            ctx.direction.generators(),
            ctx.family.ideal(),
            stream,
            ctx.options.curve_budget + n_extra,
        )?;
        Ok(match outcome {
            ClosureOutcome::NotInClosure(w) => {
                RouteResult::Decided(Outcome::NotLipschitz, Certificate::Witness(Box::new(w)))
            }
            ClosureOutcome::NoObstructionFound(report) => RouteResult::Declined {
                reason: format!("no witness among {} curves", report.curves_tried),
                search: Some(report),
            },
        })
    }
}

/// `2·(max entry degree) + 2` for germs outside the catalog.
pub fn default_max_exponent(f: &MatrixGerm) -> u32 {
    2 * f.max_degree().max(1) + 2
}

fn registry() -> &'static Registry<dyn VerdictRoute> {
    static REG: OnceLock<Registry<dyn VerdictRoute>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn VerdictRoute> = Registry::new("verdict route");
        r.register("constant-direction", Arc::new(ConstantDirection));
        r.register("diagonal", Arc::new(DiagonalRoute));
        r.register("inclusion", Arc::new(InclusionRoute));
        r.register("curve-search", Arc::new(CurveSearch));
        r
    })
}

pub fn route(name: &str) -> Result<Arc<dyn VerdictRoute>> {
    registry().get(name)
}

/// Registered routes in pipeline order.
pub fn route_names() -> Vec<&'static str> {
    registry().names()
}
