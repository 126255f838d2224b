//! Verdict pipeline for one-parameter deformations `F + tθ`.

mod catalog;
mod report;
mod routes;
mod table;

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use catalog::{parse_coefficients, Expectation, NormalForm, Param, CATALOG_ROWS};
pub use report::AnalysisReport;
pub use routes::{
    default_max_exponent, route, route_names, ConstantDirection, CurveSearch, DiagonalRoute,
    InclusionRoute, InclusionStep, InclusionTrace, Membership, RouteContext, RouteResult,
    VerdictRoute,
};
pub use table::{
    random_coefficients, reproduce_table, CellReport, DirectionKind, TableConfig, TableReport,
};

use crate::curve::{CurveConfig, SearchReport, Witness};
use crate::double::{build_unfolding, MatrixGerm, DEFAULT_PARAMETER};
use crate::error::{Error, Result};
use crate::groebner::Budget;

/// Assumption under which the criterion is applied.
pub const HOMEOMORPHISM_PRECONDITION: &str = "unfolding is homeomorphism onto image";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Lipschitz,
    NotLipschitz,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Lipschitz => "Lipschitz",
            Outcome::NotLipschitz => "NotLipschitz",
            Outcome::Inconclusive => "Inconclusive",
        })
    }
}

/// Ground field label; computations are over ℚ either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Real,
    Complex,
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Field, String> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            _ => Err(format!("unknown field `{s}` (expected real or complex)")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", content = "data", rename_all = "lowercase")]
pub enum Certificate {
    Inclusion(InclusionTrace),
    Witness(Box<Witness>),
    Search(SearchReport),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Inclusion(_) => "inclusion",
            Certificate::Witness(_) => "witness",
            Certificate::Search(_) => "search",
        }
    }

    /// Recombines cofactor traces or re-verifies the witness from scratch.
    /// Search reports carry no claim and always replay.
    pub fn replay(&self) -> Result<bool> {
        match self {
            Certificate::Inclusion(trace) => Ok(trace.replay()),
            Certificate::Witness(w) => w.verify(),
            Certificate::Search(_) => Ok(true),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub budget: Budget,
    /// `None` picks a curve family from the germ's degree.
    pub curves: Option<CurveConfig>,
    pub curve_budget: usize,
    /// Curves tried before the enumerated stream, as comma-separated
    /// components over the doubled ring.
    pub extra_curves: Vec<String>,
    pub audit: bool,
    pub field: Field,
    pub parameter: String,
    /// Route names in the order they are tried.
    pub routes: Vec<String>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            budget: Budget::default(),
            curves: None,
            curve_budget: 5000,
            extra_curves: Vec::new(),
            audit: false,
            field: Field::Real,
            parameter: DEFAULT_PARAMETER.to_string(),
            routes: route_names().into_iter().map(String::from).collect(),
        }
    }
}

impl AnalyzeOptions {
    /// Defaults tuned for a catalog germ: its lemma curve goes first and
    /// the curve family is sized from its parameters.
    pub fn for_normal_form(nf: &NormalForm) -> AnalyzeOptions {
        AnalyzeOptions {
            curves: Some(CurveConfig::new(nf.default_max_exponent())),
            extra_curves: vec![nf.lemma_curve_text()],
            ..AnalyzeOptions::default()
        }
    }
}

/// What a route did during one analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteStatus {
    Decided(Outcome),
    Declined(String),
    BudgetExceeded(String),
    NotRun,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteLog {
    pub route: String,
    pub status: RouteStatus,
    #[serde(serialize_with = "ser_millis")]
    pub elapsed: Duration,
}

fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Route that decided, or `"none"`.
    pub route: String,
    pub certificate: Certificate,
    pub assumed_preconditions: Vec<String>,
    pub field: Field,
    pub parameter: String,
    pub log: Vec<RouteLog>,
    pub total: Duration,
    /// Set in audit mode: every route was run.
    pub audited: bool,
}

impl Verdict {
    pub fn replay(&self) -> Result<bool> {
        self.certificate.replay()
    }

    /// Outcomes of every route that reached a decision.
    pub fn decisions(&self) -> impl Iterator<Item = (&str, Outcome)> {
        self.log.iter().filter_map(|l| match l.status {
            RouteStatus::Decided(o) => Some((l.route.as_str(), o)),
            _ => None,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.outcome)?;
        writeln!(f, "route: {}", self.route)?;
        match &self.certificate {
            Certificate::Inclusion(trace) => {
                for step in &trace.steps {
                    writeln!(f, "  {} ({} memberships)", step.claim, step.members.len())?;
                }
            }
            Certificate::Witness(w) => writeln!(f, "  witness {w}")?,
            Certificate::Search(r) => writeln!(
                f,
                "  no witness among {} curves (budget {}{})",
                r.curves_tried,
                r.budget,
                if r.exhausted_stream {
                    ", stream exhausted"
                } else {
                    ""
                }
            )?,
        }
        for l in &self.log {
            if let RouteStatus::BudgetExceeded(m) = &l.status {
                writeln!(f, "  note: {} skipped, {m}", l.route)?;
            }
        }
        write!(f, "assumed: {}", self.assumed_preconditions.join("; "))
    }
}

/// Runs the route pipeline on `F + tθ`. The first route to decide wins;
/// in audit mode all routes run and conflicting decisions are an error.
pub fn analyze(f: &MatrixGerm, theta: &MatrixGerm, options: &AnalyzeOptions) -> Result<Verdict> {
    let start = Instant::now();
    let routes = options
        .routes
        .iter()
        .map(|n| route(n))
        .collect::<Result<Vec<_>>>()?;
    let unfolding = build_unfolding(f, theta, &options.parameter)?;
    let family = unfolding.double_ideal()?;
    let direction = unfolding.direction_ideal()?;
    let ctx = RouteContext {
        germ: f,
        unfolding: &unfolding,
        family: &family,
        direction: &direction,
        options,
    };

    let mut log = Vec::with_capacity(routes.len());
    let mut decided: Option<(String, Outcome, Certificate)> = None;
    let mut search = None;
    for r in &routes {
        if decided.is_some() && !options.audit {
            log.push(RouteLog {
                route: r.name().into(),
                status: RouteStatus::NotRun,
                elapsed: Duration::ZERO,
            });
            continue;
        }
        let t0 = Instant::now();
        let status = match r.attempt(&ctx) {
            Ok(RouteResult::Decided(outcome, cert)) => {
                if let Some((first, prev, _)) = &decided {
                    if *prev != outcome {
                        return Err(Error::AuditContradiction(format!(
                            "route {first} gives {prev}, route {} gives {outcome}",
                            r.name()
                        )));
                    }
                } else {
                    decided = Some((r.name().to_string(), outcome, cert));
                }
                RouteStatus::Decided(outcome)
            }
            Ok(RouteResult::Declined { reason, search: s }) => {
                if s.is_some() {
                    search = s;
                }
                RouteStatus::Declined(reason)
            }
            Err(e) if e.is_budget() => RouteStatus::BudgetExceeded(e.to_string()),
            Err(e) => return Err(e),
        };
        log.push(RouteLog {
            route: r.name().into(),
            status,
            elapsed: t0.elapsed(),
        });
    }

    let (route, outcome, certificate) = decided.unwrap_or_else(|| {
        (
            "none".into(),
            Outcome::Inconclusive,
            Certificate::Search(search.unwrap_or_default()),
        )
    });
    Ok(Verdict {
        outcome,
        route,
        certificate,
        assumed_preconditions: vec![HOMEOMORPHISM_PRECONDITION.to_string()],
        field: options.field,
        parameter: options.parameter.clone(),
        log,
        total: start.elapsed(),
        audited: options.audit,
    })
}
