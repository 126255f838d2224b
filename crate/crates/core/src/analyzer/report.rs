use std::collections::BTreeMap;

use serde::Serialize;

use super::{Certificate, Field, Outcome, RouteLog, Verdict};
use crate::double::MatrixGerm;
use crate::poly::Rational;

/// Stable JSON shape of one analysis.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub germ: String,
    pub parameters: BTreeMap<String, u32>,
    pub theta: String,
    pub theta_coefficients: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub route: String,
    pub certificate: Certificate,
    pub assumed_preconditions: Vec<String>,
    pub field: Field,
    pub deformation_parameter: String,
    pub routes: Vec<RouteLog>,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    pub routes_ms: BTreeMap<String, f64>,
}

impl AnalysisReport {
    pub fn new(
        germ: &MatrixGerm,
        parameters: BTreeMap<String, u32>,
        coefficients: &BTreeMap<String, Rational>,
        theta: &MatrixGerm,
        verdict: &Verdict,
    ) -> AnalysisReport {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1000.0;
        AnalysisReport {
            germ: germ.to_string(),
            parameters,
            theta: theta.to_string(),
            theta_coefficients: coefficients
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
            outcome: verdict.outcome,
            route: verdict.route.clone(),
            certificate: verdict.certificate.clone(),
            assumed_preconditions: verdict.assumed_preconditions.clone(),
            field: verdict.field,
            deformation_parameter: format!(
                "{} (the same parameter is sometimes written y)",
                verdict.parameter
            ),
            routes: verdict.log.clone(),
            timings: Timings {
                total_ms: ms(verdict.total),
                routes_ms: verdict
                    .log
                    .iter()
                    .map(|l| (l.route.clone(), ms(l.elapsed)))
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
