//! The versioned JSON report document. Layout is deterministic: rows are
//! sorted by (suite, check) and elapsed time never enters the bytes, so
//! identical config and seed reproduce identical output.

use pnspace_core::report::{CheckOutcome, VerificationReport};
use serde::Serialize;

#[derive(Serialize)]
pub struct ReportDocument {
    pub report_version: u32,
    pub tool: String,
    pub config: ConfigEcho,
    pub reports: Vec<ReportRow>,
    pub aggregate: bool,
    #[serde(skip)]
    pub any_inconclusive: bool,
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub space: String,
    pub subspace: Option<String>,
    pub suites: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub horizon: usize,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct ReportRow {
    pub suite: String,
    pub check: String,
    pub pass: bool,
    pub margin: f64,
    pub witness: Option<String>,
    pub samples: usize,
    pub seed: u64,
    /// Always zero; wall-clock timing goes to stderr instead so that
    /// identical runs produce identical report bytes.
    pub elapsed_ms: u64,
}

pub fn assemble(config: ConfigEcho, rows: Vec<(String, VerificationReport)>) -> ReportDocument {
    let any_inconclusive = rows
        .iter()
        .any(|(_, r)| matches!(r.outcome, CheckOutcome::Inconclusive));
    let mut reports: Vec<ReportRow> = rows
        .into_iter()
        .map(|(suite, r)| ReportRow {
            suite,
            pass: r.pass(),
            check: r.check,
            margin: r.worst_margin,
            witness: r.witness,
            samples: r.samples,
            seed: r.seed,
            elapsed_ms: 0,
        })
        .collect();
    reports.sort_by(|a, b| {
        (a.suite.as_str(), a.check.as_str()).cmp(&(b.suite.as_str(), b.check.as_str()))
    });
    let aggregate = reports.iter().all(|r| r.pass);
    ReportDocument {
        report_version: 1,
        tool: format!("pnspace {}", env!("CARGO_PKG_VERSION")),
        config,
        reports,
        aggregate,
        any_inconclusive,
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report document serializes");
        text.push('\n');
        text
    }
}
