//! Report structures shared by `solve`, `exact`, and `verify`, with text and
//! JSON renderings. Every field is deterministic for a given input file, so
//! repeated runs emit identical bytes.

use pfle_core::engine::FreezeReason;
use pfle_core::verify::{CertificateReport, CheckKind};
use serde::Serialize;

use crate::format::{CostRecord, LeaseRecord};
use crate::numeric::{format_exact, ExactNumber};

pub fn check_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::PrimalFeasibility => "primal feasibility",
        CheckKind::DualFeasibility => "dual feasibility",
        CheckKind::RatioBounds => "ratio bounds",
        CheckKind::EventReplay => "event replay",
        CheckKind::SelectionStructure => "selection structure",
    }
}

pub fn freeze_text(reason: &FreezeReason) -> String {
    match reason {
        FreezeReason::ReachedOpenLease(lease) => format!(
            "reached open lease facility {} type {} start {}",
            lease.facility, lease.lease_type, lease.start
        ),
        FreezeReason::PenaltyExhausted => "penalty exhausted".into(),
        FreezeReason::Both(lease) => format!(
            "penalty exhausted while reaching open lease facility {} type {} start {}",
            lease.facility, lease.lease_type, lease.start
        ),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub passed: bool,
    pub violations: Vec<String>,
}

impl From<&CertificateReport> for CheckRecord {
    fn from(report: &CertificateReport) -> Self {
        CheckRecord {
            check: check_name(report.check),
            passed: report.passed(),
            violations: report.violations.iter().map(|v| v.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub alpha: Vec<ExactNumber>,
    pub freeze: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub points: usize,
    pub facilities: usize,
    pub clients: usize,
    pub lease_types: usize,
    pub candidates: usize,
    pub events: usize,
    pub pruned: bool,
    pub leases: Vec<LeaseRecord>,
    pub assignment: Vec<Option<usize>>,
    pub cost: CostRecord,
    pub dual_objective: ExactNumber,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_to_dual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CheckRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualReport>,
}

fn push_lease_lines(out: &mut String, leases: &[LeaseRecord]) {
    for (index, lease) in leases.iter().enumerate() {
        out.push_str(&format!(
            "  lease {index}: facility {}, type {}, start {}\n",
            lease.facility, lease.lease_type, lease.start
        ));
    }
}

fn push_check_lines(out: &mut String, checks: &[CheckRecord]) {
    for check in checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        out.push_str(&format!("  {}: {status}\n", check.check));
        for violation in &check.violations {
            out.push_str(&format!("    violation: {violation}\n"));
        }
    }
}

pub fn render_solve_text(report: &SolveReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance: {}\n", report.instance));
    out.push_str(&format!(
        "points: {}, facilities: {}, clients: {}, lease types: {}\n",
        report.points, report.facilities, report.clients, report.lease_types
    ));
    out.push_str(&format!("candidate leases: {}\n", report.candidates));
    out.push_str(&format!("events: {}\n", report.events));
    let suffix = if report.pruned { ", pruned" } else { "" };
    out.push_str(&format!("leases: {}{suffix}\n", report.leases.len()));
    push_lease_lines(&mut out, &report.leases);
    out.push_str("assignment:\n");
    for (client, served) in report.assignment.iter().enumerate() {
        match served {
            Some(lease) => out.push_str(&format!("  client {client} -> lease {lease}\n")),
            None => out.push_str(&format!("  client {client} -> penalty\n")),
        }
    }
    out.push_str(&format!(
        "cost: leasing {}, connection {}, penalty {}, total {}\n",
        format_exact(&report.cost.leasing.0),
        format_exact(&report.cost.connection.0),
        format_exact(&report.cost.penalty.0),
        format_exact(&report.cost.total.0),
    ));
    out.push_str(&format!(
        "dual objective: {}\n",
        format_exact(&report.dual_objective.0)
    ));
    match &report.ratio_to_dual {
        Some(ratio) => out.push_str(&format!("ratio to dual: {ratio}\n")),
        None => out.push_str("ratio to dual: - (dual objective is zero)\n"),
    }
    if let Some(checks) = &report.certificates {
        out.push_str("certificates:\n");
        push_check_lines(&mut out, checks);
    }
    if let Some(dual) = &report.dual {
        out.push_str("dual values:\n");
        for (client, (alpha, freeze)) in dual.alpha.iter().zip(&dual.freeze).enumerate() {
            out.push_str(&format!(
                "  client {client}: alpha {}, {freeze}\n",
                format_exact(&alpha.0)
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub instance: String,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

pub fn render_verify_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance: {}\n", report.instance));
    push_check_lines(&mut out, &report.checks);
    out.push_str(&format!(
        "result: {}\n",
        if report.passed { "pass" } else { "FAIL" }
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub instance: String,
    pub candidates: usize,
    pub optimum: ExactNumber,
    pub optimum_leases: Vec<LeaseRecord>,
    pub optimum_assignment: Vec<Option<usize>>,
    pub engine_total: ExactNumber,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_to_optimum: Option<String>,
}

pub fn render_exact_text(report: &ExactReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance: {}\n", report.instance));
    out.push_str(&format!("candidate leases: {}\n", report.candidates));
    out.push_str(&format!(
        "optimum: {}\n",
        format_exact(&report.optimum.0)
    ));
    out.push_str(&format!("optimum leases: {}\n", report.optimum_leases.len()));
    push_lease_lines(&mut out, &report.optimum_leases);
    out.push_str(&format!(
        "engine total: {}\n",
        format_exact(&report.engine_total.0)
    ));
    match &report.ratio_to_optimum {
        Some(ratio) => out.push_str(&format!("ratio to optimum: {ratio}\n")),
        None => out.push_str("ratio to optimum: - (optimum is zero)\n"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pfle_core::model::rational;
    use pfle_core::LeaseDescriptor;

    #[test]
    fn solve_text_lists_everything() {
        let report = SolveReport {
            instance: "fixture.json".into(),
            points: 1,
            facilities: 1,
            clients: 1,
            lease_types: 1,
            candidates: 1,
            events: 3,
            pruned: false,
            leases: vec![LeaseRecord {
                facility: 0,
                lease_type: 0,
                start: -5,
            }],
            assignment: vec![Some(0), None],
            cost: CostRecord {
                leasing: ExactNumber(rational(12)),
                connection: ExactNumber(rational(0)),
                penalty: ExactNumber(rational(0)),
                total: ExactNumber(rational(12)),
            },
            dual_objective: ExactNumber(rational(4)),
            ratio_to_dual: Some("3/1".into()),
            certificates: Some(vec![CheckRecord {
                check: "primal feasibility",
                passed: true,
                violations: vec![],
            }]),
            dual: Some(DualReport {
                alpha: vec![ExactNumber(rational(4))],
                freeze: vec!["penalty exhausted".into()],
            }),
        };
        let text = render_solve_text(&report);
        assert!(text.contains("ratio to dual: 3/1"), "{text}");
        assert!(text.contains("client 0 -> lease 0"), "{text}");
        assert!(text.contains("client 1 -> penalty"), "{text}");
        assert!(text.contains("facility 0, type 0, start -5"), "{text}");
        assert!(text.contains("primal feasibility: pass"), "{text}");
        assert!(text.contains("alpha 4, penalty exhausted"), "{text}");
        assert!(text.contains("total 12"), "{text}");
    }

    #[test]
    fn freeze_text_names_the_lease() {
        let lease = LeaseDescriptor {
            facility: 2,
            lease_type: 1,
            start: 7,
        };
        assert_eq!(
            freeze_text(&FreezeReason::ReachedOpenLease(lease)),
            "reached open lease facility 2 type 1 start 7"
        );
        assert!(freeze_text(&FreezeReason::Both(lease)).contains("penalty exhausted while"));
    }

    #[test]
    fn json_skips_absent_sections() {
        let report = VerifyReport {
            instance: "x.json".into(),
            checks: vec![CheckRecord {
                check: "event replay",
                passed: false,
                violations: vec!["clock went backwards".into()],
            }],
            passed: false,
        };
        let text = render_verify_text(&report);
        assert!(text.contains("event replay: FAIL"), "{text}");
        assert!(text.contains("violation: clock went backwards"), "{text}");
        assert!(text.contains("result: FAIL"), "{text}");
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"passed\":false"), "{json}");
    }
}
