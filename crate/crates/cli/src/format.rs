//! Instance and solution serialization.
//!
//! An instance file is a single JSON document:
//!
//! ```json
//! {
//!   "points": 2,
//!   "dist": [[0, 3], [3, 0]],
//!   "facilities": [0],
//!   "lease_durations": [5],
//!   "lease_costs": [[4]],
//!   "clients": [{ "point": 1, "penalty": 10, "arrival": 0 }]
//! }
//! ```
//!
//! `dist` is row-major over all points and `lease_costs` is facility-major
//! (one row per entry of `facilities`, one column per lease type). Numbers
//! follow the [`crate::numeric`] rules: exact, never floating point.
//!
//! Writing always produces the canonical form: pretty-printed JSON, LF line
//! endings, trailing newline, numbers rendered canonically. Reading a
//! canonical file and writing it back is byte-identical.

use std::fs;
use std::path::Path;

use pfle_core::model::{
    solution_cost, CostBreakdown, LeaseDescriptor, Solution, ValidationError,
};
use pfle_core::{Client, Instance, ValidatedInstance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::ExactNumber;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub points: usize,
    pub dist: Vec<Vec<ExactNumber>>,
    pub facilities: Vec<usize>,
    pub lease_durations: Vec<u64>,
    pub lease_costs: Vec<Vec<ExactNumber>>,
    pub clients: Vec<ClientRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientRecord {
    pub point: usize,
    pub penalty: ExactNumber,
    pub arrival: u64,
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        let wrap_rows = |rows: &Vec<Vec<pfle_core::Rational>>| {
            rows.iter()
                .map(|row| row.iter().cloned().map(ExactNumber).collect())
                .collect()
        };
        InstanceFile {
            points: inst.num_points,
            dist: wrap_rows(&inst.dist),
            facilities: inst.facilities.clone(),
            lease_durations: inst.lease_durations.clone(),
            lease_costs: wrap_rows(&inst.lease_costs),
            clients: inst
                .clients
                .iter()
                .map(|c| ClientRecord {
                    point: c.position,
                    penalty: ExactNumber(c.penalty.clone()),
                    arrival: c.arrival,
                })
                .collect(),
        }
    }
}

impl From<InstanceFile> for Instance {
    fn from(file: InstanceFile) -> Self {
        let unwrap_rows = |rows: Vec<Vec<ExactNumber>>| {
            rows.into_iter()
                .map(|row| row.into_iter().map(|n| n.0).collect())
                .collect()
        };
        Instance {
            num_points: file.points,
            dist: unwrap_rows(file.dist),
            facilities: file.facilities,
            lease_durations: file.lease_durations,
            lease_costs: unwrap_rows(file.lease_costs),
            clients: file
                .clients
                .into_iter()
                .map(|c| Client {
                    position: c.point,
                    penalty: c.penalty.0,
                    arrival: c.arrival,
                })
                .collect(),
        }
    }
}

/// Renders the canonical byte-stable form of an instance.
pub fn instance_to_string(inst: &ValidatedInstance) -> String {
    let file = InstanceFile::from(inst.instance());
    let mut text = serde_json::to_string_pretty(&file).expect("instance serialization");
    text.push('\n');
    text
}

/// Parses and validates an instance document.
pub fn instance_from_str(text: &str) -> Result<ValidatedInstance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let inst = Instance::from(file);
    Ok(pfle_core::model::validate_instance(inst)?)
}

pub fn read_instance(path: &Path) -> Result<ValidatedInstance, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    instance_from_str(&text)
}

pub fn write_instance(inst: &ValidatedInstance, path: &Path) -> Result<(), FormatError> {
    fs::write(path, instance_to_string(inst)).map_err(|source| FormatError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Lease triple as it appears in reports and solution documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeaseRecord {
    pub facility: usize,
    pub lease_type: usize,
    pub start: i64,
}

impl From<&LeaseDescriptor> for LeaseRecord {
    fn from(lease: &LeaseDescriptor) -> Self {
        LeaseRecord {
            facility: lease.facility,
            lease_type: lease.lease_type,
            start: lease.start,
        }
    }
}

impl From<LeaseRecord> for LeaseDescriptor {
    fn from(rec: LeaseRecord) -> Self {
        LeaseDescriptor {
            facility: rec.facility,
            lease_type: rec.lease_type,
            start: rec.start,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostRecord {
    pub leasing: ExactNumber,
    pub connection: ExactNumber,
    pub penalty: ExactNumber,
    pub total: ExactNumber,
}

impl From<&CostBreakdown> for CostRecord {
    fn from(cost: &CostBreakdown) -> Self {
        CostRecord {
            leasing: ExactNumber(cost.leasing.clone()),
            connection: ExactNumber(cost.connection.clone()),
            penalty: ExactNumber(cost.penalty.clone()),
            total: ExactNumber(cost.total.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub leases: Vec<LeaseRecord>,
    pub assignment: Vec<Option<usize>>,
    pub cost: CostRecord,
}

/// Packages a solution with its priced breakdown.
///
/// Panics if the solution does not price against the instance; callers hold
/// solutions produced for this very instance, so a mismatch is a logic error.
pub fn solution_to_file(inst: &ValidatedInstance, solution: &Solution) -> SolutionFile {
    let cost = solution_cost(inst, solution).expect("solution prices against its instance");
    SolutionFile {
        leases: solution.leases.iter().map(LeaseRecord::from).collect(),
        assignment: solution.assignment.clone(),
        cost: CostRecord::from(&cost),
    }
}

/// Single-client fixture: one point that is both the facility and the client
/// position, one 5-step lease type costing 4, penalty 10, arrival 0.
#[cfg(test)]
pub(crate) const WORKED_FIXTURE: &str = r#"{
  "points": 1,
  "dist": [[0]],
  "facilities": [0],
  "lease_durations": [5],
  "lease_costs": [[4]],
  "clients": [{ "point": 0, "penalty": 10, "arrival": 0 }]
}
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use pfle_core::model::rational;

    #[test]
    fn reads_the_worked_fixture() {
        let inst = instance_from_str(WORKED_FIXTURE).unwrap();
        assert_eq!(inst.num_points(), 1);
        assert_eq!(inst.facilities(), &[0]);
        assert_eq!(inst.lease_duration(0), 5);
        assert_eq!(inst.clients().len(), 1);
        assert_eq!(inst.clients()[0].penalty, rational(10));
    }

    #[test]
    fn canonical_write_is_a_fixed_point() {
        let inst = instance_from_str(WORKED_FIXTURE).unwrap();
        let text = instance_to_string(&inst);
        let again = instance_from_str(&text).unwrap();
        assert_eq!(again.instance(), inst.instance());
        assert_eq!(instance_to_string(&again), text);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn asymmetric_matrix_is_reported_with_location() {
        let text = r#"{
            "points": 2,
            "dist": [[0, 3], [4, 0]],
            "facilities": [0],
            "lease_durations": [1],
            "lease_costs": [[1]],
            "clients": []
        }"#;
        let err = instance_from_str(text).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("differs from"), "{message}");
        assert!(message.contains("dist[0][1]"), "{message}");
    }

    #[test]
    fn float_in_dist_is_rejected() {
        let text = r#"{
            "points": 1,
            "dist": [[0.0]],
            "facilities": [0],
            "lease_durations": [1],
            "lease_costs": [[1]],
            "clients": []
        }"#;
        let err = instance_from_str(text).unwrap_err();
        assert!(err.to_string().contains("not exact"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{
            "points": 1,
            "dist": [[0]],
            "facilities": [0],
            "lease_durations": [1],
            "lease_costs": [[1]],
            "clients": [],
            "comment": "stray"
        }"#;
        let err = instance_from_str(text).unwrap_err();
        assert!(err.to_string().contains("comment"), "{err}");
    }

    #[test]
    fn file_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let inst = instance_from_str(WORKED_FIXTURE).unwrap();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(back.instance(), inst.instance());
        assert_eq!(instance_to_string(&back), instance_to_string(&inst));
        assert_eq!(fs::read_to_string(&path).unwrap(), instance_to_string(&inst));
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = read_instance(Path::new("/no/such/file.json")).unwrap_err();
        assert!(matches!(err, FormatError::Read { .. }));
        assert!(err.to_string().contains("/no/such/file.json"));
    }

    #[test]
    fn solution_file_carries_cost() {
        let inst = instance_from_str(WORKED_FIXTURE).unwrap();
        let solution = Solution {
            leases: vec![LeaseDescriptor {
                facility: 0,
                lease_type: 0,
                start: 0,
            }],
            assignment: vec![Some(0)],
        };
        let file = solution_to_file(&inst, &solution);
        assert_eq!(file.cost.total.0, rational(4));
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"start\":0"), "{json}");
    }
}
