//! Problem model: instances, validation, exact distances and cost accounting.
//!
//! An instance is a finite metric given as an explicit distance table, a set
//! of facility points, a catalog of lease types (duration plus a per-facility
//! price), and a list of clients. Every client either connects to a lease
//! whose time window covers its arrival or pays its penalty. All quantities
//! are exact rationals; nothing in this crate rounds.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact scalar type used throughout: arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for integer-valued rationals.
pub fn rational(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Largest admissible arrival time or lease duration.
///
/// Keeping raw times at most `i64::MAX / 4` means a lease window can be
/// shifted a full duration in either direction and its end computed without
/// overflowing `i64`.
pub const MAX_TIME: u64 = (i64::MAX / 4) as u64;

/// A demand point: where it sits, what refusing it costs, and when it shows
/// up. Clients are identified by index into [`Instance::clients`]; duplicate
/// entries are legal and stay distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Client {
    pub position: usize,
    pub penalty: Rational,
    pub arrival: u64,
}

/// A concrete lease: a facility point, a lease type, and a signed start.
///
/// The lease covers the half-open window `[start, start + duration)`, where
/// the duration comes from the instance's lease catalog. Negative starts are
/// meaningful: a window may begin before time zero and still cover early
/// arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LeaseDescriptor {
    pub facility: usize,
    pub lease_type: usize,
    pub start: i64,
}

/// Raw instance data prior to validation.
///
/// `dist` is a full `num_points` x `num_points` table; there is deliberately
/// no coordinate representation, so any exact metric can be expressed.
/// `lease_costs[i][k]` prices lease type `k` at point `facilities[i]` (row
/// order follows `facilities`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub num_points: usize,
    pub dist: Vec<Vec<Rational>>,
    pub facilities: Vec<usize>,
    pub lease_durations: Vec<u64>,
    pub lease_costs: Vec<Vec<Rational>>,
    pub clients: Vec<Client>,
}

/// How a distance table fails to be a metric.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricViolation {
    #[error("dist[{point}][{point}] must be zero")]
    NonzeroDiagonal { point: usize },
    #[error("negative distance at dist[{u}][{v}]")]
    Negative { u: usize, v: usize },
    #[error("dist[{u}][{v}] differs from dist[{v}][{u}]")]
    Asymmetric { u: usize, v: usize },
    #[error("triangle inequality fails: dist[{u}][{w}] > dist[{u}][{v}] + dist[{v}][{w}]")]
    Triangle { u: usize, v: usize, w: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("instance has no lease types")]
    NoLeaseTypes,
    #[error("lease duration for type {lease_type} must lie in 1..={max}", max = MAX_TIME)]
    BadDuration { lease_type: usize },
    #[error("dist table must have {expected} rows, got {got}")]
    DistRowCount { expected: usize, got: usize },
    #[error("dist row {row} must have {expected} entries, got {got}")]
    DistRowLen { row: usize, expected: usize, got: usize },
    #[error("metric violation: {0}")]
    Metric(MetricViolation),
    #[error("facilities[{index}] names point {point}, outside 0..{num_points}")]
    FacilityOutOfRange {
        index: usize,
        point: usize,
        num_points: usize,
    },
    #[error("facility point {point} listed more than once")]
    DuplicateFacility { point: usize },
    #[error("lease_costs must have one row per facility: expected {expected}, got {got}")]
    CostRowCount { expected: usize, got: usize },
    #[error("lease_costs row {row} must have {expected} entries, got {got}")]
    CostRowLen {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("negative cost at lease_costs[{row}][{lease_type}]")]
    NegativeCost { row: usize, lease_type: usize },
    #[error("client {client} sits at point {point}, outside 0..{num_points}")]
    ClientOutOfRange {
        client: usize,
        point: usize,
        num_points: usize,
    },
    #[error("client {client} has a negative penalty")]
    NegativePenalty { client: usize },
    #[error("client {client} arrival exceeds {max}", max = MAX_TIME)]
    ArrivalTooLarge { client: usize },
}

/// An [`Instance`] that passed [`validate_instance`], plus derived data the
/// solver and checkers rely on (the sorted set of distinct arrival times).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedInstance {
    instance: Instance,
    arrival_times: Vec<u64>,
}

/// Checks every structural and numeric requirement on an instance.
///
/// Checks run in a fixed order (lease catalog, distance table shape, metric
/// laws, facilities, costs, clients) and the first failure is returned, so
/// error reporting is deterministic.
pub fn validate_instance(instance: Instance) -> Result<ValidatedInstance, ValidationError> {
    let n = instance.num_points;

    if instance.lease_durations.is_empty() {
        return Err(ValidationError::NoLeaseTypes);
    }
    for (lease_type, &duration) in instance.lease_durations.iter().enumerate() {
        if duration == 0 || duration > MAX_TIME {
            return Err(ValidationError::BadDuration { lease_type });
        }
    }

    if instance.dist.len() != n {
        return Err(ValidationError::DistRowCount {
            expected: n,
            got: instance.dist.len(),
        });
    }
    for (row, entries) in instance.dist.iter().enumerate() {
        if entries.len() != n {
            return Err(ValidationError::DistRowLen {
                row,
                expected: n,
                got: entries.len(),
            });
        }
    }
    for u in 0..n {
        if !instance.dist[u][u].is_zero() {
            return Err(ValidationError::Metric(MetricViolation::NonzeroDiagonal {
                point: u,
            }));
        }
        for v in 0..n {
            if instance.dist[u][v].is_negative() {
                return Err(ValidationError::Metric(MetricViolation::Negative { u, v }));
            }
        }
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if instance.dist[u][v] != instance.dist[v][u] {
                return Err(ValidationError::Metric(MetricViolation::Asymmetric { u, v }));
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            if v == u {
                continue;
            }
            for w in 0..n {
                if instance.dist[u][w] > &instance.dist[u][v] + &instance.dist[v][w] {
                    return Err(ValidationError::Metric(MetricViolation::Triangle {
                        u,
                        v,
                        w,
                    }));
                }
            }
        }
    }

    for (index, &point) in instance.facilities.iter().enumerate() {
        if point >= n {
            return Err(ValidationError::FacilityOutOfRange {
                index,
                point,
                num_points: n,
            });
        }
        if instance.facilities[..index].contains(&point) {
            return Err(ValidationError::DuplicateFacility { point });
        }
    }

    let num_types = instance.lease_durations.len();
    if instance.lease_costs.len() != instance.facilities.len() {
        return Err(ValidationError::CostRowCount {
            expected: instance.facilities.len(),
            got: instance.lease_costs.len(),
        });
    }
    for (row, costs) in instance.lease_costs.iter().enumerate() {
        if costs.len() != num_types {
            return Err(ValidationError::CostRowLen {
                row,
                expected: num_types,
                got: costs.len(),
            });
        }
        for (lease_type, cost) in costs.iter().enumerate() {
            if cost.is_negative() {
                return Err(ValidationError::NegativeCost { row, lease_type });
            }
        }
    }

    for (client, c) in instance.clients.iter().enumerate() {
        if c.position >= n {
            return Err(ValidationError::ClientOutOfRange {
                client,
                point: c.position,
                num_points: n,
            });
        }
        if c.penalty.is_negative() {
            return Err(ValidationError::NegativePenalty { client });
        }
        if c.arrival > MAX_TIME {
            return Err(ValidationError::ArrivalTooLarge { client });
        }
    }

    let mut arrival_times: Vec<u64> = instance.clients.iter().map(|c| c.arrival).collect();
    arrival_times.sort_unstable();
    arrival_times.dedup();

    Ok(ValidatedInstance {
        instance,
        arrival_times,
    })
}

impl ValidatedInstance {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn num_points(&self) -> usize {
        self.instance.num_points
    }

    pub fn dist(&self, u: usize, v: usize) -> &Rational {
        &self.instance.dist[u][v]
    }

    pub fn facilities(&self) -> &[usize] {
        &self.instance.facilities
    }

    pub fn clients(&self) -> &[Client] {
        &self.instance.clients
    }

    pub fn num_lease_types(&self) -> usize {
        self.instance.lease_durations.len()
    }

    pub fn lease_duration(&self, lease_type: usize) -> u64 {
        self.instance.lease_durations[lease_type]
    }

    /// Sorted, deduplicated arrival times of all clients.
    pub fn arrival_times(&self) -> &[u64] {
        &self.arrival_times
    }

    /// Row of `lease_costs` pricing the given facility point, if it is one.
    pub fn facility_row(&self, point: usize) -> Option<usize> {
        self.instance.facilities.iter().position(|&p| p == point)
    }

    /// Whether a descriptor names a facility point and lease type of this
    /// instance. Descriptors read from external solutions must pass this
    /// check before any cost or distance lookup.
    pub fn is_valid_lease(&self, lease: &LeaseDescriptor) -> bool {
        lease.lease_type < self.num_lease_types() && self.facility_row(lease.facility).is_some()
    }

    /// Price of a lease. Panics if the descriptor is not valid for this
    /// instance; gate external input through [`Self::is_valid_lease`].
    pub fn lease_cost(&self, lease: &LeaseDescriptor) -> &Rational {
        let row = self
            .facility_row(lease.facility)
            .expect("lease names a facility point of this instance");
        &self.instance.lease_costs[row][lease.lease_type]
    }

    /// Whether the lease window `[start, start + duration)` contains the
    /// arrival. The window is half-open: an arrival exactly at the end is
    /// not covered. Evaluated in `i128` so arbitrary descriptor starts are
    /// safe.
    pub fn covers(&self, lease: &LeaseDescriptor, arrival: u64) -> bool {
        let start = lease.start as i128;
        let end = start + self.lease_duration(lease.lease_type) as i128;
        let t = arrival as i128;
        start <= t && t < end
    }
}

/// Distance from a client to a lease: the metric distance when the lease's
/// window covers the client's arrival, unreachable otherwise. The derived
/// order places every finite value below [`ExtendedDistance::Unreachable`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedDistance {
    Finite(Rational),
    Unreachable,
}

impl ExtendedDistance {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedDistance::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedDistance::Finite(d) => Some(d),
            ExtendedDistance::Unreachable => None,
        }
    }
}

/// Connection distance from a client to a lease, infinite when the window
/// misses the client's arrival.
pub fn lease_client_distance(
    inst: &ValidatedInstance,
    client: &Client,
    lease: &LeaseDescriptor,
) -> ExtendedDistance {
    if inst.covers(lease, client.arrival) {
        ExtendedDistance::Finite(inst.dist(client.position, lease.facility).clone())
    } else {
        ExtendedDistance::Unreachable
    }
}

/// A client reaches a lease once its budget covers the connection distance.
/// Equality counts: a budget exactly at the distance reaches.
pub fn client_reaches(
    inst: &ValidatedInstance,
    client: &Client,
    alpha: &Rational,
    lease: &LeaseDescriptor,
) -> bool {
    match lease_client_distance(inst, client, lease) {
        ExtendedDistance::Finite(d) => *alpha >= d,
        ExtendedDistance::Unreachable => false,
    }
}

/// Every lease the solver or the exact oracle needs to consider: one per
/// facility point, lease type, and start equal to a distinct client arrival.
///
/// Restricting starts to arrival times loses nothing: any window covering at
/// least one arrival can be slid right until it begins at the earliest
/// arrival it covers, which only grows the set of covered arrivals. The
/// result is ordered facility-major, then by lease type, then by start, and
/// contains no duplicates.
pub fn candidate_leases(inst: &ValidatedInstance) -> Vec<LeaseDescriptor> {
    let mut out = Vec::new();
    for &facility in inst.facilities() {
        for lease_type in 0..inst.num_lease_types() {
            for &t in inst.arrival_times() {
                out.push(LeaseDescriptor {
                    facility,
                    lease_type,
                    start: t as i64,
                });
            }
        }
    }
    out
}

/// A primal solution: a set of leases plus, per client, either an index into
/// `leases` or `None` to pay the penalty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub leases: Vec<LeaseDescriptor>,
    pub assignment: Vec<Option<usize>>,
}

/// Exact cost of a solution, split into its three components.
/// `total` is always the sum of the other three fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostBreakdown {
    pub leasing: Rational,
    pub connection: Rational,
    pub penalty: Rational,
    pub total: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionCostError {
    #[error("assignment lists {got} clients, instance has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("client {client} assigned to lease index {index}, but only {num_leases} leases present")]
    AssignmentOutOfRange {
        client: usize,
        index: usize,
        num_leases: usize,
    },
    #[error("lease {index} does not name a facility point and lease type of this instance")]
    InvalidLease { index: usize },
    #[error("client {client} assigned to a lease whose window misses its arrival")]
    UncoveredAssignment { client: usize },
}

/// Prices a solution: every listed lease is paid for (used or not), assigned
/// clients pay their connection distance, unassigned clients their penalty.
/// Fails rather than pricing an assignment across an uncovering lease.
pub fn solution_cost(
    inst: &ValidatedInstance,
    solution: &Solution,
) -> Result<CostBreakdown, SolutionCostError> {
    if solution.assignment.len() != inst.clients().len() {
        return Err(SolutionCostError::AssignmentLength {
            expected: inst.clients().len(),
            got: solution.assignment.len(),
        });
    }
    for (index, lease) in solution.leases.iter().enumerate() {
        if !inst.is_valid_lease(lease) {
            return Err(SolutionCostError::InvalidLease { index });
        }
    }

    let mut leasing = Rational::zero();
    for lease in &solution.leases {
        leasing += inst.lease_cost(lease);
    }

    let mut connection = Rational::zero();
    let mut penalty = Rational::zero();
    for (client, choice) in solution.assignment.iter().enumerate() {
        match choice {
            None => penalty += &inst.clients()[client].penalty,
            Some(index) => {
                if *index >= solution.leases.len() {
                    return Err(SolutionCostError::AssignmentOutOfRange {
                        client,
                        index: *index,
                        num_leases: solution.leases.len(),
                    });
                }
                let lease = &solution.leases[*index];
                match lease_client_distance(inst, &inst.clients()[client], lease) {
                    ExtendedDistance::Finite(d) => connection += d,
                    ExtendedDistance::Unreachable => {
                        return Err(SolutionCostError::UncoveredAssignment { client });
                    }
                }
            }
        }
    }

    let total = &leasing + &connection + &penalty;
    Ok(CostBreakdown {
        leasing,
        connection,
        penalty,
        total,
    })
}

impl CostBreakdown {
    pub fn zero() -> Self {
        CostBreakdown {
            leasing: Rational::zero(),
            connection: Rational::zero(),
            penalty: Rational::zero(),
            total: Rational::zero(),
        }
    }
}
