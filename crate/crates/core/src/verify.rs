//! Certificate checkers.
//!
//! Everything the solver claims is rechecked here from first principles:
//! that the solution is feasible, that the budget vector is a feasible dual
//! (so its sum lower-bounds the optimum by weak duality), that the budgets
//! decompose per client into connection, facility, and penalty shares whose
//! sums pin down each primal cost component, that each bound in the factor-3
//! chain holds exactly, that the event log replays to the reported final
//! state, and that the conflict thinning has the structure the tripling
//! argument needs. Checks report violations as data; an empty list is the
//! certificate.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::engine::{AscentResult, ConflictGraph, EventKind, FreezeReason};
use crate::model::{
    candidate_leases, client_reaches, lease_client_distance, rational, solution_cost,
    CostBreakdown, ExtendedDistance, LeaseDescriptor, Rational, Solution, SolutionCostError,
    ValidatedInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    PrimalFeasibility,
    DualFeasibility,
    RatioBounds,
    EventReplay,
    SelectionStructure,
}

/// A single broken fact, with enough data to locate it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    // Primal feasibility.
    #[error("assignment lists {got} clients, instance has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("client {client} assigned to lease index {index}, outside the lease list")]
    AssignmentOutOfRange { client: usize, index: usize },
    #[error("lease {index} does not name a facility point and lease type of this instance")]
    InvalidLease { index: usize },
    #[error("client {client} assigned to a lease whose window misses its arrival")]
    UncoveredAssignment { client: usize },

    // Dual feasibility.
    #[error("budget vector lists {got} clients, instance has {expected}")]
    AlphaCount { expected: usize, got: usize },
    #[error("client {client} has a negative budget")]
    NegativeAlpha { client: usize },
    #[error("client {client} has a budget above its penalty")]
    PenaltyExceeded { client: usize },
    #[error("lease {lease:?} collects {paid}, above its price {price}")]
    LeaseOverpaid {
        lease: LeaseDescriptor,
        paid: Rational,
        price: Rational,
    },

    // Ratio bounds.
    #[error("selected leases price at {price} but facility shares sum to {collected}")]
    FacilityPaymentMismatch { collected: Rational, price: Rational },
    #[error("refused penalties sum to {refused} but penalty shares to {collected}")]
    PenaltyCollectionMismatch { refused: Rational, collected: Rational },
    #[error("leasing cost {leasing} exceeds {bound}, three times the facility shares")]
    LeasingBoundExceeded { leasing: Rational, bound: Rational },
    #[error("client {client} connects over {distance}, above its bound {bound}")]
    ConnectionBoundExceeded {
        client: usize,
        distance: Rational,
        bound: Rational,
    },
    #[error("total cost {total} exceeds {bound}, three times the dual objective")]
    RatioExceeded { total: Rational, bound: Rational },

    // Event replay.
    #[error("event {index} references a client or candidate out of range")]
    EventIndexOutOfRange { index: usize },
    #[error("event {index} runs the clock backwards")]
    ClockRegression { index: usize },
    #[error("event {index}: crossing of a candidate that never covers the client")]
    CrossingUncovered { index: usize },
    #[error("event {index}: crossing clock differs from the connection distance")]
    CrossingMistimed { index: usize },
    #[error("event {index}: crossing against an already open candidate")]
    CrossingAgainstOpenLease { index: usize },
    #[error("event {index}: crossing by an already frozen client")]
    CrossingAfterFreeze { index: usize },
    #[error("event {index}: repeated crossing of the same pair")]
    DuplicateCrossing { index: usize },
    #[error("missing crossing of client {client} and candidate {candidate}")]
    MissingCrossing { client: usize, candidate: usize },
    #[error("event {index} reopens an open lease")]
    ReopenedLease { index: usize },
    #[error("event {index}: candidate {candidate} opens without exact payment")]
    OpeningNotPaidOff { index: usize, candidate: usize },
    #[error("event {index} freezes an already frozen client")]
    RefrozenClient { index: usize },
    #[error("event {index}: recorded freeze reason does not hold for client {client}")]
    FreezeMismatch { index: usize, client: usize },
    #[error("client {client} never freezes in the log")]
    UnfrozenClient { client: usize },
    #[error("client {client}: final budget differs from its freeze clock")]
    AlphaMismatch { client: usize },
    #[error("tentatively open entry {position} does not match the log")]
    OpenSetMismatch { position: usize },
    #[error("client {client}: recorded freeze reason differs from the log")]
    FreezeReasonMismatch { client: usize },

    // Selection structure.
    #[error("conflict vertex {position} does not match the tentatively open set")]
    VertexMismatch { position: usize },
    #[error("conflict edge {index} references vertices out of range")]
    EdgeIndexOutOfRange { index: usize },
    #[error("edge between {a:?} and {b:?} has no witnessing client")]
    EdgeWithoutWitness {
        a: LeaseDescriptor,
        b: LeaseDescriptor,
    },
    #[error("edge between {a:?} and {b:?} records the wrong witness")]
    EdgeWitnessMismatch {
        a: LeaseDescriptor,
        b: LeaseDescriptor,
    },
    #[error("client {witness} reaches both {a:?} and {b:?} but the edge is missing")]
    MissingEdge {
        a: LeaseDescriptor,
        b: LeaseDescriptor,
        witness: usize,
    },
    #[error("adjacency of vertex {vertex} disagrees with the edge list")]
    AdjacencyMismatch { vertex: usize },
    #[error("selected leases {a:?} and {b:?} conflict")]
    SelectedConflict {
        a: LeaseDescriptor,
        b: LeaseDescriptor,
    },
    #[error("lease {lease:?} was dropped without a selected neighbour")]
    DroppedWithoutCause { lease: LeaseDescriptor },
    #[error("lease {dropped:?} lost a conflict only to lower-priority leases")]
    PriorityInversion { dropped: LeaseDescriptor },
}

/// Outcome of one checker run. `passed` means no violations; the optional
/// fields carry whatever objective values the check computed along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub check: CheckKind,
    pub violations: Vec<Violation>,
    pub dual_objective: Option<Rational>,
    pub primal_cost: Option<CostBreakdown>,
    pub ratio: Option<Rational>,
}

impl CertificateReport {
    fn new(check: CheckKind) -> Self {
        CertificateReport {
            check,
            violations: Vec::new(),
            dual_objective: None,
            primal_cost: None,
            ratio: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that a solution prices: assignment indices in range, every lease a
/// real (facility, type) pair, every assigned window covering its client.
pub fn check_primal_feasibility(inst: &ValidatedInstance, solution: &Solution) -> CertificateReport {
    let mut report = CertificateReport::new(CheckKind::PrimalFeasibility);

    if solution.assignment.len() != inst.clients().len() {
        report.violations.push(Violation::AssignmentLength {
            expected: inst.clients().len(),
            got: solution.assignment.len(),
        });
        return report;
    }
    for (index, lease) in solution.leases.iter().enumerate() {
        if !inst.is_valid_lease(lease) {
            report.violations.push(Violation::InvalidLease { index });
        }
    }
    if !report.violations.is_empty() {
        return report;
    }
    for (client, choice) in solution.assignment.iter().enumerate() {
        if let Some(index) = choice {
            if *index >= solution.leases.len() {
                report
                    .violations
                    .push(Violation::AssignmentOutOfRange { client, index: *index });
                continue;
            }
            let lease = &solution.leases[*index];
            if !inst.covers(lease, inst.clients()[client].arrival) {
                report
                    .violations
                    .push(Violation::UncoveredAssignment { client });
            }
        }
    }

    if report.passed() {
        match solution_cost(inst, solution) {
            Ok(cost) => report.primal_cost = Some(cost),
            Err(SolutionCostError::AssignmentLength { expected, got }) => report
                .violations
                .push(Violation::AssignmentLength { expected, got }),
            Err(SolutionCostError::AssignmentOutOfRange { client, index, .. }) => report
                .violations
                .push(Violation::AssignmentOutOfRange { client, index }),
            Err(SolutionCostError::InvalidLease { index }) => {
                report.violations.push(Violation::InvalidLease { index })
            }
            Err(SolutionCostError::UncoveredAssignment { client }) => report
                .violations
                .push(Violation::UncoveredAssignment { client }),
        }
    }
    report
}

/// Checks that a budget vector is a feasible dual: budgets are nonnegative,
/// capped by penalties, and no lease collects more than its price.
///
/// Collections are checked over the candidate set only, which suffices: any
/// lease window can be slid right until it starts at the earliest arrival it
/// covers, so every achievable payment sum is realised by some candidate.
pub fn check_dual_feasibility(inst: &ValidatedInstance, alpha: &[Rational]) -> CertificateReport {
    let mut report = CertificateReport::new(CheckKind::DualFeasibility);

    if alpha.len() != inst.clients().len() {
        report.violations.push(Violation::AlphaCount {
            expected: inst.clients().len(),
            got: alpha.len(),
        });
        return report;
    }
    report.dual_objective = Some(alpha.iter().sum());

    for (client, (a, c)) in alpha.iter().zip(inst.clients()).enumerate() {
        if a.is_negative() {
            report.violations.push(Violation::NegativeAlpha { client });
        }
        if *a > c.penalty {
            report.violations.push(Violation::PenaltyExceeded { client });
        }
    }

    for lease in candidate_leases(inst) {
        let mut paid = Rational::zero();
        for (a, c) in alpha.iter().zip(inst.clients()) {
            if let ExtendedDistance::Finite(d) = lease_client_distance(inst, c, &lease) {
                if *a > d {
                    paid += a - &d;
                }
            }
        }
        let price = inst.lease_cost(&lease);
        if paid > *price {
            report.violations.push(Violation::LeaseOverpaid {
                lease,
                paid,
                price: price.clone(),
            });
        }
    }
    report
}

/// Which leases a client's final budget reaches, and hence which shape its
/// budget split takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaCase {
    /// Reaches exactly one selected lease: budget = distance + facility
    /// share.
    ReachesSelected { lease: LeaseDescriptor },
    /// Reaches the tentatively open set but no selected lease: the whole
    /// budget is a connection share.
    ReachesOpenOnly,
    /// Reaches nothing open: the whole budget is a penalty share.
    ReachesNone,
}

/// One client's budget split. The three shares always sum to the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientAlphaSplit {
    pub connection: Rational,
    pub facility: Rational,
    pub penalty: Rational,
    pub case: AlphaCase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaDecomposition {
    pub split: Vec<ClientAlphaSplit>,
}

impl AlphaDecomposition {
    pub fn sum_connection(&self) -> Rational {
        self.split.iter().map(|s| s.connection.clone()).sum()
    }

    pub fn sum_facility(&self) -> Rational {
        self.split.iter().map(|s| s.facility.clone()).sum()
    }

    pub fn sum_penalty(&self) -> Rational {
        self.split.iter().map(|s| s.penalty.clone()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("client {client} reaches more than one selected lease; the selection is not conflict-free")]
    MultipleSelectedReached { client: usize },
}

/// Splits every client's final budget by what it reaches.
///
/// A client reaching a selected lease pays the connection distance to it and
/// contributes the rest toward that lease's price. A client reaching only
/// unselected open leases carries its whole budget as a connection share (it
/// is served by a tripled copy of whichever selected lease beat its own). A
/// client reaching nothing pays its budget as a penalty. Fails if any client
/// reaches two selected leases, which is exactly a conflict.
pub fn decompose_alpha(
    inst: &ValidatedInstance,
    result: &AscentResult,
    selected: &[LeaseDescriptor],
) -> Result<AlphaDecomposition, DecomposeError> {
    let mut split = Vec::with_capacity(inst.clients().len());
    for (client, (c, a)) in inst.clients().iter().zip(&result.alpha).enumerate() {
        let mut reached = selected
            .iter()
            .filter(|lease| client_reaches(inst, c, a, lease));
        let first = reached.next();
        if reached.next().is_some() {
            return Err(DecomposeError::MultipleSelectedReached { client });
        }

        let entry = match first {
            Some(lease) => {
                let d = match lease_client_distance(inst, c, lease) {
                    ExtendedDistance::Finite(d) => d,
                    ExtendedDistance::Unreachable => unreachable!("reached leases are covering"),
                };
                ClientAlphaSplit {
                    facility: a - &d,
                    connection: d,
                    penalty: Rational::zero(),
                    case: AlphaCase::ReachesSelected { lease: *lease },
                }
            }
            None => {
                let reaches_open = result
                    .tentatively_open
                    .iter()
                    .any(|o| client_reaches(inst, c, a, &o.lease));
                if reaches_open {
                    ClientAlphaSplit {
                        connection: a.clone(),
                        facility: Rational::zero(),
                        penalty: Rational::zero(),
                        case: AlphaCase::ReachesOpenOnly,
                    }
                } else {
                    ClientAlphaSplit {
                        connection: Rational::zero(),
                        facility: Rational::zero(),
                        penalty: a.clone(),
                        case: AlphaCase::ReachesNone,
                    }
                }
            }
        };
        split.push(entry);
    }
    Ok(AlphaDecomposition { split })
}

/// Checks the full approximation chain on a solved instance:
///
/// * the selected leases' prices are exactly the facility shares;
/// * refused penalties are exactly the penalty shares;
/// * the leasing bill (with tripled copies) is at most three times the
///   facility shares;
/// * each served client travels at most three times its connection share;
/// * the grand total is at most three times the dual objective, which by
///   weak duality is at most three times any solution's cost.
pub fn check_ratio(
    inst: &ValidatedInstance,
    solution: &Solution,
    result: &AscentResult,
    selected: &[LeaseDescriptor],
    decomposition: &AlphaDecomposition,
) -> CertificateReport {
    let mut report = CertificateReport::new(CheckKind::RatioBounds);
    debug_assert_eq!(decomposition.split.len(), inst.clients().len());

    let primal = check_primal_feasibility(inst, solution);
    if !primal.passed() {
        report.violations = primal.violations;
        return report;
    }
    let cost = primal.primal_cost.expect("feasible solutions price");

    let dual: Rational = result.alpha.iter().sum();
    report.dual_objective = Some(dual.clone());

    let three = rational(3);

    let selected_price: Rational = selected.iter().map(|l| inst.lease_cost(l).clone()).sum();
    let facility_share = decomposition.sum_facility();
    if selected_price != facility_share {
        report.violations.push(Violation::FacilityPaymentMismatch {
            collected: facility_share.clone(),
            price: selected_price,
        });
    }

    let penalty_share = decomposition.sum_penalty();
    if cost.penalty != penalty_share {
        report.violations.push(Violation::PenaltyCollectionMismatch {
            refused: cost.penalty.clone(),
            collected: penalty_share,
        });
    }

    let leasing_bound = &three * &facility_share;
    if cost.leasing > leasing_bound {
        report.violations.push(Violation::LeasingBoundExceeded {
            leasing: cost.leasing.clone(),
            bound: leasing_bound,
        });
    }

    for (client, choice) in solution.assignment.iter().enumerate() {
        if let Some(index) = choice {
            let lease = &solution.leases[*index];
            let d = match lease_client_distance(inst, &inst.clients()[client], lease) {
                ExtendedDistance::Finite(d) => d,
                ExtendedDistance::Unreachable => unreachable!("checked feasible above"),
            };
            let bound = &three * &decomposition.split[client].connection;
            if d > bound {
                report.violations.push(Violation::ConnectionBoundExceeded {
                    client,
                    distance: d,
                    bound,
                });
            }
        }
    }

    let total_bound = &three * &dual;
    if cost.total > total_bound {
        report.violations.push(Violation::RatioExceeded {
            total: cost.total.clone(),
            bound: total_bound,
        });
    }

    if !dual.is_zero() {
        report.ratio = Some(&cost.total / &dual);
    }
    report.primal_cost = Some(cost);
    report
}

/// Replays the event log against the instance and confirms it reproduces the
/// reported final state.
///
/// The ascent is uniform, so an active client's budget always equals the
/// clock; that makes every claim in the log checkable in isolation: a
/// crossing must happen exactly at the connection distance, an opening
/// exactly when the collected payment (budgets capped at their freeze
/// clocks) meets the price, and a freeze reason must hold at its clock.
/// Afterwards the log must be complete: every coverable pair crossed before
/// its candidate opened, every client froze, and the final budgets, open
/// set, and freeze reasons match the transcript.
pub fn check_event_log(inst: &ValidatedInstance, result: &AscentResult) -> CertificateReport {
    let mut report = CertificateReport::new(CheckKind::EventReplay);
    let candidates = &result.candidates;
    let clients = inst.clients();
    let m = candidates.len();
    let n = clients.len();

    if result.alpha.len() != n {
        report.violations.push(Violation::AlphaCount {
            expected: n,
            got: result.alpha.len(),
        });
        return report;
    }

    let cover: Vec<Vec<Option<Rational>>> = candidates
        .iter()
        .map(|lease| {
            clients
                .iter()
                .map(|c| match lease_client_distance(inst, c, lease) {
                    ExtendedDistance::Finite(d) => Some(d),
                    ExtendedDistance::Unreachable => None,
                })
                .collect()
        })
        .collect();

    let mut opened_at: Vec<Option<Rational>> = vec![None; m];
    let mut open_log: Vec<(usize, Rational)> = Vec::new();
    let mut frozen_at: Vec<Option<Rational>> = vec![None; n];
    let mut frozen_reason: Vec<Option<FreezeReason>> = vec![None; n];
    let mut crossed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut prev_clock = Rational::zero();

    for (index, event) in result.events.iter().enumerate() {
        if event.clock < prev_clock {
            report.violations.push(Violation::ClockRegression { index });
        }
        prev_clock = event.clock.clone();
        let clock = &event.clock;

        match &event.kind {
            EventKind::PaymentCrossing { client, candidate } => {
                if *client >= n || *candidate >= m {
                    report
                        .violations
                        .push(Violation::EventIndexOutOfRange { index });
                    continue;
                }
                match &cover[*candidate][*client] {
                    None => report.violations.push(Violation::CrossingUncovered { index }),
                    Some(d) => {
                        if d != clock {
                            report.violations.push(Violation::CrossingMistimed { index });
                        }
                    }
                }
                if opened_at[*candidate].is_some() {
                    report
                        .violations
                        .push(Violation::CrossingAgainstOpenLease { index });
                }
                if frozen_at[*client].is_some() {
                    report
                        .violations
                        .push(Violation::CrossingAfterFreeze { index });
                }
                if !crossed.insert((*candidate, *client)) {
                    report.violations.push(Violation::DuplicateCrossing { index });
                }
            }
            EventKind::LeaseOpened { candidate } => {
                if *candidate >= m {
                    report
                        .violations
                        .push(Violation::EventIndexOutOfRange { index });
                    continue;
                }
                if opened_at[*candidate].is_some() {
                    report.violations.push(Violation::ReopenedLease { index });
                    continue;
                }
                let mut paid = Rational::zero();
                for (j, d) in cover[*candidate].iter().enumerate() {
                    if let Some(d) = d {
                        let budget = frozen_at[j].as_ref().unwrap_or(clock);
                        if budget > d {
                            paid += budget - d;
                        }
                    }
                }
                if paid != *inst.lease_cost(&candidates[*candidate]) {
                    report.violations.push(Violation::OpeningNotPaidOff {
                        index,
                        candidate: *candidate,
                    });
                }
                opened_at[*candidate] = Some(clock.clone());
                open_log.push((*candidate, clock.clone()));
            }
            EventKind::ClientFrozen { client, reason } => {
                if *client >= n {
                    report
                        .violations
                        .push(Violation::EventIndexOutOfRange { index });
                    continue;
                }
                if frozen_at[*client].is_some() {
                    report.violations.push(Violation::RefrozenClient { index });
                    continue;
                }
                // The budget at the freeze instant is the clock itself.
                let first_reached = (0..m)
                    .filter(|f| opened_at[*f].is_some())
                    .find(|f| matches!(&cover[*f][*client], Some(d) if d <= clock))
                    .map(|f| candidates[f]);
                let capped = *clock == clients[*client].penalty;
                let expected = match (first_reached, capped) {
                    (Some(lease), false) => Some(FreezeReason::ReachedOpenLease(lease)),
                    (Some(lease), true) => Some(FreezeReason::Both(lease)),
                    (None, true) => Some(FreezeReason::PenaltyExhausted),
                    (None, false) => None,
                };
                if expected.as_ref() != Some(reason) {
                    report.violations.push(Violation::FreezeMismatch {
                        index,
                        client: *client,
                    });
                }
                frozen_at[*client] = Some(clock.clone());
                frozen_reason[*client] = Some(reason.clone());
            }
        }
    }

    for (j, frozen) in frozen_at.iter().enumerate() {
        match frozen {
            None => report.violations.push(Violation::UnfrozenClient { client: j }),
            Some(clock) => {
                if result.alpha[j] != *clock {
                    report.violations.push(Violation::AlphaMismatch { client: j });
                }
            }
        }
    }

    if result.tentatively_open.len() != open_log.len() {
        report.violations.push(Violation::OpenSetMismatch {
            position: open_log.len().min(result.tentatively_open.len()),
        });
    } else {
        for (position, (entry, (candidate, clock))) in
            result.tentatively_open.iter().zip(&open_log).enumerate()
        {
            if entry.candidate != *candidate
                || entry.opened_at != *clock
                || entry.lease != candidates[*candidate]
            {
                report.violations.push(Violation::OpenSetMismatch { position });
            }
        }
    }

    if result.freeze.len() != n {
        // Freeze reasons are checked against the log; a missing client also
        // shows up as UnfrozenClient above.
        report
            .violations
            .push(Violation::FreezeReasonMismatch { client: result.freeze.len().min(n) });
    } else {
        for (client, reason) in result.freeze.iter().enumerate() {
            if frozen_reason[client].as_ref() != Some(reason) {
                report
                    .violations
                    .push(Violation::FreezeReasonMismatch { client });
            }
        }
    }

    // Completeness: every pair whose threshold was met while the client was
    // still active and the candidate not yet open must appear as a crossing.
    for (f, row) in cover.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if let (Some(d), Some(freeze)) = (d, &frozen_at[j]) {
                let before_open = match &opened_at[f] {
                    None => true,
                    Some(open) => d <= open,
                };
                if d <= freeze && before_open && !crossed.contains(&(f, j)) {
                    report.violations.push(Violation::MissingCrossing {
                        client: j,
                        candidate: f,
                    });
                }
            }
        }
    }

    report
}

/// Checks the conflict graph and the selection against their definitions:
/// vertices are the tentatively open set, edges are exactly the client-
/// witnessed conflicts, the selection is an independent set, and every
/// dropped lease lost to a selected neighbour of higher priority (longer
/// duration, candidate order breaking ties), which is what entitles the
/// tripling step to cover its clients.
pub fn check_selection_structure(
    inst: &ValidatedInstance,
    result: &AscentResult,
    graph: &ConflictGraph,
    picked: &[usize],
) -> CertificateReport {
    let mut report = CertificateReport::new(CheckKind::SelectionStructure);

    if graph.vertices.len() != result.tentatively_open.len() {
        report.violations.push(Violation::VertexMismatch {
            position: graph.vertices.len().min(result.tentatively_open.len()),
        });
        return report;
    }
    for (position, (vertex, entry)) in graph
        .vertices
        .iter()
        .zip(&result.tentatively_open)
        .enumerate()
    {
        if vertex.candidate != entry.candidate
            || vertex.lease != entry.lease
            || vertex.duration != inst.lease_duration(entry.lease.lease_type)
        {
            report.violations.push(Violation::VertexMismatch { position });
        }
    }
    if !report.passed() {
        return report;
    }

    let reaches = |j: usize, lease: &LeaseDescriptor| {
        client_reaches(inst, &inst.clients()[j], &result.alpha[j], lease)
    };
    let v = graph.vertices.len();
    let mut expected_witness: Vec<Vec<Option<usize>>> = vec![vec![None; v]; v];
    for (a, row) in expected_witness.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate().skip(a + 1) {
            *slot = (0..inst.clients().len())
                .find(|&j| reaches(j, &graph.vertices[a].lease) && reaches(j, &graph.vertices[b].lease));
        }
    }

    let mut claimed: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (index, edge) in graph.edges.iter().enumerate() {
        let (a, b) = (edge.a.min(edge.b), edge.a.max(edge.b));
        if a == b || b >= v {
            report.violations.push(Violation::EdgeIndexOutOfRange { index });
            continue;
        }
        claimed.insert((a, b));
        match expected_witness[a][b] {
            None => report.violations.push(Violation::EdgeWithoutWitness {
                a: graph.vertices[a].lease,
                b: graph.vertices[b].lease,
            }),
            Some(w) => {
                if w != edge.witness {
                    report.violations.push(Violation::EdgeWitnessMismatch {
                        a: graph.vertices[a].lease,
                        b: graph.vertices[b].lease,
                    });
                }
            }
        }
    }
    for (a, row) in expected_witness.iter().enumerate() {
        for (b, slot) in row.iter().enumerate().skip(a + 1) {
            if let Some(witness) = *slot {
                if !claimed.contains(&(a, b)) {
                    report.violations.push(Violation::MissingEdge {
                        a: graph.vertices[a].lease,
                        b: graph.vertices[b].lease,
                        witness,
                    });
                }
            }
        }
    }
    for vertex in 0..v {
        let mut expected: Vec<usize> = claimed
            .iter()
            .filter_map(|&(a, b)| {
                if a == vertex {
                    Some(b)
                } else if b == vertex {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        expected.sort_unstable();
        let mut got = graph.adjacency.get(vertex).cloned().unwrap_or_default();
        got.sort_unstable();
        if expected != got {
            report.violations.push(Violation::AdjacencyMismatch { vertex });
        }
    }

    let in_selection: Vec<bool> = {
        let mut flags = vec![false; v];
        for &p in picked {
            if p < v {
                flags[p] = true;
            }
        }
        flags
    };
    for &(a, b) in &claimed {
        if in_selection[a] && in_selection[b] {
            report.violations.push(Violation::SelectedConflict {
                a: graph.vertices[a].lease,
                b: graph.vertices[b].lease,
            });
        }
    }

    // Priority: longer duration first, candidate order on ties.
    let precedes = |a: usize, b: usize| {
        let va = &graph.vertices[a];
        let vb = &graph.vertices[b];
        va.duration > vb.duration || (va.duration == vb.duration && va.candidate < vb.candidate)
    };
    for dropped in 0..v {
        if in_selection[dropped] {
            continue;
        }
        let mut blockers = graph.adjacency[dropped].iter().filter(|&&u| in_selection[u]);
        if blockers.clone().next().is_none() {
            report.violations.push(Violation::DroppedWithoutCause {
                lease: graph.vertices[dropped].lease,
            });
        } else if !blockers.any(|&u| precedes(u, dropped)) {
            report.violations.push(Violation::PriorityInversion {
                dropped: graph.vertices[dropped].lease,
            });
        }
    }

    report
}
