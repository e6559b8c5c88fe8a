//! The primal-dual solver.
//!
//! Phase one is a uniform dual ascent: every client holds a budget that grows
//! in lockstep with a global clock. A closed candidate lease collects, from
//! each client whose arrival its window covers, the part of the budget above
//! the connection distance; when the collected payment meets the lease price
//! the lease opens tentatively. A client freezes (drops out of the ascent)
//! the moment it can reach an open lease within its budget or its budget hits
//! its penalty. Between consecutive events everything is linear in the clock,
//! so the loop jumps from event to event, and all thresholds are met exactly.
//!
//! Phase two thins the tentatively open set `X`: two leases conflict when one
//! client reaches both, and a greedy pass over `X` in order of decreasing
//! duration keeps an independent set `X'`. Each kept lease is then tripled in
//! time (one copy a full duration earlier, one as-is, one later), which is
//! what buys coverage for every client whose own lease lost the conflict.
//! Clients that reach `X` connect to the nearest tripled copy; the rest pay
//! their penalty.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::model::{
    candidate_leases, client_reaches, lease_client_distance, rational, ExtendedDistance,
    LeaseDescriptor, Rational, Solution, ValidatedInstance,
};

/// Why a client stopped participating in the dual ascent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreezeReason {
    /// The client's budget covers the distance to this open lease (the first
    /// reached lease in candidate order).
    ReachedOpenLease(LeaseDescriptor),
    /// The budget hit the client's penalty before any open lease was in
    /// range.
    PenaltyExhausted,
    /// Both happened at the same instant; the lease still marks the client
    /// as served.
    Both(LeaseDescriptor),
}

impl FreezeReason {
    /// The lease that serves the frozen client, when there is one.
    pub fn reached(&self) -> Option<&LeaseDescriptor> {
        match self {
            FreezeReason::ReachedOpenLease(l) | FreezeReason::Both(l) => Some(l),
            FreezeReason::PenaltyExhausted => None,
        }
    }
}

/// One entry of the ascent transcript. Clocks are nondecreasing along the
/// log; within one instant, payment crossings precede lease openings, which
/// precede freezes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub clock: Rational,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    /// A client's budget met the connection distance to a still-closed
    /// candidate; from this instant the client pays toward that lease.
    PaymentCrossing { client: usize, candidate: usize },
    /// A candidate's collected payment met its price exactly.
    LeaseOpened { candidate: usize },
    /// A client left the active set.
    ClientFrozen { client: usize, reason: FreezeReason },
}

/// A tentatively opened lease, in opening order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenedLease {
    /// Index into [`AscentResult::candidates`].
    pub candidate: usize,
    pub lease: LeaseDescriptor,
    pub opened_at: Rational,
}

/// Full transcript of the dual ascent: the candidate universe, the final
/// budgets, the tentatively open set in opening order, one freeze reason per
/// client, and the event log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscentResult {
    pub candidates: Vec<LeaseDescriptor>,
    pub alpha: Vec<Rational>,
    pub tentatively_open: Vec<OpenedLease>,
    pub freeze: Vec<FreezeReason>,
    pub events: Vec<Event>,
    pub final_clock: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("dual ascent ran {iterations} iterations, past its ceiling of {bound}")]
    NonTermination { iterations: usize, bound: usize },
    #[error("client {client} reaches a tentatively open lease but no tripled copy covers it")]
    CoverageHole { client: usize },
}

fn tighten(delta: &mut Option<Rational>, value: Rational) {
    debug_assert!(!value.is_negative());
    match delta {
        Some(cur) if *cur <= value => {}
        _ => *delta = Some(value),
    }
}

/// Runs the dual ascent to completion.
///
/// The loop advances the clock to the next event: a budget meeting a
/// distance threshold, a closed candidate getting paid off, or a budget
/// hitting its penalty. After each advance, paid-off candidates open first
/// and only then are clients frozen, so a client whose budget simultaneously
/// pays off a lease and reaches it freezes as served, not as refused.
/// With no clients the ascent is empty and nothing opens, price zero or not.
pub fn run_dual_ascent(inst: &ValidatedInstance) -> Result<AscentResult, EngineError> {
    let candidates = candidate_leases(inst);
    let clients = inst.clients();
    let m = candidates.len();
    let n = clients.len();

    // cover[f][j]: connection distance when candidate f's window covers
    // client j's arrival.
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

    let mut alpha: Vec<Rational> = vec![Rational::zero(); n];
    let mut active: Vec<bool> = vec![true; n];
    let mut open: Vec<bool> = vec![false; m];
    let mut crossed: Vec<Vec<bool>> = vec![vec![false; n]; m];
    let mut freeze: Vec<Option<FreezeReason>> = vec![None; n];
    let mut tentatively_open: Vec<OpenedLease> = Vec::new();
    let mut events: Vec<Event> = Vec::new();
    let mut clock = Rational::zero();

    if n == 0 {
        return Ok(AscentResult {
            candidates,
            alpha,
            tentatively_open,
            freeze: Vec::new(),
            events,
            final_clock: clock,
        });
    }

    // Budgets already at a distance threshold before the clock starts.
    for (f, row) in cover.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if matches!(d, Some(d) if d.is_zero()) {
                crossed[f][j] = true;
                events.push(Event {
                    clock: clock.clone(),
                    kind: EventKind::PaymentCrossing {
                        client: j,
                        candidate: f,
                    },
                });
            }
        }
    }

    // Each iteration consumes at least one event: a (client, candidate)
    // crossing (at most n*m), a freeze (at most n), or the single instant at
    // which all price-zero candidates open.
    let bound = n.saturating_mul(m.saturating_add(2));
    let mut iterations = 0usize;

    while active.iter().any(|&a| a) {
        iterations += 1;
        if iterations > bound {
            return Err(EngineError::NonTermination { iterations, bound });
        }

        // Next clock advance at which anything changes.
        let mut delta: Option<Rational> = None;
        for (j, client) in clients.iter().enumerate() {
            if !active[j] {
                continue;
            }
            tighten(&mut delta, &client.penalty - &alpha[j]);
            for row in &cover {
                if let Some(d) = &row[j] {
                    if *d > alpha[j] {
                        tighten(&mut delta, d - &alpha[j]);
                    }
                }
            }
        }
        for (f, lease) in candidates.iter().enumerate() {
            if open[f] {
                continue;
            }
            let mut paid = Rational::zero();
            let mut rate = 0u64;
            for (j, d) in cover[f].iter().enumerate() {
                if let Some(d) = d {
                    if alpha[j] >= *d {
                        paid += &alpha[j] - d;
                        if active[j] {
                            rate += 1;
                        }
                    }
                }
            }
            let deficit = inst.lease_cost(lease) - &paid;
            debug_assert!(!deficit.is_negative());
            if deficit.is_zero() {
                tighten(&mut delta, Rational::zero());
            } else if rate > 0 {
                tighten(&mut delta, deficit / rational(rate as i64));
            }
        }

        let delta = delta.expect("active clients always supply a penalty event");
        if !delta.is_zero() {
            clock += &delta;
            for (j, client) in clients.iter().enumerate() {
                if active[j] {
                    alpha[j] += &delta;
                    debug_assert!(alpha[j] <= client.penalty);
                }
            }
        }

        // Record budgets meeting distance thresholds of still-closed
        // candidates, then open every candidate whose payment now equals its
        // price, then freeze.
        for (f, row) in cover.iter().enumerate() {
            if open[f] {
                continue;
            }
            for (j, d) in row.iter().enumerate() {
                if !active[j] || crossed[f][j] {
                    continue;
                }
                if matches!(d, Some(d) if alpha[j] >= *d) {
                    crossed[f][j] = true;
                    events.push(Event {
                        clock: clock.clone(),
                        kind: EventKind::PaymentCrossing {
                            client: j,
                            candidate: f,
                        },
                    });
                }
            }
        }

        for (f, lease) in candidates.iter().enumerate() {
            if open[f] {
                continue;
            }
            let mut paid = Rational::zero();
            for (j, d) in cover[f].iter().enumerate() {
                if let Some(d) = d {
                    if alpha[j] >= *d {
                        paid += &alpha[j] - d;
                    }
                }
            }
            let cost = inst.lease_cost(lease);
            debug_assert!(paid <= *cost);
            if paid == *cost {
                open[f] = true;
                tentatively_open.push(OpenedLease {
                    candidate: f,
                    lease: *lease,
                    opened_at: clock.clone(),
                });
                events.push(Event {
                    clock: clock.clone(),
                    kind: EventKind::LeaseOpened { candidate: f },
                });
            }
        }

        for (j, client) in clients.iter().enumerate() {
            if !active[j] {
                continue;
            }
            let mut reached: Option<LeaseDescriptor> = None;
            for (f, lease) in candidates.iter().enumerate() {
                if !open[f] {
                    continue;
                }
                if matches!(&cover[f][j], Some(d) if alpha[j] >= *d) {
                    reached = Some(*lease);
                    break;
                }
            }
            let capped = alpha[j] == client.penalty;
            let reason = match (reached, capped) {
                (Some(lease), false) => Some(FreezeReason::ReachedOpenLease(lease)),
                (Some(lease), true) => Some(FreezeReason::Both(lease)),
                (None, true) => Some(FreezeReason::PenaltyExhausted),
                (None, false) => None,
            };
            if let Some(reason) = reason {
                active[j] = false;
                freeze[j] = Some(reason.clone());
                events.push(Event {
                    clock: clock.clone(),
                    kind: EventKind::ClientFrozen { client: j, reason },
                });
            }
        }
    }

    let freeze = freeze
        .into_iter()
        .map(|r| r.expect("the ascent only ends once every client is frozen"))
        .collect();
    Ok(AscentResult {
        candidates,
        alpha,
        tentatively_open,
        freeze,
        events,
        final_clock: clock,
    })
}

/// A tentatively open lease as a conflict-graph vertex. Vertices keep the
/// opening order of [`AscentResult::tentatively_open`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictVertex {
    /// Index into [`AscentResult::candidates`].
    pub candidate: usize,
    pub lease: LeaseDescriptor,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictEdge {
    pub a: usize,
    pub b: usize,
    /// Smallest client index whose budget reaches both endpoints.
    pub witness: usize,
}

/// Conflict graph over the tentatively open set: an edge joins two leases
/// exactly when some client reaches both on its final budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub vertices: Vec<ConflictVertex>,
    pub edges: Vec<ConflictEdge>,
    /// Sorted neighbour lists, indexed like `vertices`.
    pub adjacency: Vec<Vec<usize>>,
}

pub fn build_conflict_graph(inst: &ValidatedInstance, result: &AscentResult) -> ConflictGraph {
    let vertices: Vec<ConflictVertex> = result
        .tentatively_open
        .iter()
        .map(|o| ConflictVertex {
            candidate: o.candidate,
            lease: o.lease,
            duration: inst.lease_duration(o.lease.lease_type),
        })
        .collect();

    let reaches = |j: usize, lease: &LeaseDescriptor| {
        client_reaches(inst, &inst.clients()[j], &result.alpha[j], lease)
    };

    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for a in 0..vertices.len() {
        for b in (a + 1)..vertices.len() {
            let witness = (0..inst.clients().len())
                .find(|&j| reaches(j, &vertices[a].lease) && reaches(j, &vertices[b].lease));
            if let Some(witness) = witness {
                edges.push(ConflictEdge { a, b, witness });
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    ConflictGraph {
        vertices,
        edges,
        adjacency,
    }
}

/// Greedy maximal independent set, visiting vertices by decreasing duration
/// and breaking ties by candidate index (facility order, then lease type,
/// then start). Longer leases win conflicts, which is what the tripling step
/// later relies on. Returns vertex indices in pick order.
pub fn greedy_max_independent_set(graph: &ConflictGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.vertices.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let va = &graph.vertices[a];
        let vb = &graph.vertices[b];
        vb.duration
            .cmp(&va.duration)
            .then(va.candidate.cmp(&vb.candidate))
    });

    let mut blocked = vec![false; graph.vertices.len()];
    let mut picked = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        picked.push(v);
        for &u in &graph.adjacency[v] {
            blocked[u] = true;
        }
    }
    picked
}

/// Three time-shifted copies of every selected lease: one a full duration
/// earlier, the lease itself, one a full duration later. Together they cover
/// `[start - duration, start + 2*duration)`, a range that contains the whole
/// window of any lease that lost a conflict against this one. Copies with
/// negative starts are kept. The result is deduplicated and sorted by
/// facility, lease type, then start.
pub fn triple_leases(inst: &ValidatedInstance, selected: &[LeaseDescriptor]) -> Vec<LeaseDescriptor> {
    let mut out = Vec::new();
    for lease in selected {
        let duration = inst.lease_duration(lease.lease_type) as i64;
        for start in [lease.start - duration, lease.start, lease.start + duration] {
            out.push(LeaseDescriptor {
                facility: lease.facility,
                lease_type: lease.lease_type,
                start,
            });
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Final assignment. A client is served exactly when its budget reaches some
/// lease of the full tentatively open set (deciding against the thinned set
/// would wrongly refuse clients whose lease lost its conflict); served
/// clients connect to the nearest covering tripled copy, first index winning
/// ties. The rest pay their penalty.
pub fn assign_clients(
    inst: &ValidatedInstance,
    result: &AscentResult,
    tripled: &[LeaseDescriptor],
) -> Result<Solution, EngineError> {
    let mut assignment = Vec::with_capacity(inst.clients().len());
    for (j, client) in inst.clients().iter().enumerate() {
        let served = result
            .tentatively_open
            .iter()
            .any(|o| client_reaches(inst, client, &result.alpha[j], &o.lease));
        if !served {
            assignment.push(None);
            continue;
        }
        let mut best: Option<(usize, Rational)> = None;
        for (i, lease) in tripled.iter().enumerate() {
            if let ExtendedDistance::Finite(d) = lease_client_distance(inst, client, lease) {
                if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                    best = Some((i, d));
                }
            }
        }
        match best {
            Some((i, _)) => assignment.push(Some(i)),
            None => return Err(EngineError::CoverageHole { client: j }),
        }
    }
    Ok(Solution {
        leases: tripled.to_vec(),
        assignment,
    })
}

/// End-to-end solver: dual ascent, conflict thinning, tripling, assignment.
/// Returns the solution together with the ascent transcript that certifies
/// it.
pub fn solve(inst: &ValidatedInstance) -> Result<(Solution, AscentResult), EngineError> {
    let result = run_dual_ascent(inst)?;
    let graph = build_conflict_graph(inst, &result);
    let picked = greedy_max_independent_set(&graph);
    let selected: Vec<LeaseDescriptor> = picked.iter().map(|&v| graph.vertices[v].lease).collect();
    let tripled = triple_leases(inst, &selected);
    let solution = assign_clients(inst, &result, &tripled)?;
    Ok((solution, result))
}

/// Drops leases no client is assigned to and remaps the assignment. Lease
/// order is preserved. Never raises any cost component.
pub fn prune_unused_leases(solution: &Solution) -> Solution {
    let mut used = vec![false; solution.leases.len()];
    for choice in solution.assignment.iter().flatten() {
        used[*choice] = true;
    }
    let mut remap: Vec<Option<usize>> = vec![None; solution.leases.len()];
    let mut leases = Vec::new();
    for (i, lease) in solution.leases.iter().enumerate() {
        if used[i] {
            remap[i] = Some(leases.len());
            leases.push(*lease);
        }
    }
    let assignment = solution
        .assignment
        .iter()
        .map(|choice| choice.map(|i| remap[i].expect("assigned leases are kept")))
        .collect();
    Solution { leases, assignment }
}
