//! Exact optimum by exhaustive search, for cross-checking the solver.
//!
//! Every solution is, up to useless leases, a subset of the candidate
//! universe (facility x lease type x distinct arrival starts) plus the best
//! assignment against that subset, and the best assignment decomposes per
//! client. The search therefore walks subsets depth-first, keeps the running
//! assignment cost incrementally, and prunes any branch whose leasing cost
//! alone already matches the best total seen.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::engine::prune_unused_leases;
use crate::model::{
    candidate_leases, lease_client_distance, CostBreakdown, ExtendedDistance, LeaseDescriptor,
    Rational, Solution, ValidatedInstance,
};

/// Hard ceilings on instance size; the search is exponential in the number
/// of candidate leases. Oversized instances are refused, not attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_candidate_leases: usize,
    pub max_clients: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_candidate_leases: 20,
            max_clients: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "instance too large for exhaustive search: {candidates} candidate leases \
         (limit {max_candidates}), {clients} clients (limit {max_clients})"
    )]
    TooLarge {
        candidates: usize,
        clients: usize,
        max_candidates: usize,
        max_clients: usize,
    },
}

/// Cheapest completion of a fixed lease set: each client independently
/// connects to the nearest covering lease, or pays its penalty when that is
/// at least as cheap (ties refuse). Returns the per-client choices and the
/// full cost including the leasing bill for every given lease.
///
/// All descriptors must name facility points and lease types of the
/// instance.
pub fn best_assignment_given_leases(
    inst: &ValidatedInstance,
    leases: &[LeaseDescriptor],
) -> (Vec<Option<usize>>, CostBreakdown) {
    debug_assert!(leases.iter().all(|l| inst.is_valid_lease(l)));

    let mut leasing = Rational::zero();
    for lease in leases {
        leasing += inst.lease_cost(lease);
    }

    let mut connection = Rational::zero();
    let mut penalty = Rational::zero();
    let mut assignment = Vec::with_capacity(inst.clients().len());
    for client in inst.clients() {
        let mut best: Option<(usize, Rational)> = None;
        for (i, lease) in leases.iter().enumerate() {
            if let ExtendedDistance::Finite(d) = lease_client_distance(inst, client, lease) {
                if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                    best = Some((i, d));
                }
            }
        }
        match best {
            Some((i, d)) if d < client.penalty => {
                connection += d;
                assignment.push(Some(i));
            }
            _ => {
                penalty += &client.penalty;
                assignment.push(None);
            }
        }
    }

    let total = &leasing + &connection + &penalty;
    (
        assignment,
        CostBreakdown {
            leasing,
            connection,
            penalty,
            total,
        },
    )
}

struct Search<'a> {
    inst: &'a ValidatedInstance,
    candidates: &'a [LeaseDescriptor],
    // cover[f][j]: connection distance when candidate f covers client j.
    cover: Vec<Vec<Option<Rational>>>,
    prices: Vec<Rational>,
    chosen: Vec<usize>,
    leasing: Rational,
    // Per client: nearest covering chosen lease so far, and the resulting
    // service cost (distance capped at the penalty).
    nearest: Vec<Option<Rational>>,
    service: Rational,
    best: Option<(Rational, Vec<usize>)>,
}

impl Search<'_> {
    fn service_cost(&self, j: usize, nearest: &Option<Rational>) -> Rational {
        let penalty = &self.inst.clients()[j].penalty;
        match nearest {
            Some(d) if d < penalty => d.clone(),
            _ => penalty.clone(),
        }
    }

    fn run(&mut self, idx: usize) {
        if let Some((best_total, _)) = &self.best {
            // Every completion pays at least the leasing bill so far.
            if self.leasing >= *best_total {
                return;
            }
        }
        if idx == self.candidates.len() {
            let total = &self.leasing + &self.service;
            let better = match &self.best {
                None => true,
                Some((best_total, _)) => total < *best_total,
            };
            if better {
                self.best = Some((total, self.chosen.clone()));
            }
            return;
        }

        // Subsets skipping this candidate come first; among equal-cost
        // optima the one found first (fewer, earlier candidates) is kept.
        self.run(idx + 1);

        self.leasing += &self.prices[idx];
        let mut undo: Vec<(usize, Option<Rational>)> = Vec::new();
        for j in 0..self.inst.clients().len() {
            if let Some(d) = &self.cover[idx][j] {
                let closer = match &self.nearest[j] {
                    None => true,
                    Some(cur) => d < cur,
                };
                if closer {
                    let old = self.nearest[j].clone();
                    self.service -= self.service_cost(j, &old);
                    self.nearest[j] = Some(d.clone());
                    self.service += self.service_cost(j, &self.nearest[j]);
                    undo.push((j, old));
                }
            }
        }
        self.chosen.push(idx);

        self.run(idx + 1);

        self.chosen.pop();
        for (j, old) in undo.into_iter().rev() {
            self.service -= self.service_cost(j, &self.nearest[j]);
            self.service += self.service_cost(j, &old);
            self.nearest[j] = old;
        }
        self.leasing -= &self.prices[idx];
    }
}

/// Exact optimum over all lease sets and assignments, with its value.
///
/// The returned solution is pruned of leases serving nobody; among
/// equal-cost optima the subset-enumeration order fixes the winner, so the
/// result is deterministic.
pub fn exact_opt(
    inst: &ValidatedInstance,
    limits: &OracleLimits,
) -> Result<(Solution, Rational), OracleError> {
    let candidates = candidate_leases(inst);
    if candidates.len() > limits.max_candidate_leases || inst.clients().len() > limits.max_clients
    {
        return Err(OracleError::TooLarge {
            candidates: candidates.len(),
            clients: inst.clients().len(),
            max_candidates: limits.max_candidate_leases,
            max_clients: limits.max_clients,
        });
    }

    let cover = candidates
        .iter()
        .map(|lease| {
            inst.clients()
                .iter()
                .map(|c| match lease_client_distance(inst, c, lease) {
                    ExtendedDistance::Finite(d) => Some(d),
                    ExtendedDistance::Unreachable => None,
                })
                .collect()
        })
        .collect();
    let prices: Vec<Rational> = candidates
        .iter()
        .map(|lease| inst.lease_cost(lease).clone())
        .collect();
    let all_penalties: Rational = inst.clients().iter().map(|c| c.penalty.clone()).sum();

    let mut search = Search {
        inst,
        candidates: &candidates,
        cover,
        prices,
        chosen: Vec::new(),
        leasing: Rational::zero(),
        nearest: vec![None; inst.clients().len()],
        service: all_penalties,
        best: None,
    };
    search.run(0);

    let (value, chosen) = search.best.expect("the empty lease set is always priced");
    let leases: Vec<LeaseDescriptor> = chosen.iter().map(|&i| candidates[i]).collect();
    let (assignment, cost) = best_assignment_given_leases(inst, &leases);
    debug_assert_eq!(cost.total, value);
    let solution = prune_unused_leases(&Solution { leases, assignment });
    Ok((solution, value))
}
