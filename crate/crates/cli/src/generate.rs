//! Seeded random instance generator.
//!
//! The random source is ChaCha8 seeded with a single `u64`, so a given seed
//! reproduces the same instance bytes on every platform. Draws happen in a
//! fixed order; changing it would silently re-key every fixture, so treat the
//! sequence below as part of the format:
//!
//! 1. one edge weight in `1..=20` per unordered point pair, closed under
//!    shortest paths to restore the triangle inequality,
//! 2. a shuffle of the point indices, whose first `num_facilities` entries
//!    (sorted) become the facility list,
//! 3. `num_lease_types` duration increments, accumulated so durations are
//!    strictly increasing,
//! 4. per facility, either a chain of per-unit rates (economy of scale) or
//!    an independent cost per lease type,
//! 5. per client: position, penalty, arrival.

use pfle_core::model::{rational, validate_instance};
use pfle_core::{Client, Instance, ValidatedInstance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const MAX_POINTS: usize = 256;
pub const MAX_LEASE_TYPES: usize = 32;
pub const MAX_CLIENTS: usize = 4096;
pub const MAX_HORIZON: u64 = 1_000_000_000;
pub const MAX_SCALE: u64 = 1_000_000;

/// Raw edge weights drawn before the shortest-path closure.
const MAX_EDGE_WEIGHT: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub num_points: usize,
    pub num_facilities: usize,
    pub num_clients: usize,
    pub num_lease_types: usize,
    pub horizon: u64,
    pub cost_scale: u64,
    pub penalty_scale: u64,
    pub economy_of_scale: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 1,
            num_points: 10,
            num_facilities: 4,
            num_clients: 8,
            num_lease_types: 3,
            horizon: 50,
            cost_scale: 8,
            penalty_scale: 30,
            economy_of_scale: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("num_points must lie in 1..={MAX_POINTS}, got {got}")]
    PointsOutOfRange { got: usize },
    #[error("num_facilities {facilities} exceeds num_points {points}")]
    TooManyFacilities { facilities: usize, points: usize },
    #[error("num_lease_types must lie in 1..={MAX_LEASE_TYPES}, got {got}")]
    LeaseTypesOutOfRange { got: usize },
    #[error("num_clients must be at most {MAX_CLIENTS}, got {got}")]
    TooManyClients { got: usize },
    #[error("horizon must be at most {MAX_HORIZON}, got {got}")]
    HorizonTooLarge { got: u64 },
    #[error("{which} must lie in 1..={MAX_SCALE}, got {got}")]
    ScaleOutOfRange { which: &'static str, got: u64 },
}

fn check(cfg: &GeneratorConfig) -> Result<(), GenerateError> {
    if cfg.num_points == 0 || cfg.num_points > MAX_POINTS {
        return Err(GenerateError::PointsOutOfRange {
            got: cfg.num_points,
        });
    }
    if cfg.num_facilities > cfg.num_points {
        return Err(GenerateError::TooManyFacilities {
            facilities: cfg.num_facilities,
            points: cfg.num_points,
        });
    }
    if cfg.num_lease_types == 0 || cfg.num_lease_types > MAX_LEASE_TYPES {
        return Err(GenerateError::LeaseTypesOutOfRange {
            got: cfg.num_lease_types,
        });
    }
    if cfg.num_clients > MAX_CLIENTS {
        return Err(GenerateError::TooManyClients {
            got: cfg.num_clients,
        });
    }
    if cfg.horizon > MAX_HORIZON {
        return Err(GenerateError::HorizonTooLarge { got: cfg.horizon });
    }
    for (which, got) in [
        ("cost_scale", cfg.cost_scale),
        ("penalty_scale", cfg.penalty_scale),
    ] {
        if got == 0 || got > MAX_SCALE {
            return Err(GenerateError::ScaleOutOfRange { which, got });
        }
    }
    Ok(())
}

pub fn generate_instance(cfg: &GeneratorConfig) -> Result<ValidatedInstance, GenerateError> {
    check(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.num_points;

    let mut weights = vec![vec![0u64; n]; n];
    // indexed loops: each draw lands in two mirrored cells
    #[allow(clippy::needless_range_loop)]
    for u in 0..n {
        for v in (u + 1)..n {
            let w = rng.gen_range(1..=MAX_EDGE_WEIGHT);
            weights[u][v] = w;
            weights[v][u] = w;
        }
    }
    for k in 0..n {
        for u in 0..n {
            for v in 0..n {
                let via = weights[u][k] + weights[k][v];
                if via < weights[u][v] {
                    weights[u][v] = via;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut facilities: Vec<usize> = order[..cfg.num_facilities].to_vec();
    facilities.sort_unstable();

    let step_cap = cfg.horizon / cfg.num_lease_types as u64 + 1;
    let mut durations = Vec::with_capacity(cfg.num_lease_types);
    let mut acc = 0u64;
    for _ in 0..cfg.num_lease_types {
        acc += rng.gen_range(1..=step_cap);
        durations.push(acc);
    }

    let mut lease_costs = Vec::with_capacity(facilities.len());
    for _ in 0..facilities.len() {
        let row: Vec<u64> = if cfg.economy_of_scale {
            let mut rates = vec![0u64; cfg.num_lease_types];
            rates[cfg.num_lease_types - 1] = rng.gen_range(1..=cfg.cost_scale);
            for k in (0..cfg.num_lease_types - 1).rev() {
                rates[k] = rates[k + 1] + rng.gen_range(0..=cfg.cost_scale);
            }
            rates
                .iter()
                .zip(&durations)
                .map(|(rate, delta)| rate * delta)
                .collect()
        } else {
            durations
                .iter()
                .map(|delta| rng.gen_range(1..=cfg.cost_scale * delta))
                .collect()
        };
        lease_costs.push(row.into_iter().map(|c| rational(c as i64)).collect());
    }

    let clients = (0..cfg.num_clients)
        .map(|_| Client {
            position: rng.gen_range(0..n),
            penalty: rational(rng.gen_range(1..=cfg.penalty_scale) as i64),
            arrival: rng.gen_range(0..=cfg.horizon),
        })
        .collect();

    let dist = weights
        .into_iter()
        .map(|row| row.into_iter().map(|w| rational(w as i64)).collect())
        .collect();

    let inst = Instance {
        num_points: n,
        dist,
        facilities,
        lease_durations: durations,
        lease_costs,
        clients,
    };
    Ok(validate_instance(inst).expect("generator produced an invalid instance"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::instance_to_string;
    use pfle_core::engine::solve;
    use pfle_core::model::solution_cost;
    use pfle_core::Rational;

    #[test]
    fn same_seed_means_identical_bytes() {
        let cfg = GeneratorConfig::default();
        let a = generate_instance(&cfg).unwrap();
        let b = generate_instance(&cfg).unwrap();
        assert_eq!(instance_to_string(&a), instance_to_string(&b));

        let other = GeneratorConfig {
            seed: 2,
            ..GeneratorConfig::default()
        };
        let c = generate_instance(&other).unwrap();
        assert_ne!(instance_to_string(&a), instance_to_string(&c));
    }

    #[test]
    fn no_facilities_forces_every_penalty() {
        let cfg = GeneratorConfig {
            num_facilities: 0,
            num_clients: 5,
            ..GeneratorConfig::default()
        };
        let inst = generate_instance(&cfg).unwrap();
        assert!(inst.facilities().is_empty());
        let (solution, result) = solve(&inst).unwrap();
        let cost = solution_cost(&inst, &solution).unwrap();
        let penalties: Rational = inst.clients().iter().map(|c| c.penalty.clone()).sum();
        assert_eq!(cost.total, penalties);
        assert!(solution.assignment.iter().all(Option::is_none));
        assert!(result.tentatively_open.is_empty());
    }

    #[test]
    fn economy_of_scale_rates_never_increase() {
        for seed in 0..30 {
            let cfg = GeneratorConfig {
                seed,
                economy_of_scale: true,
                ..GeneratorConfig::default()
            };
            let inst = generate_instance(&cfg).unwrap();
            for f in 0..inst.facilities().len() {
                let mut prev: Option<Rational> = None;
                for k in 0..inst.num_lease_types() {
                    let lease = pfle_core::LeaseDescriptor {
                        facility: inst.facilities()[f],
                        lease_type: k,
                        start: 0,
                    };
                    let rate = inst.lease_cost(&lease) / rational(inst.lease_duration(k) as i64);
                    if let Some(prev) = &prev {
                        assert!(rate <= *prev, "seed {seed} facility {f} type {k}");
                    }
                    prev = Some(rate);
                }
            }
        }
    }

    #[test]
    fn durations_strictly_increase_and_fit_horizon_scale() {
        for seed in 0..20 {
            let cfg = GeneratorConfig {
                seed,
                ..GeneratorConfig::default()
            };
            let inst = generate_instance(&cfg).unwrap();
            for k in 1..inst.num_lease_types() {
                assert!(inst.lease_duration(k) > inst.lease_duration(k - 1));
            }
        }
    }

    #[test]
    fn config_caps_are_enforced() {
        let base = GeneratorConfig::default();
        let bad = GeneratorConfig {
            num_points: 0,
            ..base.clone()
        };
        assert!(matches!(
            generate_instance(&bad),
            Err(GenerateError::PointsOutOfRange { got: 0 })
        ));
        let bad = GeneratorConfig {
            num_facilities: 11,
            ..base.clone()
        };
        assert!(matches!(
            generate_instance(&bad),
            Err(GenerateError::TooManyFacilities { .. })
        ));
        let bad = GeneratorConfig {
            cost_scale: 0,
            ..base.clone()
        };
        assert!(matches!(
            generate_instance(&bad),
            Err(GenerateError::ScaleOutOfRange {
                which: "cost_scale",
                ..
            })
        ));
        let bad = GeneratorConfig {
            horizon: MAX_HORIZON + 1,
            ..base
        };
        assert!(matches!(
            generate_instance(&bad),
            Err(GenerateError::HorizonTooLarge { .. })
        ));
    }

    #[test]
    fn zero_horizon_and_single_point_stay_valid() {
        let cfg = GeneratorConfig {
            num_points: 1,
            num_facilities: 1,
            num_clients: 3,
            horizon: 0,
            ..GeneratorConfig::default()
        };
        let inst = generate_instance(&cfg).unwrap();
        assert_eq!(inst.arrival_times(), &[0]);
        assert!(inst.clients().iter().all(|c| c.arrival == 0));
    }
}
