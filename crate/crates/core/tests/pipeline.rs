//! End-to-end scenarios exercising the solver, oracle, and every checker
//! together, with all values worked out by hand.

use pfle_core::engine::{
    build_conflict_graph, greedy_max_independent_set, solve, FreezeReason,
};
use pfle_core::model::{
    rational, solution_cost, validate_instance, Client, Instance, LeaseDescriptor, Rational,
};
use pfle_core::oracle::{exact_opt, OracleLimits};
use pfle_core::verify::{
    check_dual_feasibility, check_event_log, check_primal_feasibility, check_ratio,
    check_selection_structure, decompose_alpha, AlphaCase,
};

/// Two facilities A and B on four points; both tentative leases open at the
/// same instant and conflict through the witness client sitting between
/// them. The greedy selection keeps A (candidate order), so the far client
/// is served by A's lease at three times its own distance to B. This is the
/// scenario where every inequality in the analysis is live.
#[test]
fn conflicting_facilities_with_detour_assignment() {
    // Points: 0 = facility A, 1 = facility B, 2 = witness, 3 = far client.
    let inst = validate_instance(Instance {
        num_points: 4,
        dist: vec![
            vec![rational(0), rational(2), rational(1), rational(3)],
            vec![rational(2), rational(0), rational(1), rational(1)],
            vec![rational(1), rational(1), rational(0), rational(2)],
            vec![rational(3), rational(1), rational(2), rational(0)],
        ],
        facilities: vec![0, 1],
        lease_durations: vec![10],
        lease_costs: vec![vec![rational(1)], vec![rational(2)]],
        clients: vec![
            Client {
                position: 2,
                penalty: rational(100),
                arrival: 0,
            },
            Client {
                position: 3,
                penalty: rational(100),
                arrival: 0,
            },
        ],
    })
    .unwrap();

    let (solution, result) = solve(&inst).unwrap();

    // Both candidates open at clock 2 with budgets (2, 2).
    assert_eq!(result.alpha, vec![rational(2), rational(2)]);
    assert_eq!(result.tentatively_open.len(), 2);
    assert_eq!(result.tentatively_open[0].opened_at, rational(2));
    assert_eq!(result.tentatively_open[1].opened_at, rational(2));
    let lease_a = LeaseDescriptor {
        facility: 0,
        lease_type: 0,
        start: 0,
    };
    let lease_b = LeaseDescriptor {
        facility: 1,
        lease_type: 0,
        start: 0,
    };
    assert_eq!(
        result.freeze,
        vec![
            FreezeReason::ReachedOpenLease(lease_a),
            FreezeReason::ReachedOpenLease(lease_b),
        ]
    );

    // The witness client reaches both leases, so they conflict and the
    // earlier candidate survives.
    let graph = build_conflict_graph(&inst, &result);
    assert_eq!(graph.edges.len(), 1);
    assert_eq!(graph.edges[0].witness, 0);
    let picked = greedy_max_independent_set(&graph);
    let selected: Vec<LeaseDescriptor> = picked.iter().map(|&p| graph.vertices[p].lease).collect();
    assert_eq!(selected, vec![lease_a]);

    // Tripled copies of A's lease; both clients connect to the middle copy.
    assert_eq!(
        solution.leases,
        vec![
            LeaseDescriptor {
                facility: 0,
                lease_type: 0,
                start: -10
            },
            lease_a,
            LeaseDescriptor {
                facility: 0,
                lease_type: 0,
                start: 10
            },
        ]
    );
    assert_eq!(solution.assignment, vec![Some(1), Some(1)]);
    let cost = solution_cost(&inst, &solution).unwrap();
    assert_eq!(cost.leasing, rational(3));
    assert_eq!(cost.connection, rational(4));
    assert_eq!(cost.penalty, rational(0));
    assert_eq!(cost.total, rational(7));

    // The far client reaches the open set only through B, which lost the
    // conflict: its whole budget is a connection share, and its detour over
    // A stays within three times that share.
    let dec = decompose_alpha(&inst, &result, &selected).unwrap();
    assert_eq!(
        dec.split[0].case,
        AlphaCase::ReachesSelected { lease: lease_a }
    );
    assert_eq!(dec.split[0].connection, rational(1));
    assert_eq!(dec.split[0].facility, rational(1));
    assert_eq!(dec.split[1].case, AlphaCase::ReachesOpenOnly);
    assert_eq!(dec.split[1].connection, rational(2));
    assert_eq!(dec.sum_facility(), rational(1));

    assert!(check_primal_feasibility(&inst, &solution).passed());
    assert!(check_dual_feasibility(&inst, &result.alpha).passed());
    assert!(check_event_log(&inst, &result).passed());
    assert!(check_selection_structure(&inst, &result, &graph, &picked).passed());
    let report = check_ratio(&inst, &solution, &result, &selected, &dec);
    assert!(report.passed(), "violations: {:?}", report.violations);
    assert_eq!(report.dual_objective, Some(rational(4)));
    assert_eq!(report.ratio, Some(rational(7) / rational(4)));

    // The optimum leases B alone; the dual objective matches it exactly
    // here, and the solver lands within the factor-3 band.
    let (opt_solution, opt) = exact_opt(&inst, &OracleLimits::default()).unwrap();
    assert_eq!(opt, rational(4));
    assert_eq!(opt_solution.leases, vec![lease_b]);
    assert_eq!(opt_solution.assignment, vec![Some(0), Some(0)]);
    assert!(rational(4) <= opt);
    assert!(cost.total <= rational(3) * opt);
}

/// A mixed outcome: one cluster pays off its lease, a remote loner caps out
/// and refuses. Covers the penalty share of the accounting alongside served
/// clients, plus the oracle agreeing on who should be refused.
#[test]
fn mixed_service_and_refusal() {
    // Points 0..2 close together (facility at 0), point 3 far away.
    let inst = validate_instance(Instance {
        num_points: 4,
        dist: vec![
            vec![rational(0), rational(1), rational(1), rational(20)],
            vec![rational(1), rational(0), rational(2), rational(21)],
            vec![rational(1), rational(2), rational(0), rational(21)],
            vec![rational(20), rational(21), rational(21), rational(0)],
        ],
        facilities: vec![0],
        lease_durations: vec![6],
        lease_costs: vec![vec![rational(4)]],
        clients: vec![
            Client {
                position: 1,
                penalty: rational(9),
                arrival: 2,
            },
            Client {
                position: 2,
                penalty: rational(9),
                arrival: 3,
            },
            Client {
                position: 3,
                penalty: rational(2),
                arrival: 2,
            },
        ],
    })
    .unwrap();

    let (solution, result) = solve(&inst).unwrap();

    // Candidates start at arrivals 2 and 3; the start-2 lease covers both
    // near clients and collects both budgets: paid off at clock 3. The
    // start-3 lease loses its only contributor to that freeze and stays
    // closed. The loner needs distance 20 but caps at its penalty 2.
    assert_eq!(
        result.alpha,
        vec![rational(3), rational(3), rational(2)]
    );
    assert_eq!(result.tentatively_open.len(), 1);
    assert_eq!(
        result.tentatively_open[0].lease,
        LeaseDescriptor {
            facility: 0,
            lease_type: 0,
            start: 2
        }
    );
    assert_eq!(
        result.freeze[2],
        FreezeReason::PenaltyExhausted
    );

    let graph = build_conflict_graph(&inst, &result);
    let picked = greedy_max_independent_set(&graph);
    let selected: Vec<LeaseDescriptor> = picked.iter().map(|&p| graph.vertices[p].lease).collect();
    let dec = decompose_alpha(&inst, &result, &selected).unwrap();
    assert_eq!(dec.split[2].case, AlphaCase::ReachesNone);
    assert_eq!(dec.sum_penalty(), rational(2));

    let cost = solution_cost(&inst, &solution).unwrap();
    assert_eq!(cost.penalty, rational(2));
    assert_eq!(solution.assignment[2], None);

    assert!(check_primal_feasibility(&inst, &solution).passed());
    assert!(check_dual_feasibility(&inst, &result.alpha).passed());
    assert!(check_event_log(&inst, &result).passed());
    assert!(check_selection_structure(&inst, &result, &graph, &picked).passed());
    let report = check_ratio(&inst, &solution, &result, &selected, &dec);
    assert!(report.passed(), "violations: {:?}", report.violations);

    let dual: Rational = result.alpha.iter().sum();
    let (opt_solution, opt) = exact_opt(&inst, &OracleLimits::default()).unwrap();
    assert!(dual <= opt);
    assert!(opt <= cost.total);
    assert!(cost.total <= rational(3) * &opt);
    // The oracle also refuses the loner.
    assert_eq!(opt_solution.assignment[2], None);
}
