//! The `pfle` binary's verbs.
//!
//! Exit codes: 0 on success, 1 when a certificate or guarantee assertion
//! fails, 2 for input errors (unreadable files, malformed documents,
//! instances outside oracle or generator limits).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand};
use pfle_core::engine::{
    build_conflict_graph, greedy_max_independent_set, prune_unused_leases, solve, AscentResult,
    ConflictGraph, EngineError,
};
use pfle_core::model::{rational, solution_cost, Solution};
use pfle_core::oracle::{exact_opt, OracleError, OracleLimits};
use pfle_core::verify::{
    check_dual_feasibility, check_event_log, check_primal_feasibility, check_ratio,
    check_selection_structure, decompose_alpha, CertificateReport, DecomposeError,
};
use pfle_core::{LeaseDescriptor, Rational, ValidatedInstance};
use serde::Deserialize;
use thiserror::Error;

use crate::format::{
    read_instance, write_instance, CostRecord, FormatError, LeaseRecord,
};
use crate::generate::{generate_instance, GenerateError, GeneratorConfig};
use crate::numeric::{format_exact, ratio_string, ExactNumber};
use crate::report::{
    freeze_text, render_exact_text, render_solve_text, render_verify_text, CheckRecord,
    DualReport, ExactReport, SolveReport, VerifyReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "pfle",
    version,
    about = "Primal-dual solver for facility leasing with penalties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random instance
    Gen(GenArgs),
    /// Solve an instance; optionally prune, certify, and emit dual values
    Solve(SolveArgs),
    /// Exhaustive optimum for small instances, compared against the solver
    Exact(ExactArgs),
    /// Solve and run every certificate check
    Verify(VerifyArgs),
    /// Solve a matrix of generated instances and collect a CSV
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 4)]
    pub facilities: usize,
    #[arg(long, default_value_t = 8)]
    pub clients: usize,
    #[arg(long = "lease-types", default_value_t = 3)]
    pub lease_types: usize,
    #[arg(long, default_value_t = 50)]
    pub horizon: u64,
    #[arg(long = "cost-scale", default_value_t = 8)]
    pub cost_scale: u64,
    #[arg(long = "penalty-scale", default_value_t = 30)]
    pub penalty_scale: u64,
    /// Make longer leases cheaper per unit of time
    #[arg(
        long = "economy-of-scale",
        default_value_t = true,
        action = ArgAction::Set,
        value_name = "BOOL"
    )]
    pub economy_of_scale: bool,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Drop tripled lease copies that serve no client
    #[arg(long)]
    pub prune: bool,
    /// Run every certificate check; nonzero exit if any fails
    #[arg(long)]
    pub certify: bool,
    /// Include dual values and freeze reasons in the report
    #[arg(long = "emit-dual")]
    pub emit_dual: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub instance: PathBuf,
    /// Refuse instances with more candidate leases than this
    #[arg(long = "max-candidates", default_value_t = OracleLimits::default().max_candidate_leases)]
    pub max_candidates: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// JSON array of generator configurations with seed ranges
    pub matrix: PathBuf,
    /// Directory receiving bench.csv
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CmdError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("solver failed: {0}")]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("certificate construction failed: {0}")]
    Decompose(#[from] DecomposeError),
    #[error("cannot write {path}: {source}")]
    WriteOut {
        path: String,
        source: std::io::Error,
    },
    #[error("one or more certificate checks failed")]
    ChecksFailed,
    #[error("approximation guarantee violated: total {total} exceeds 3 x optimum {optimum}")]
    BoundViolated { total: String, optimum: String },
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Engine(_)
            | CmdError::Decompose(_)
            | CmdError::ChecksFailed
            | CmdError::BoundViolated { .. } => 1,
            _ => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CmdError> {
    let cfg = GeneratorConfig {
        seed: args.seed,
        num_points: args.points,
        num_facilities: args.facilities,
        num_clients: args.clients,
        num_lease_types: args.lease_types,
        horizon: args.horizon,
        cost_scale: args.cost_scale,
        penalty_scale: args.penalty_scale,
        economy_of_scale: args.economy_of_scale,
    };
    let inst = generate_instance(&cfg)?;
    match &args.out {
        Some(path) => write_instance(&inst, path)?,
        None => print!("{}", crate::format::instance_to_string(&inst)),
    }
    Ok(())
}

/// Runs the full certificate suite in a fixed order.
fn run_certificates(
    inst: &ValidatedInstance,
    solution: &Solution,
    result: &AscentResult,
    graph: &ConflictGraph,
    picked: &[usize],
    selected: &[LeaseDescriptor],
) -> Result<Vec<CertificateReport>, DecomposeError> {
    let decomposition = decompose_alpha(inst, result, selected)?;
    Ok(vec![
        check_primal_feasibility(inst, solution),
        check_dual_feasibility(inst, &result.alpha),
        check_ratio(inst, solution, result, selected, &decomposition),
        check_event_log(inst, result),
        check_selection_structure(inst, result, graph, picked),
    ])
}

struct Solved {
    inst: ValidatedInstance,
    solution: Solution,
    result: AscentResult,
    graph: ConflictGraph,
    picked: Vec<usize>,
    selected: Vec<LeaseDescriptor>,
}

fn solve_file(path: &Path) -> Result<Solved, CmdError> {
    let inst = read_instance(path)?;
    let (solution, result) = solve(&inst)?;
    let graph = build_conflict_graph(&inst, &result);
    let picked = greedy_max_independent_set(&graph);
    let selected = picked
        .iter()
        .map(|&v| graph.vertices[v].lease)
        .collect::<Vec<_>>();
    Ok(Solved {
        inst,
        solution,
        result,
        graph,
        picked,
        selected,
    })
}

fn print_json<T: serde::Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("report serialization");
    println!("{text}");
}

fn cmd_solve(args: SolveArgs) -> Result<(), CmdError> {
    let run = solve_file(&args.instance)?;
    let reported = if args.prune {
        prune_unused_leases(&run.solution)
    } else {
        run.solution.clone()
    };
    let cost = solution_cost(&run.inst, &reported).expect("solver output prices");
    let dual_objective: Rational = run.result.alpha.iter().sum();

    let certificates = if args.certify {
        let reports = run_certificates(
            &run.inst,
            &reported,
            &run.result,
            &run.graph,
            &run.picked,
            &run.selected,
        )?;
        Some(reports.iter().map(CheckRecord::from).collect::<Vec<_>>())
    } else {
        None
    };

    let report = SolveReport {
        instance: args.instance.display().to_string(),
        points: run.inst.num_points(),
        facilities: run.inst.facilities().len(),
        clients: run.inst.clients().len(),
        lease_types: run.inst.num_lease_types(),
        candidates: run.result.candidates.len(),
        events: run.result.events.len(),
        pruned: args.prune,
        leases: reported.leases.iter().map(LeaseRecord::from).collect(),
        assignment: reported.assignment.clone(),
        cost: CostRecord::from(&cost),
        dual_objective: ExactNumber(dual_objective.clone()),
        ratio_to_dual: (dual_objective != rational(0))
            .then(|| ratio_string(&(cost.total.clone() / dual_objective))),
        certificates,
        dual: args.emit_dual.then(|| DualReport {
            alpha: run.result.alpha.iter().cloned().map(ExactNumber).collect(),
            freeze: run.result.freeze.iter().map(freeze_text).collect(),
        }),
    };

    if args.json {
        print_json(&report);
    } else {
        print!("{}", render_solve_text(&report));
    }
    if report
        .certificates
        .as_ref()
        .is_some_and(|checks| checks.iter().any(|c| !c.passed))
    {
        return Err(CmdError::ChecksFailed);
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CmdError> {
    let run = solve_file(&args.instance)?;
    let reports = run_certificates(
        &run.inst,
        &run.solution,
        &run.result,
        &run.graph,
        &run.picked,
        &run.selected,
    )?;
    let checks: Vec<CheckRecord> = reports.iter().map(CheckRecord::from).collect();
    let report = VerifyReport {
        instance: args.instance.display().to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    if args.json {
        print_json(&report);
    } else {
        print!("{}", render_verify_text(&report));
    }
    if report.passed {
        Ok(())
    } else {
        Err(CmdError::ChecksFailed)
    }
}

fn cmd_exact(args: ExactArgs) -> Result<(), CmdError> {
    let inst = read_instance(&args.instance)?;
    let limits = OracleLimits {
        max_candidate_leases: args.max_candidates,
        ..OracleLimits::default()
    };
    let (optimum_solution, optimum) = exact_opt(&inst, &limits)?;
    let (engine_solution, result) = solve(&inst)?;
    let engine_total = solution_cost(&inst, &engine_solution)
        .expect("solver output prices")
        .total;

    let report = ExactReport {
        instance: args.instance.display().to_string(),
        candidates: result.candidates.len(),
        optimum: ExactNumber(optimum.clone()),
        optimum_leases: optimum_solution
            .leases
            .iter()
            .map(LeaseRecord::from)
            .collect(),
        optimum_assignment: optimum_solution.assignment.clone(),
        engine_total: ExactNumber(engine_total.clone()),
        ratio_to_optimum: (optimum != rational(0))
            .then(|| ratio_string(&(engine_total.clone() / optimum.clone()))),
    };
    print!("{}", render_exact_text(&report));

    if engine_total > rational(3) * optimum.clone() {
        return Err(CmdError::BoundViolated {
            total: format_exact(&engine_total),
            optimum: format_exact(&optimum),
        });
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchEntry {
    /// Inclusive seed range.
    seeds: [u64; 2],
    points: usize,
    facilities: usize,
    clients: usize,
    lease_types: usize,
    horizon: u64,
    cost_scale: u64,
    penalty_scale: u64,
    #[serde(default)]
    economy_of_scale: bool,
}

pub const BENCH_HEADER: &str = "seed,points,facilities,clients,lease_types,horizon,economy,\
candidates,events,dual_objective,total,ratio_to_dual,opt,ratio_to_opt,wall_ms";

fn cmd_bench(args: BenchArgs) -> Result<(), CmdError> {
    let text = fs::read_to_string(&args.matrix).map_err(|source| FormatError::Read {
        path: args.matrix.display().to_string(),
        source,
    })?;
    let entries: Vec<BenchEntry> = serde_json::from_str(&text).map_err(FormatError::Json)?;

    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    let mut rows = 0usize;
    let mut exact_rows = 0usize;
    let mut max_dual_ratio: Option<Rational> = None;
    let mut max_opt_ratio: Option<Rational> = None;
    let track = |slot: &mut Option<Rational>, value: Rational| {
        if slot.as_ref().is_none_or(|cur| *cur < value) {
            *slot = Some(value);
        }
    };

    for entry in &entries {
        for seed in entry.seeds[0]..=entry.seeds[1] {
            let cfg = GeneratorConfig {
                seed,
                num_points: entry.points,
                num_facilities: entry.facilities,
                num_clients: entry.clients,
                num_lease_types: entry.lease_types,
                horizon: entry.horizon,
                cost_scale: entry.cost_scale,
                penalty_scale: entry.penalty_scale,
                economy_of_scale: entry.economy_of_scale,
            };
            let inst = generate_instance(&cfg)?;
            let started = Instant::now();
            let (solution, result) = solve(&inst)?;
            let wall_ms = started.elapsed().as_millis();
            let cost = solution_cost(&inst, &solution).expect("solver output prices");
            let dual: Rational = result.alpha.iter().sum();

            let ratio_to_dual = if dual != rational(0) {
                let ratio = cost.total.clone() / dual.clone();
                track(&mut max_dual_ratio, ratio.clone());
                ratio_string(&ratio)
            } else {
                String::new()
            };
            let (opt_text, ratio_to_opt) = match exact_opt(&inst, &OracleLimits::default()) {
                Ok((_, opt)) => {
                    exact_rows += 1;
                    let ratio = if opt != rational(0) {
                        let ratio = cost.total.clone() / opt.clone();
                        track(&mut max_opt_ratio, ratio.clone());
                        ratio_string(&ratio)
                    } else {
                        String::new()
                    };
                    (format_exact(&opt), ratio)
                }
                Err(OracleError::TooLarge { .. }) => (String::new(), String::new()),
            };

            csv.push_str(&format!(
                "{seed},{},{},{},{},{},{},{},{},{},{},{ratio_to_dual},{opt_text},{ratio_to_opt},{wall_ms}\n",
                entry.points,
                entry.facilities,
                entry.clients,
                entry.lease_types,
                entry.horizon,
                entry.economy_of_scale,
                result.candidates.len(),
                result.events.len(),
                format_exact(&dual),
                format_exact(&cost.total),
            ));
            rows += 1;
        }
    }

    fs::create_dir_all(&args.out).map_err(|source| CmdError::WriteOut {
        path: args.out.display().to_string(),
        source,
    })?;
    let csv_path = args.out.join("bench.csv");
    fs::write(&csv_path, &csv).map_err(|source| CmdError::WriteOut {
        path: csv_path.display().to_string(),
        source,
    })?;

    println!("rows: {rows}");
    println!("csv: {}", csv_path.display());
    match &max_dual_ratio {
        Some(ratio) => println!("max ratio to dual: {}", ratio_string(ratio)),
        None => println!("max ratio to dual: -"),
    }
    match &max_opt_ratio {
        Some(ratio) => println!(
            "max ratio to optimum: {} ({exact_rows} rows within oracle limits)",
            ratio_string(ratio)
        ),
        None => println!("max ratio to optimum: - ({exact_rows} rows within oracle limits)"),
    }
    Ok(())
}
