//! `ftlb`: reduce 3-CNF formulas to drone filming instances, build witness
//! plans, verify plans, run the discretized solvers and render the layout.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 certificate or
//! verification failure, 3 resource guard.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ftlb::io::{
    parse_assignment, parse_dimacs, render_svg, InstanceDocument, IoError, PlanDocument,
    RenderOptions,
};
use ftlb::model::verify;
use ftlb::reduction::{
    brute_force_sat, build_instance, build_witness_plan, check_constraints, ReducedInstance,
    ReductionError,
};
use ftlb::solvers::{
    brute_force_tiny, discretize, greedy_multi, single_drone_dp, DiscretizeOptions, SolverError,
};

#[derive(Parser)]
#[command(name = "ftlb", version, about = "Drone filming time with limited battery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a DIMACS 3-CNF formula to an instance document.
    Reduce {
        /// DIMACS file, or `-` for stdin.
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the witness flight plan of a satisfying assignment.
    Witness {
        /// Instance document, or `-` for stdin.
        instance: PathBuf,
        /// File with signed variable numbers, one value per variable.
        #[arg(long, conflicts_with = "solve_sat")]
        assignment: Option<PathBuf>,
        /// Find an assignment by exhaustive search.
        #[arg(long)]
        solve_sat: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a plan against an instance; exits 0 iff the target is met.
    Verify {
        instance: PathBuf,
        /// Plan document, or `-` for stdin.
        plan: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a discretized solver.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
        /// Grid step in seconds.
        #[arg(long)]
        step: f64,
        /// Number of drones; defaults to the instance's k.
        #[arg(long)]
        drones: Option<usize>,
        /// Ignore scenes whose window is shorter than the step.
        #[arg(long)]
        drop_subgrid_windows: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-evaluate the construction certificate of an instance.
    Check { instance: PathBuf },
    /// Render the construction as SVG.
    Render {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_timeline: bool,
        #[arg(long)]
        no_labels: bool,
        #[arg(long, default_value_t = 1200.0)]
        width: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dp,
    Greedy,
    Exact,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = classify(&error);
        Self { code, error }
    }
}

fn reduction_code(r: &ReductionError) -> u8 {
    match r {
        ReductionError::TooManyVariables { .. } | ReductionError::TooManyScenes { .. } => 3,
        ReductionError::ParameterSearch { .. }
        | ReductionError::GadgetOverlap { .. }
        | ReductionError::GeneralPosition
        | ReductionError::LayoutMismatch(_) => 2,
        _ => 1,
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(SolverError::TooLarge { .. }) = cause.downcast_ref::<SolverError>() {
            return 3;
        }
        if let Some(r) = cause.downcast_ref::<ReductionError>() {
            return reduction_code(r);
        }
        if let Some(IoError::Reduction(r)) = cause.downcast_ref::<IoError>() {
            return reduction_code(r);
        }
    }
    1
}

fn failure(code: u8, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn load_document(path: &Path) -> Result<InstanceDocument> {
    let text = read_input(path)?;
    InstanceDocument::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_reduced(path: &Path) -> Result<ReducedInstance, Failure> {
    let doc = load_document(path)?;
    doc.reduced()?.ok_or_else(|| {
        failure(
            1,
            anyhow!("{} has no construction block; it was not produced by `reduce`", path.display()),
        )
    })
}

fn reduce(cnf: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let text = read_input(cnf)?;
    let formula = parse_dimacs(&text).with_context(|| format!("parsing {}", cnf.display()))?;
    let reduced = build_instance(&formula)?;
    let p = &reduced.params;
    eprintln!(
        "reduced: {} variables, {} clauses after balancing, {} scenes, k = {}, L = {}, T = {}",
        reduced.balanced.num_vars(),
        reduced.balanced.num_clauses(),
        reduced.instance.film_plan.len(),
        reduced.instance.k,
        reduced.instance.battery,
        reduced.instance.target,
    );
    eprintln!(
        "parameters: R1 = {}, delta = {}, t = {}",
        p.clause_radius, p.delta, p.breadcrumbs
    );
    write_output(output, &InstanceDocument::from_reduced(&reduced).to_json())?;
    if !reduced.certificate.all_pass() {
        return Err(failure(
            2,
            anyhow!("certificate fails: {}", reduced.certificate.failing().join(", ")),
        ));
    }
    Ok(())
}

fn witness(
    instance: &Path,
    assignment: Option<&Path>,
    solve_sat: bool,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let reduced = load_reduced(instance)?;
    let n = reduced.balanced.num_vars();
    let values = match (assignment, solve_sat) {
        (Some(path), _) => parse_assignment(&read_input(path)?, n)?,
        (None, true) => brute_force_sat(&reduced.balanced.formula)?
            .ok_or_else(|| failure(2, anyhow!("formula is unsatisfiable")))?,
        (None, false) => {
            return Err(failure(1, anyhow!("pass --assignment <file> or --solve-sat")));
        }
    };
    let plan = build_witness_plan(
        &reduced.balanced,
        &reduced.params,
        &reduced.layout,
        &reduced.index,
        &reduced.instance.film_plan,
        &values,
    )
    .map_err(|e| match e {
        ReductionError::UnsatisfiedClause { .. } => failure(2, e.into()),
        e => Failure::from(e),
    })?;
    let report = verify(&reduced.instance, &plan)?;
    eprintln!(
        "witness: filming time {} (target {}), max away time {} (endurance {})",
        report.total_filming_time,
        report.target,
        report.max_away_time(),
        report.battery
    );
    let doc = PlanDocument::new(&plan, "witness").with_verification(&report);
    write_output(output, &doc.to_json())?;
    Ok(())
}

fn verify_plan(instance: &Path, plan: &Path, json: bool) -> Result<(), Failure> {
    let inst = load_document(instance)?.instance()?;
    let doc = PlanDocument::from_json(&read_input(plan)?)
        .with_context(|| format!("parsing {}", plan.display()))?;
    let report = verify(&inst, &doc.plan())?;
    if json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        write_output(None, &s)?;
    } else {
        let mut s = String::new();
        for (i, ok) in report.realizable_per_path.iter().enumerate() {
            s.push_str(&format!(
                "path {i}: {}\n",
                if *ok { "realizable" } else { "NOT realizable" }
            ));
            for d in &report.diagnostics[i] {
                s.push_str(&format!("  {d}\n"));
            }
        }
        s.push_str(&format!(
            "filming time {} / target {} (tolerance {})\nmax away time {} / endurance {}\nmeets target: {}\n",
            report.total_filming_time,
            report.target,
            report.tolerance,
            report.max_away_time(),
            report.battery,
            report.meets_target
        ));
        write_output(None, &s)?;
    }
    if report.meets_target {
        Ok(())
    } else if !report.all_realizable() {
        Err(failure(2, anyhow!("plan is not realizable")))
    } else {
        Err(failure(2, anyhow!("plan does not reach the target filming time")))
    }
}

fn solve(
    instance: &Path,
    method: Method,
    step: f64,
    drones: Option<usize>,
    drop_subgrid_windows: bool,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let inst = load_document(instance)?.instance()?;
    let k = drones.unwrap_or(inst.k);
    let options = DiscretizeOptions {
        drop_subgrid_windows,
    };
    let fp = &inst.film_plan;
    let result = match method {
        Method::Dp => single_drone_dp(&discretize(fp, step, options)?, inst.battery)?,
        Method::Greedy => greedy_multi(fp, k, inst.battery, step, options)?,
        Method::Exact => brute_force_tiny(fp, k, inst.battery, step, options)?,
    };
    // Solvers may be asked for more drones than the instance allows; the
    // plan is still checked path by path.
    let mut checked = inst.clone();
    checked.k = checked.k.max(k);
    let report = verify(&checked, &result.plan)?;
    eprintln!(
        "{}: objective {} (target {}), {} grid nodes, {} arcs, {} scenes dropped{}",
        result.method,
        result.objective,
        inst.target,
        result.node_count,
        result.arc_count,
        result.dropped_scenes.len(),
        if result.battery_rounded {
            format!(", endurance rounded down to {} steps", result.battery_steps)
        } else {
            String::new()
        }
    );
    let mut doc = PlanDocument::new(&result.plan, result.method.to_string()).with_verification(&report);
    doc.objective = Some(result.objective);
    doc.step = Some(result.step);
    write_output(output, &doc.to_json())?;
    if !report.all_realizable() {
        return Err(failure(
            2,
            anyhow!("solver emitted an unrealizable plan: {:?}", report.diagnostics),
        ));
    }
    Ok(())
}

fn check(instance: &Path) -> Result<(), Failure> {
    let reduced = load_reduced(instance)?;
    let fresh = check_constraints(
        &reduced.balanced,
        &reduced.params,
        &reduced.layout,
        &reduced.instance.film_plan,
        &reduced.index,
    );
    let mut s = String::new();
    for p in &fresh.predicates {
        s.push_str(&format!(
            "{:<28} {}  margin {:e}\n",
            p.id,
            if p.pass { "pass" } else { "FAIL" },
            p.margin
        ));
    }
    write_output(None, &s)?;
    if fresh != reduced.certificate {
        return Err(failure(2, anyhow!("stored certificate differs from the re-evaluated one")));
    }
    if !fresh.all_pass() {
        return Err(failure(2, anyhow!("certificate fails: {}", fresh.failing().join(", "))));
    }
    Ok(())
}

fn render(instance: &Path, output: Option<&Path>, options: RenderOptions) -> Result<(), Failure> {
    let reduced = load_reduced(instance)?;
    let svg = render_svg(
        &reduced.layout,
        &reduced.params,
        Some(&reduced.instance.film_plan),
        options,
    );
    write_output(output, &svg)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Reduce { cnf, output } => reduce(&cnf, output.as_deref()),
        Command::Witness {
            instance,
            assignment,
            solve_sat,
            output,
        } => witness(&instance, assignment.as_deref(), solve_sat, output.as_deref()),
        Command::Verify {
            instance,
            plan,
            json,
        } => verify_plan(&instance, &plan, json),
        Command::Solve {
            instance,
            method,
            step,
            drones,
            drop_subgrid_windows,
            output,
        } => solve(
            &instance,
            method,
            step,
            drones,
            drop_subgrid_windows,
            output.as_deref(),
        ),
        Command::Check { instance } => check(&instance),
        Command::Render {
            instance,
            output,
            no_timeline,
            no_labels,
            width,
        } => render(
            &instance,
            output.as_deref(),
            RenderOptions {
                width,
                timeline: !no_timeline,
                labels: !no_labels,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
