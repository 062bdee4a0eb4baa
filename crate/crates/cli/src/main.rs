//! `robust-ilp`: check, find and enumerate robust optimal solutions of
//! interval linear programs, and run the randomized transportation study.
//!
//! Exit codes: 0 robust optimal (or success), 1 refuted, infeasible or no
//! candidate, 2 undecided, 3 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robust_ilp::bench::{run_table1_with, BenchConfig, Protocol};
use robust_ilp::candidate::{find_candidate, midpoint_objective, CandidateError};
use robust_ilp::model::{load_diet, load_problem, CandidatePoint, DietOptions, IntervalLP};
use robust_ilp::robust::{
    check_optimality_exact, check_sufficient, enumerate_robust_components, CheckOptions, Optimality, RobustError,
    Verdict, DEFAULT_BUDGET,
};
use serde::Serialize;
use serde_json::json;

const SCHEMA_VERSION: u32 = 1;

const EXIT_ROBUST: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "robust-ilp", version, about = "Robust optimal solutions of interval linear programs")]
struct Cli {
    /// Worker threads (default: all cores). ROBUST_ILP_THREADS overrides.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check robust feasibility and optimality of a point.
    Check(CheckArgs),
    /// Compute the heuristic candidate and optionally verify it.
    Find(FindArgs),
    /// Enumerate the convex pieces of the robust optimal set.
    Components(ComponentsArgs),
    /// Randomized transportation study; prints CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem file (JSON); with --diet, a diet data file.
    #[arg(long)]
    problem: PathBuf,
    /// Read the file as diet data with the default uncertainty.
    #[arg(long)]
    diet: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sufficient,
    /// Sufficient conditions, then exact enumeration when they are inconclusive.
    Auto,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Point to check: a JSON file `{"x": [..], "y": [..]}` or inline
    /// `x1,x2,..[;y1,y2,..]`. Defaults to the candidate in the problem file.
    #[arg(long)]
    candidate: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Largest number of sign systems the exact check may solve.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Run the exact check on the candidate.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ComponentsArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Refuse problems with more variables than this.
    #[arg(long, default_value_t = 12)]
    max_n: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Blocks `MxN:E1,E2,..` separated by `;`, e.g. `5x10:2,4,6;10x15:3,5,7`.
    #[arg(long, default_value = "5x10:2,4,6")]
    dims: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write zero timings so the output depends only on the seed.
    #[arg(long)]
    no_timing: bool,
}

/// Error carrying the exit code to report.
struct Failure {
    code: u8,
    msg: String,
}

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {}", e.msg);
        return ExitCode::from(e.code);
    }
    let result = match cli.command {
        Command::Check(a) => run_check(a),
        Command::Find(a) => run_find(a),
        Command::Components(a) => run_components(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let env = match std::env::var("ROBUST_ILP_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| input_error(format!("ROBUST_ILP_THREADS={v} is not a count")))?),
        Err(_) => None,
    };
    match env.or(flag) {
        Some(0) => Err(input_error("thread count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(input_error),
        None => Ok(()),
    }
}

fn load(args: &ProblemArgs) -> Result<(IntervalLP, Option<CandidatePoint>), Failure> {
    if args.diet {
        return Ok((load_diet(&args.problem, &DietOptions::default()).map_err(input_error)?, None));
    }
    load_problem(&args.problem).map_err(input_error)
}

fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| input_error(format!("`{s}` is not a number"))))
        .collect()
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    x: Vec<f64>,
    #[serde(default)]
    y: Vec<f64>,
}

fn parse_candidate(spec: &str) -> Result<CandidatePoint, Failure> {
    let (x, y) = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| input_error(format!("{spec}: {e}")))?;
        let f: PointFile = serde_json::from_str(&text).map_err(|e| input_error(format!("{spec}: {e}")))?;
        (f.x, f.y)
    } else {
        let (xs, ys) = spec.split_once(';').unwrap_or((spec, ""));
        (parse_list(xs)?, parse_list(ys)?)
    };
    CandidatePoint::new(x, y).map_err(input_error)
}

fn exit_for(v: &Verdict) -> u8 {
    match v.optimal {
        Optimality::Yes => EXIT_ROBUST,
        Optimality::No => EXIT_REFUTED,
        Optimality::Unknown => EXIT_UNDECIDED,
    }
}

/// Verdict of the requested mode; `None` when the exact check would exceed
/// the budget.
fn decide(p: &IntervalLP, pt: &CandidatePoint, mode: Mode, opts: &CheckOptions) -> Result<Option<Verdict>, Failure> {
    let exact = |fallback: Option<Verdict>| match check_optimality_exact(p, pt, opts) {
        Ok(v) => Ok(Some(v)),
        Err(RobustError::BudgetExceeded { .. }) => Ok(fallback),
        Err(e) => Err(input_error(e)),
    };
    match mode {
        Mode::Exact => exact(None),
        Mode::Sufficient => check_sufficient(p, pt, opts).map(Some).map_err(input_error),
        Mode::Auto => {
            let v = check_sufficient(p, pt, opts).map_err(input_error)?;
            if v.optimal == Optimality::Unknown {
                exact(Some(v))
            } else {
                Ok(Some(v))
            }
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", (x * 1e9).round() / 1e9)).collect();
    format!("[{}]", parts.join(", "))
}

fn print_verdict(v: &Verdict) {
    println!("robust feasible: {}", if v.feasible { "yes" } else { "no" });
    let optimal = match v.optimal {
        Optimality::Yes => "yes",
        Optimality::No => "no",
        Optimality::Unknown => "unknown",
    };
    println!("robust optimal: {optimal}");
    println!("method: {:?}, {} sign systems, {:.3} ms", v.method, v.systems_checked, v.elapsed.as_secs_f64() * 1e3);
    let Some(cert) = &v.certificate else { return };
    println!("certificate: {:?}", cert.kind);
    if !cert.rows.is_empty() {
        println!("  rows: {:?}", cert.rows);
    }
    if let Some(s) = &cert.sign_vector {
        println!("  sign vector: {:?}", s.as_slice());
    }
    if let Some(d) = &cert.witness {
        println!("  improving direction x: {}", fmt_vec(&d.x));
        if !d.y.is_empty() {
            println!("  improving direction y: {}", fmt_vec(&d.y));
        }
    }
    if let Some(r) = &cert.realization {
        println!("  realization costs c: {}", fmt_vec(&r.cost_x));
        if !r.cost_y.is_empty() {
            println!("  realization costs d: {}", fmt_vec(&r.cost_y));
        }
    }
    if let Some(b) = &cert.dual_box {
        let lo: Vec<f64> = b.bounds.iter().map(|i| i.lo()).collect();
        let hi: Vec<f64> = b.bounds.iter().map(|i| i.hi()).collect();
        println!("  dual box lower: {}", fmt_vec(&lo));
        println!("  dual box upper: {}", fmt_vec(&hi));
    }
}

fn emit_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("plain data serializes"));
}

fn with_schema(command: &str, body: impl Serialize) -> serde_json::Value {
    let mut v = serde_json::to_value(body).expect("plain data serializes");
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(command));
    }
    v
}

fn run_check(a: CheckArgs) -> Result<u8, Failure> {
    let (p, file_cand) = load(&a.problem)?;
    let pt = match (&a.candidate, file_cand) {
        (Some(spec), _) => parse_candidate(spec)?,
        (None, Some(c)) => c,
        (None, None) => return Err(input_error("no candidate: pass --candidate or add candidate_x to the problem file")),
    };
    pt.check_dims(&p).map_err(input_error)?;
    let opts = CheckOptions { budget: a.budget, ..CheckOptions::default() };
    let Some(v) = decide(&p, &pt, a.mode, &opts)? else {
        let msg = format!("the exact check needs more than {} sign systems", a.budget);
        if a.problem.json {
            emit_json(with_schema("check", json!({ "optimal": "Unknown", "note": msg })));
        } else {
            println!("robust optimal: unknown ({msg})");
        }
        return Ok(EXIT_UNDECIDED);
    };
    if a.problem.json {
        emit_json(with_schema("check", &v));
    } else {
        print_verdict(&v);
    }
    Ok(exit_for(&v))
}

fn run_find(a: FindArgs) -> Result<u8, Failure> {
    let (p, _) = load(&a.problem)?;
    let cand = match find_candidate(&p) {
        Ok(c) => c,
        Err(CandidateError::Unbounded) => {
            if a.problem.json {
                emit_json(with_schema("find", json!({ "candidate": null, "unbounded": true })));
            } else {
                println!("no candidate: the midpoint objective is unbounded on the robust feasible set");
            }
            return Ok(EXIT_REFUTED);
        }
        Err(e) => return Err(input_error(e)),
    };
    let Some(cand) = cand else {
        if a.problem.json {
            emit_json(with_schema("find", json!({ "candidate": null, "unbounded": false })));
        } else {
            println!("no candidate: the robust feasible set is empty");
        }
        return Ok(EXIT_REFUTED);
    };
    let objective = midpoint_objective(&p, &cand);
    let opts = CheckOptions { budget: a.budget, ..CheckOptions::default() };
    let verdict = if a.verify { Some(decide(&p, &cand, Mode::Exact, &opts)?) } else { None };
    let code = match &verdict {
        None => EXIT_ROBUST,
        Some(None) => EXIT_UNDECIDED,
        Some(Some(v)) => exit_for(v),
    };
    if a.problem.json {
        let verdict = verdict.map(|v| v.map_or_else(|| json!({ "optimal": "Unknown", "note": "budget exceeded" }), |v| json!(v)));
        let body = json!({
            "candidate": { "x": cand.x(), "y": cand.y() },
            "midpoint_objective": objective,
            "verdict": verdict,
        });
        emit_json(with_schema("find", body));
        return Ok(code);
    }
    println!("candidate x: {}", fmt_vec(cand.x()));
    if !cand.y().is_empty() {
        println!("candidate y: {}", fmt_vec(cand.y()));
    }
    println!("midpoint objective: {objective}");
    match verdict {
        None => {}
        Some(None) => println!("verification: unknown (more than {} sign systems)", a.budget),
        Some(Some(v)) => print_verdict(&v),
    }
    Ok(code)
}

fn run_components(a: ComponentsArgs) -> Result<u8, Failure> {
    let (p, _) = load(&a.problem)?;
    let comps = enumerate_robust_components(&p, a.max_n).map_err(input_error)?;
    let code = if comps.is_empty() { EXIT_REFUTED } else { EXIT_ROBUST };
    if a.problem.json {
        emit_json(with_schema("components", json!({ "components": comps })));
        return Ok(code);
    }
    println!("{} component(s)", comps.len());
    for (k, c) in comps.iter().enumerate() {
        let shape = if c.is_point(1e-9) { "point" } else { "polyhedron" };
        println!("component {}: {shape}, zero set {:?}", k + 1, c.zero_set);
        if c.is_point(1e-9) {
            println!("  x = {}", fmt_vec(&c.witness));
        } else {
            println!("  lower {}", fmt_vec(&c.lower));
            println!("  upper {}", fmt_vec(&c.upper));
            println!("  witness {}", fmt_vec(&c.witness));
        }
    }
    Ok(code)
}

fn parse_dims(spec: &str) -> Result<Vec<BenchConfig>, Failure> {
    let bad = || input_error(format!("bad --dims `{spec}`; expected e.g. 5x10:2,4,6"));
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|block| {
            let (size, edges) = block.trim().split_once(':').ok_or_else(bad)?;
            let (m, n) = size.split_once('x').ok_or_else(bad)?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            let edges = edges.split(',').map(|e| e.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?;
            if m == 0 || n == 0 {
                return Err(bad());
            }
            Ok(BenchConfig { m, n, edges })
        })
        .collect()
}

fn run_bench(a: BenchArgs) -> Result<u8, Failure> {
    let configs = parse_dims(&a.dims)?;
    if a.trials == 0 {
        return Err(input_error("--trials must be at least 1"));
    }
    let table = run_table1_with(&configs, a.trials, a.seed, &Protocol::default(), true);
    let csv = table.to_csv(!a.no_timing);
    match a.out {
        Some(path) => std::fs::write(&path, csv).map_err(|e| input_error(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(EXIT_ROBUST)
}
