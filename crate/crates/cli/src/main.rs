//! `islands`: find, check and draw balanced convex islands.

mod bench;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use balanced_islands::balanced::{balanced_island, case_targets, find_island, FastPrecondition};
use balanced_islands::ceder::ceder_point;
use balanced_islands::generate::{generate, Distribution};
use balanced_islands::geom::parse_rational;
use balanced_islands::island_path::island_path;
use balanced_islands::oracle::{oracle_enumerate, oracle_find};
use balanced_islands::pointfile::{parse_points, write_points};
use balanced_islands::record::{Query, ResultRecord};
use balanced_islands::render::render_svg;
use balanced_islands::{Algorithm, Case, ColoredPointSet, Error, Island, Rational, TargetCounts};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "islands",
    version,
    about = "Balanced convex islands in red/blue point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an island with balanced (or explicit) color counts.
    Find(FindArgs),
    /// Brute-force search or enumeration of islands (small inputs).
    Oracle(OracleArgs),
    /// One-swap path between two islands of equal size.
    Path(PathArgs),
    /// Six-partition point with three lines through it.
    Ceder(InputArgs),
    /// Generate a general-position point file.
    Gen(GenArgs),
    /// Time the search algorithms over a range of sizes.
    Bench(bench::BenchArgs),
    /// Draw a result record over its point file as SVG.
    Render(RenderArgs),
    /// Check a point file for parse errors and general position.
    Validate(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Point file, or `-` for standard input.
    #[arg(long, short)]
    input: String,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Fraction of each color to capture, in [0, 1/2].
    #[arg(long, default_value = "1/2", value_parser = rational)]
    alpha: Rational,
    /// 1: ceil(alpha r) red and ceil(alpha b) blue; 2: ceil((r+1)/2) and ceil((b+1)/2).
    #[arg(long = "case", default_value = "1")]
    case: Case,
    #[arg(long, default_value = "auto")]
    algorithm: Algorithm,
    /// Explicit red target; requires --b-target and overrides alpha and case.
    #[arg(long, requires = "b_target")]
    r_target: Option<usize>,
    #[arg(long, requires = "r_target")]
    b_target: Option<usize>,
    /// Also write an SVG drawing of the result.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long)]
    r_target: usize,
    #[arg(long)]
    b_target: usize,
    /// List every island with the targets instead of the first.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct PathArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Comma-separated ids of the first island.
    #[arg(long, value_delimiter = ',')]
    from: Vec<usize>,
    /// Comma-separated ids of the last island.
    #[arg(long, value_delimiter = ',')]
    to: Vec<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1/2", value_parser = rational)]
    red_fraction: Rational,
    #[arg(long, default_value = "uniform")]
    dist: Distribution,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RenderArgs {
    /// JSON result record produced by `find --json`.
    #[arg(long)]
    record: PathBuf,
    #[arg(long, short)]
    input: String,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number like 1/3"))
}

/// Failure classes with their exit codes.
enum Failure {
    Input(String),
    Infeasible,
    Bug(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoremViolation(_) | Error::InternalAssertion(_) | Error::CederNotFound => {
                Failure::Bug(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn read_points(path: &str) -> Result<ColoredPointSet, Failure> {
    parse_points(&read_text(path)?).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn print_json<T: serde::Serialize>(v: &T) -> CliResult {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn describe(island: &Island) -> String {
    format!(
        "{} red + {} blue {:?}",
        island.red, island.blue, island.members
    )
}

fn cmd_find(a: FindArgs) -> CliResult {
    let set = read_points(&a.io.input)?;
    let start = Instant::now();
    let (query, solution) = match (a.r_target, a.b_target) {
        (Some(r), Some(b)) => {
            let t = TargetCounts::new(r, b);
            if a.algorithm == Algorithm::Fast {
                check_precondition(&set, t)?;
            }
            (
                Query::new(t, None, None, a.algorithm),
                find_island(&set, t, a.algorithm)?,
            )
        }
        _ => {
            let t = case_targets(&set, &a.alpha, a.case)?;
            if a.algorithm == Algorithm::Fast && a.case == Case::One {
                check_precondition(&set, t)?;
            }
            let alpha = (a.case == Case::One).then_some(&a.alpha);
            let sol = balanced_island(&set, &a.alpha, a.case, a.algorithm)?;
            (Query::new(t, alpha, Some(a.case), a.algorithm), Some(sol))
        }
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let record = ResultRecord::new(query, solution, Some(elapsed));
    record.verify(&set)?;
    if let Some(path) = &a.svg {
        let island = Island::from_ids(&set, record.island.iter().copied())?;
        fs::write(path, render_svg(&set, &island, record.certificate.as_ref()))?;
    }
    if a.io.json {
        print_json(&record)?;
    } else if record.found {
        let island = Island::from_ids(&set, record.island.iter().copied())?;
        let family = record.certificate.as_ref().map_or("none", |c| c.family());
        println!("found {} via {family} in {elapsed} ms", describe(&island));
        for d in &record.diagnostics {
            println!("note: {d}");
        }
    } else {
        println!(
            "no island with {} red and {} blue found by {}",
            record.query.r_target, record.query.b_target, record.query.algorithm
        );
    }
    if record.found {
        Ok(())
    } else {
        Err(Failure::Infeasible)
    }
}

fn check_precondition(set: &ColoredPointSet, t: TargetCounts) -> CliResult {
    let pre = FastPrecondition::evaluate(set, t);
    if pre.satisfied {
        Ok(())
    } else {
        Err(Error::PreconditionFailed {
            k: t.k(),
            bound: pre.bound(),
        }
        .into())
    }
}

fn cmd_oracle(a: OracleArgs) -> CliResult {
    let set = read_points(&a.io.input)?;
    let t = TargetCounts::new(a.r_target, a.b_target);
    let found: Vec<Island> = if a.all {
        oracle_enumerate(&set, t)?
    } else {
        oracle_find(&set, t)?.into_iter().collect()
    };
    if a.io.json {
        print_json(&found)?;
    } else if found.is_empty() {
        println!("no island with {} red and {} blue", t.r_target, t.b_target);
    } else {
        for i in &found {
            println!("{}", describe(i));
        }
    }
    if found.is_empty() {
        Err(Failure::Infeasible)
    } else {
        Ok(())
    }
}

#[derive(serde::Serialize)]
struct PathReport {
    start: Vec<usize>,
    steps: Vec<(usize, usize)>,
    red_counts: Vec<usize>,
}

fn cmd_path(a: PathArgs) -> CliResult {
    let set = read_points(&a.io.input)?;
    let from = Island::from_ids(&set, a.from.iter().copied())?;
    let to = Island::from_ids(&set, a.to.iter().copied())?;
    let path = island_path(&set, &from, &to)?;
    let report = PathReport {
        start: path.start.members.clone(),
        red_counts: path.red_counts(&set),
        steps: path.steps.clone(),
    };
    if a.io.json {
        return print_json(&report);
    }
    for (i, island) in path.islands(&set).iter().enumerate() {
        let swap = if i == 0 {
            String::new()
        } else {
            let (o, n) = path.steps[i - 1];
            format!("  (-{o} +{n})")
        };
        println!("{i:>3}: {}{swap}", describe(island));
    }
    Ok(())
}

fn cmd_ceder(a: InputArgs) -> CliResult {
    let set = read_points(&a.input)?;
    let sp = ceder_point(&set)?;
    if a.json {
        return print_json(&sp);
    }
    println!("center: {}", sp.center);
    for d in &sp.directions {
        println!("line direction: ({}, {})", d[0], d[1]);
    }
    println!(
        "region counts: {:?} (each at least {})",
        sp.counts,
        balanced_islands::ceder::required_per_region(set.n())
    );
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let set = generate(a.n, &a.red_fraction, a.dist, a.seed)?;
    let header = format!(
        "generated: n={} red-fraction={} dist={} seed={}\nred={} blue={}",
        a.n,
        a.red_fraction,
        a.dist,
        a.seed,
        set.r(),
        set.b()
    );
    print!("{}", write_points(&set, Some(&header)));
    Ok(())
}

fn cmd_render(a: RenderArgs) -> CliResult {
    let set = read_points(&a.input)?;
    let text = fs::read_to_string(&a.record)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.record.display())))?;
    let record: ResultRecord = serde_json::from_str(&text)?;
    record
        .verify(&set)
        .map_err(|e| Failure::Input(format!("record does not match the point file: {e}")))?;
    let island = Island::from_ids(&set, record.island.iter().copied())?;
    let svg = render_svg(&set, &island, record.certificate.as_ref());
    match a.output {
        Some(p) => fs::write(p, svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}

fn cmd_validate(a: InputArgs) -> CliResult {
    let set = read_points(&a.input)?;
    if a.json {
        return print_json(
            &serde_json::json!({ "valid": true, "n": set.n(), "r": set.r(), "b": set.b() }),
        );
    }
    println!("valid: n={} r={} b={}", set.n(), set.r(), set.b());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Find(a) => cmd_find(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Path(a) => cmd_path(a),
        Command::Ceder(a) => cmd_ceder(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => bench::run(a),
        Command::Render(a) => cmd_render(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Bug(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
