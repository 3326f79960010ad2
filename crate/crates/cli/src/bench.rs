//! Timing harness: median wall times per algorithm and size.

use std::time::{Duration, Instant};

use balanced_islands::balanced::{
    case_targets, fast_from_fan, wedge_fan, FastOutcome, FastPrecondition,
};
use balanced_islands::ceder::ceder_point;
use balanced_islands::generate::{generate, Distribution};
use balanced_islands::strip::strip_search;
use balanced_islands::wedge::wedge_search_with_stats;
use balanced_islands::{Case, Rational};
use clap::Args;
use serde::Serialize;

use crate::{rational, CliResult, Failure};

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated point counts.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Comma-separated subset of strip, wedge, fast.
    #[arg(long, value_delimiter = ',', default_value = "strip")]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction used for the case-1 targets of wedge and fast.
    #[arg(long, default_value = "1/8", value_parser = rational)]
    alpha: Rational,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize, Default)]
struct Stages {
    ceder_ms: f64,
    fan_ms: f64,
    path_ms: f64,
}

#[derive(Serialize)]
struct Row {
    algorithm: String,
    n: usize,
    trials: usize,
    median_ms: f64,
    /// Arrangement cells, for the wedge search.
    cells: Option<usize>,
    /// Median stage times, for the fast algorithm.
    stages: Option<Stages>,
    /// Median time relative to the previous size of the same algorithm.
    ratio: Option<f64>,
    note: Option<String>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

fn bench_one(alg: &str, n: usize, args: &BenchArgs) -> Result<Row, Failure> {
    let half = Rational::new(1.into(), 2.into());
    let mut times = Vec::new();
    let mut cells = None;
    let (mut ceder_t, mut fan_t, mut path_t) = (Vec::new(), Vec::new(), Vec::new());
    let mut note = None;
    for trial in 0..args.trials.max(1) {
        let set = generate(n, &half, Distribution::Uniform, args.seed + trial as u64)?;
        match alg {
            "strip" => {
                let t = case_targets(&set, &half, Case::Two)?;
                let start = Instant::now();
                strip_search(&set, t)?;
                times.push(ms(start.elapsed()));
            }
            "wedge" => {
                let t = case_targets(&set, &args.alpha, Case::One)?;
                let start = Instant::now();
                let (_, stats) = wedge_search_with_stats(&set, t)?;
                times.push(ms(start.elapsed()));
                cells = Some(stats.cells);
            }
            "fast" => {
                let t = case_targets(&set, &args.alpha, Case::One)?;
                if !FastPrecondition::evaluate(&set, t).satisfied || t.k() == 0 {
                    note = Some("fast precondition fails or k = 0".to_string());
                    break;
                }
                let start = Instant::now();
                let sp = ceder_point(&set)?;
                let c = start.elapsed();
                let fan = wedge_fan(&sp.center, &set, t.k())?;
                let f = start.elapsed();
                let out = fast_from_fan(&set, t, &fan)?;
                let p = start.elapsed();
                if let FastOutcome::Fallback(reason) = out {
                    note = Some(format!("fallback: {reason}"));
                }
                ceder_t.push(ms(c));
                fan_t.push(ms(f - c));
                path_t.push(ms(p - f));
                times.push(ms(p));
            }
            other => return Err(Failure::Input(format!("unknown bench algorithm `{other}`"))),
        }
    }
    let stages = (alg == "fast" && !times.is_empty()).then(|| Stages {
        ceder_ms: median(ceder_t),
        fan_ms: median(fan_t),
        path_ms: median(path_t),
    });
    Ok(Row {
        algorithm: alg.to_string(),
        n,
        trials: times.len(),
        median_ms: median(times),
        cells,
        stages,
        ratio: None,
        note,
    })
}

pub fn run(args: BenchArgs) -> CliResult {
    let mut rows: Vec<Row> = Vec::new();
    for alg in &args.algorithms {
        let mut prev: Option<f64> = None;
        for &n in &args.sizes {
            let mut row = bench_one(alg, n, &args)?;
            // The fast ratio excludes the six-partition stage.
            let t = match &row.stages {
                Some(s) => s.fan_ms + s.path_ms,
                None => row.median_ms,
            };
            row.ratio = prev.map(|p| t / p);
            prev = Some(t);
            rows.push(row);
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(());
    }
    println!(
        "{:<6} {:>6} {:>6} {:>12} {:>8}  details",
        "alg", "n", "trials", "median ms", "ratio"
    );
    for r in &rows {
        let mut details = Vec::new();
        if let Some(c) = r.cells {
            details.push(format!("cells={c}"));
        }
        if let Some(s) = &r.stages {
            details.push(format!(
                "ceder={:.2} fan={:.2} path={:.2}",
                s.ceder_ms, s.fan_ms, s.path_ms
            ));
        }
        if let Some(n) = &r.note {
            details.push(n.clone());
        }
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
        println!(
            "{:<6} {:>6} {:>6} {:>12.3} {:>8}  {}",
            r.algorithm,
            r.n,
            r.trials,
            r.median_ms,
            ratio,
            details.join(" ")
        );
    }
    Ok(())
}
