//! Acceptance criteria 1-10, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use balanced_islands::arrangement::LineArrangement;
use balanced_islands::balanced::{
    balanced_island, case_targets, fast_attempt, fast_from_fan, wedge_fan, Algorithm, Case,
    FastOutcome, FastPrecondition, WedgeFan,
};
use balanced_islands::ceder::{ceder_point, verify_six_partition};
use balanced_islands::generate::{generate, Distribution};
use balanced_islands::island_path::island_path;
use balanced_islands::oracle::{oracle_enumerate, oracle_find};
use balanced_islands::strip::{initial_order, strip_search, strip_to_island, sweep};
use balanced_islands::wedge::{
    exhaustive_cell_scan, init_state, walk_cells, wedge_search, wedge_search_with_stats,
};
use balanced_islands::{is_island, ColoredPointSet, Island, Rational, TargetCounts};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: u64 = 500;

fn frac(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Seeded general-position sets with 2 <= n <= 12 and at least one point of
/// each color.
fn corpus_set(seed: u64) -> ColoredPointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xacce);
    let n = rng.gen_range(2..=12usize);
    let r = rng.gen_range(1..n);
    let dist = if seed % 5 == 4 {
        Distribution::Clusters
    } else {
        Distribution::Uniform
    };
    generate(n, &frac(r as i64, n as i64), dist, seed).expect("generator")
}

fn corpus() -> Vec<ColoredPointSet> {
    (0..CORPUS).map(corpus_set).collect()
}

fn alphas() -> Vec<Rational> {
    (0..=6).map(|j| frac(j, 12)).collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn exact_island(set: &ColoredPointSet, island: &Island, t: TargetCounts) -> bool {
    island.counts() == t && is_island(set, &island.members).unwrap_or(false)
}

fn criterion_1(sets: &[ColoredPointSet]) -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut runs = 0;
    for set in sets {
        for alpha in alphas() {
            let t = case_targets(set, &alpha, Case::One).unwrap();
            for alg in [Algorithm::Wedge, Algorithm::Auto] {
                runs += 1;
                match balanced_island(set, &alpha, Case::One, alg) {
                    Ok(sol) if exact_island(set, &sol.island, t) && sol.verify(set) => {}
                    other => {
                        failures += 1;
                        eprintln!(
                            "criterion 1: {alg} alpha={alpha} n={} -> {other:?}",
                            set.n()
                        );
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{runs} runs, {failures} failures, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(sets: &[ColoredPointSet]) -> Outcome {
    let mut failures = 0;
    for set in sets {
        let t = case_targets(set, &frac(0, 1), Case::Two).unwrap();
        match strip_search(set, t) {
            Ok(Some(s)) if exact_island(set, &strip_to_island(set, &s), t) => {}
            other => {
                failures += 1;
                eprintln!("criterion 2: n={} t={t:?} -> {other:?}", set.n());
            }
        }
    }
    outcome(
        failures == 0,
        format!("{} sets, {failures} failures", sets.len()),
    )
}

fn criterion_3(sets: &[ColoredPointSet]) -> Outcome {
    let mut failures = 0;
    let mut not_found = 0;
    let mut checked = 0;
    for set in sets.iter().filter(|s| s.n() <= 10) {
        let arr = LineArrangement::build(set).unwrap();
        for alpha in alphas() {
            let t = case_targets(set, &alpha, Case::One).unwrap();
            checked += 1;
            if oracle_find(set, t).unwrap().is_none() {
                failures += 1;
                eprintln!("criterion 3: oracle finds nothing for {t:?}");
            }
            match wedge_search(set, t).unwrap() {
                Some(w) => {
                    let island = balanced_islands::wedge::wedge_to_island(set, &w);
                    if !w.is_convex(set) || !exact_island(set, &island, t) {
                        failures += 1;
                    }
                }
                None => {
                    not_found += 1;
                    if t.k() > 0 && exhaustive_cell_scan(set, &arr, t).unwrap().is_some() {
                        failures += 1;
                        eprintln!(
                            "criterion 3: wedge NotFound contradicted by cell scan for {t:?}"
                        );
                    }
                }
            }
            match strip_search(set, t).unwrap() {
                Some(s) if !exact_island(set, &strip_to_island(set, &s), t) => failures += 1,
                _ => {}
            }
        }
    }
    // Arbitrary targets exercise the NotFound branch; oracle existence must
    // dominate wedge existence.
    for set in sets.iter().filter(|s| s.n() <= 10).take(150) {
        let arr = LineArrangement::build(set).unwrap();
        for rt in 0..=set.r() {
            for bt in 0..=set.b() {
                let t = TargetCounts::new(rt, bt);
                if t.k() == 0 {
                    continue;
                }
                checked += 1;
                let wedge = wedge_search(set, t).unwrap();
                let scan = exhaustive_cell_scan(set, &arr, t).unwrap();
                let oracle = oracle_find(set, t).unwrap();
                if wedge.is_none() {
                    not_found += 1;
                }
                if wedge.is_some() != scan.is_some() || (wedge.is_some() && oracle.is_none()) {
                    failures += 1;
                    eprintln!("criterion 3: disagreement on {t:?}");
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} queries, {not_found} wedge NotFound confirmed by cell scan, {failures} failures"),
    )
}

fn criterion_4() -> Outcome {
    let mut mismatches = 0;
    let mut wedge_steps = 0usize;
    let mut strip_steps = 0usize;
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=8usize);
        let set = generate(n, &frac(1, 2), Distribution::Uniform, 1000 + seed).unwrap();
        let arr = LineArrangement::build(&set).unwrap();
        for k in 1..=n {
            walk_cells(&set, &arr, k, None, |face, st| {
                wedge_steps += 1;
                let scratch = init_state(&arr.sample(face), &set, k).unwrap();
                if scratch.canonical() != st.canonical() {
                    mismatches += 1;
                }
                ControlFlow::Continue(())
            })
            .unwrap();
        }
        let n = rng.gen_range(3..=32usize);
        let set = generate(n, &frac(1, 3), Distribution::Uniform, 2000 + seed).unwrap();
        for k in [1, n / 2, n] {
            let k = k.max(1);
            sweep(&set, k, |step| {
                strip_steps += 1;
                if *step.order != initial_order(&set, &step.direction, k) {
                    mismatches += 1;
                }
                true
            })
            .unwrap();
        }
    }
    outcome(
        mismatches == 0,
        format!("60 seeds, {wedge_steps} wedge cells, {strip_steps} sweep steps, {mismatches} mismatches"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut pairs = 0;
    let mut failures = 0;
    let mut seed = 0u64;
    while pairs < 240 {
        seed += 1;
        let set = corpus_set(10_000 + seed);
        let n = set.n();
        let k = rng.gen_range(1..=n);
        let mut islands = Vec::new();
        for rt in 0..=k.min(set.r()) {
            if k - rt <= set.b() {
                islands.extend(oracle_enumerate(&set, TargetCounts::new(rt, k - rt)).unwrap());
            }
        }
        for _ in 0..4 {
            let a = &islands[rng.gen_range(0..islands.len())];
            let b = &islands[rng.gen_range(0..islands.len())];
            pairs += 1;
            let path = island_path(&set, a, b).unwrap();
            let seq = path.islands(&set);
            let ok = seq.len() <= 3 * n + 3
                && seq.first() == Some(a)
                && seq.last() == Some(b)
                && seq.iter().all(|i| is_island(&set, &i.members).unwrap())
                && seq.windows(2).all(|w| {
                    let d = w[0].members.iter().filter(|m| !w[1].contains(**m)).count()
                        + w[1].members.iter().filter(|m| !w[0].contains(**m)).count();
                    d == 2
                });
            if !ok {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{pairs} pairs, {failures} failures"))
}

fn criterion_6() -> Outcome {
    let mut failures = 0;
    let mut runs = 0;
    let sizes = [1, 2, 5, 6, 7, 12, 13, 25, 40, 60, 90, 120, 160, 200];
    for (i, &n) in sizes.iter().enumerate() {
        for seed in 0..4u64 {
            let dist = if seed == 3 {
                Distribution::Clusters
            } else {
                Distribution::Uniform
            };
            let set = generate(n, &frac(1, 2), dist, 300 + 10 * i as u64 + seed).unwrap();
            runs += 1;
            let ok = match ceder_point(&set) {
                Ok(sp) => verify_six_partition(&set, &sp).is_some_and(|c| {
                    c.iter().all(|&x| 6 * x + 6 >= n) && c.iter().sum::<usize>() == n
                }),
                Err(e) => {
                    eprintln!("criterion 6: n={n} seed={seed}: {e}");
                    false
                }
            };
            failures += !ok as usize;
        }
    }
    outcome(
        failures == 0,
        format!("{runs} sets up to n=200, {failures} failures"),
    )
}

fn criterion_7() -> Outcome {
    let mut failures = 0;
    let mut checks = 0;
    for n in [12usize, 24, 48, 96] {
        for seed in 0..20u64 {
            let set = generate(
                n,
                &frac(1, 2),
                Distribution::Uniform,
                7000 + 97 * n as u64 + seed,
            )
            .unwrap();
            let sp = ceder_point(&set).unwrap();
            for k in 1..=n {
                let Some(bound) = WedgeFan::convex_lower_bound(n, k) else {
                    continue;
                };
                let fan = wedge_fan(&sp.center, &set, k).unwrap();
                checks += 1;
                if fan.convex_count() < bound || fan.weighted_sum(&set) != 0 {
                    failures += 1;
                    eprintln!(
                        "criterion 7: n={n} k={k}: {} convex < {bound}",
                        fan.convex_count()
                    );
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checks} (n, k, seed) fans, {failures} below bound"),
    )
}

fn criterion_8(sets: &[ColoredPointSet]) -> Outcome {
    let mut instances = 0;
    let mut fallbacks = 0;
    let mut mismatches = 0;
    for set in sets {
        for alpha in alphas() {
            let t = case_targets(set, &alpha, Case::One).unwrap();
            if !FastPrecondition::evaluate(set, t).satisfied {
                continue;
            }
            instances += 1;
            let exact = balanced_island(set, &alpha, Case::One, Algorithm::Wedge).unwrap();
            match fast_attempt(set, t) {
                Ok(FastOutcome::Found { island, .. }) => {
                    if island.counts() != exact.island.counts() || !exact_island(set, &island, t) {
                        mismatches += 1;
                    }
                }
                Ok(FastOutcome::Fallback(reason)) => {
                    fallbacks += 1;
                    eprintln!(
                        "criterion 8: fallback n={} r={} t={t:?}: {reason}",
                        set.n(),
                        set.r()
                    );
                }
                Err(e) => {
                    mismatches += 1;
                    eprintln!("criterion 8: error {e}");
                }
            }
        }
    }
    outcome(
        fallbacks == 0 && mismatches == 0,
        format!("{instances} instances, {fallbacks} fallbacks, {mismatches} mismatches"),
    )
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn time_strip(n: usize) -> Duration {
    let set = generate(n, &frac(1, 2), Distribution::Uniform, 4242 + n as u64).unwrap();
    // All reds and no blue: infeasible, so the sweep runs to completion.
    let t = TargetCounts::new(set.r(), 0);
    median(
        (0..5)
            .map(|_| {
                let start = Instant::now();
                assert!(strip_search(&set, t).unwrap().is_none());
                start.elapsed()
            })
            .collect(),
    )
}

fn time_fast_without_ceder(n: usize) -> Duration {
    let set = generate(n, &frac(1, 2), Distribution::Uniform, 9090 + n as u64).unwrap();
    let t = case_targets(&set, &frac(1, 8), Case::One).unwrap();
    assert!(FastPrecondition::evaluate(&set, t).satisfied);
    let center = ceder_point(&set).unwrap().center;
    median(
        (0..5)
            .map(|_| {
                let start = Instant::now();
                let fan = wedge_fan(&center, &set, t.k()).unwrap();
                let out = fast_from_fan(&set, t, &fan).unwrap();
                assert!(matches!(out, FastOutcome::Found { .. }));
                start.elapsed()
            })
            .collect(),
    )
}

fn criterion_9() -> Outcome {
    let (s200, s400) = (time_strip(200), time_strip(400));
    let strip_ratio = s400.as_secs_f64() / s200.as_secs_f64();

    let set = generate(60, &frac(1, 2), Distribution::Uniform, 60).unwrap();
    let start = Instant::now();
    let (found, stats) = wedge_search_with_stats(&set, TargetCounts::new(set.r(), 0)).unwrap();
    let wedge_time = start.elapsed();

    let (f2000, f4000) = (time_fast_without_ceder(2000), time_fast_without_ceder(4000));
    let fast_ratio = f4000.as_secs_f64() / f2000.as_secs_f64();

    let pass = strip_ratio <= 6.0
        && found.is_none()
        && wedge_time < Duration::from_secs(600)
        && fast_ratio <= 3.0;
    outcome(
        pass,
        format!(
            "strip t(400)/t(200) = {strip_ratio:.2} ({:.3}s/{:.3}s); wedge n=60 full walk {:.1}s over {} cells; fast without ceder t(4000)/t(2000) = {fast_ratio:.2}",
            s400.as_secs_f64(),
            s200.as_secs_f64(),
            wedge_time.as_secs_f64(),
            stats.cells
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut failures = 0;
    for seed in 0..5u64 {
        let set = generate(9, &frac(1, 2), Distribution::PolygonTrap, seed).unwrap();
        if (set.r(), set.b()) != (5, 4) {
            failures += 1;
            continue;
        }
        for blue in 0..4 {
            if oracle_find(&set, TargetCounts::new(4, blue))
                .unwrap()
                .is_some()
            {
                failures += 1;
                eprintln!("criterion 10: seed {seed} has an island with 4 red and {blue} blue");
            }
        }
        match balanced_island(&set, &frac(0, 1), Case::Two, Algorithm::Auto) {
            Ok(sol)
                if (sol.island.red, sol.island.blue) == (3, 3)
                    && sol.certificate.family() == "strip" => {}
            other => {
                failures += 1;
                eprintln!("criterion 10: case 2 -> {other:?}");
            }
        }
    }
    outcome(
        failures == 0,
        format!("5 pentagon traps, {failures} failures"),
    )
}

fn main() -> ExitCode {
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let sets = corpus();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(usize, &str, Check)> = vec![
        (1, "case-1 completeness", Box::new(|| criterion_1(&sets))),
        (2, "case-2 completeness", Box::new(|| criterion_2(&sets))),
        (3, "oracle agreement", Box::new(|| criterion_3(&sets))),
        (4, "incremental equals scratch", Box::new(criterion_4)),
        (5, "island-path invariants", Box::new(criterion_5)),
        (6, "six-partition certificate", Box::new(criterion_6)),
        (7, "convex-wedge count bound", Box::new(criterion_7)),
        (8, "fast-path equivalence", Box::new(|| criterion_8(&sets))),
        (9, "performance", Box::new(criterion_9)),
        (10, "pentagon trap", Box::new(criterion_10)),
    ];
    let mut all = true;
    for (id, name, run) in &criteria {
        if only.is_some_and(|o| o != *id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {id:>2} {:<4} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
