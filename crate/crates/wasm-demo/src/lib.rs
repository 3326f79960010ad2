//! Browser bindings: every function takes and returns plain strings so the
//! page needs no glue beyond `wasm-bindgen`.

use balanced_islands::balanced::{balanced_island, case_targets};
use balanced_islands::ceder::ceder_point;
use balanced_islands::generate::{generate, Distribution};
use balanced_islands::geom::parse_rational;
use balanced_islands::pointfile::{parse_points, write_points};
use balanced_islands::record::{Query, ResultRecord};
use balanced_islands::render::{render_six_partition, render_svg};
use balanced_islands::{Algorithm, Case, Island, Rational};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest input accepted by the browser demo for the quartic wedge search.
pub const WEDGE_LIMIT: usize = 40;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("`{s}` is not a rational number like 1/3"))
}

/// Point file text for a seeded random set.
pub fn generate_text(
    n: usize,
    red_fraction: &str,
    dist: &str,
    seed: u32,
) -> Result<String, String> {
    let dist: Distribution = dist.parse().map_err(|e| format!("{e}"))?;
    let set =
        generate(n, &rational(red_fraction)?, dist, seed as u64).map_err(|e| e.to_string())?;
    Ok(write_points(
        &set,
        Some(&format!("{dist} n={n} seed={seed}")),
    ))
}

/// JSON `{ "record": ResultRecord, "svg": string }` for a balanced island.
pub fn find_json(points: &str, alpha: &str, case: &str, algorithm: &str) -> Result<String, String> {
    let set = parse_points(points).map_err(|e| e.to_string())?;
    let alpha = rational(alpha)?;
    let case: Case = case.parse().map_err(|e| format!("{e}"))?;
    let algorithm: Algorithm = algorithm.parse().map_err(|e| format!("{e}"))?;
    if matches!(algorithm, Algorithm::Wedge) && set.n() > WEDGE_LIMIT {
        return Err(format!(
            "the wedge search is limited to {WEDGE_LIMIT} points in the browser"
        ));
    }
    let t = case_targets(&set, &alpha, case).map_err(|e| e.to_string())?;
    let sol = balanced_island(&set, &alpha, case, algorithm).map_err(|e| e.to_string())?;
    let record = ResultRecord::new(
        Query::new(
            t,
            (case == Case::One).then_some(&alpha),
            Some(case),
            algorithm,
        ),
        Some(sol),
        None,
    );
    record.verify(&set).map_err(|e| e.to_string())?;
    let island =
        Island::from_ids(&set, record.island.iter().copied()).map_err(|e| e.to_string())?;
    let svg = render_svg(&set, &island, record.certificate.as_ref());
    Ok(json!({ "record": record, "svg": svg }).to_string())
}

/// JSON `{ "partition": SixPartition, "svg": string }`.
pub fn ceder_json(points: &str) -> Result<String, String> {
    let set = parse_points(points).map_err(|e| e.to_string())?;
    let sp = ceder_point(&set).map_err(|e| e.to_string())?;
    let svg = render_six_partition(&set, &sp);
    Ok(json!({ "partition": sp, "svg": svg }).to_string())
}

/// SVG of the points alone.
pub fn points_svg(points: &str) -> Result<String, String> {
    let set = parse_points(points).map_err(|e| e.to_string())?;
    Ok(render_svg(&set, &Island::empty(), None))
}

#[wasm_bindgen(js_name = generate)]
pub fn js_generate(n: usize, red_fraction: &str, dist: &str, seed: u32) -> Result<String, JsError> {
    generate_text(n, red_fraction, dist, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = findIsland)]
pub fn js_find_island(
    points: &str,
    alpha: &str,
    case: &str,
    algorithm: &str,
) -> Result<String, JsError> {
    find_json(points, alpha, case, algorithm).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = ceder)]
pub fn js_ceder(points: &str) -> Result<String, JsError> {
    ceder_json(points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = pointsSvg)]
pub fn js_points_svg(points: &str) -> Result<String, JsError> {
    points_svg(points).map_err(|e| JsError::new(&e))
}
