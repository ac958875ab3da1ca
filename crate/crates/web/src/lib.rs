//! Browser bindings for the `www/` demo page.
//!
//! Each export returns a JSON string; errors surface as thrown JS strings.
//! The `*_json` functions hold the logic and are usable from native code.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use lindqbit::scenario::{
    concurrence_report_mixed, concurrence_report_pure, csv_string, figure1, figure1_chart, figure2, figure2_chart,
    parse_state_input, Figure1Params, Figure2Params, StateInput, TrajectoryRecord,
};
use lindqbit::state::DEFAULT_TOL;

/// Largest grid the page may request.
pub const MAX_POINTS: usize = 5000;

fn check_points(points: usize) -> Result<(), String> {
    if points > MAX_POINTS {
        return Err(format!("points must be at most {MAX_POINTS}, got {points}"));
    }
    Ok(())
}

fn trajectory_json(records: &[TrajectoryRecord], svg: String, warnings: Vec<String>) -> Value {
    json!({
        "svg": svg,
        "csv": csv_string(records),
        "warnings": warnings,
        "t": records.iter().map(|r| r.t).collect::<Vec<_>>(),
        "concurrence": records.iter().map(|r| r.concurrence).collect::<Vec<_>>(),
    })
}

pub fn figure1_json(y: f64, t_max: f64, points: usize) -> Result<String, String> {
    check_points(points)?;
    let p = Figure1Params { y, t_max, points, ..Default::default() };
    let records = figure1(&p).map_err(|e| e.to_string())?;
    let svg = figure1_chart(&p, &records).to_svg();
    Ok(trajectory_json(&records, svg, Vec::new()).to_string())
}

/// `other_gamma` that is NaN means "same as gamma14".
pub fn figure2_json(gamma14: f64, other_gamma: f64, t_max: f64, points: usize) -> Result<String, String> {
    check_points(points)?;
    let other_gamma = (!other_gamma.is_nan()).then_some(other_gamma);
    let p = Figure2Params { gamma14, other_gamma, t_max, points };
    let out = figure2(&p).map_err(|e| e.to_string())?;
    let svg = figure2_chart(&p, &out.records).to_svg();
    Ok(trajectory_json(&out.records, svg, out.warnings).to_string())
}

/// Accepts 4 amplitudes (real or `[re, im]`) or a 4×4 matrix of `[re, im]`.
pub fn concurrence_json(state: &str, normalize: bool) -> Result<String, String> {
    let input = parse_state_input(state, normalize, DEFAULT_TOL).map_err(|e| format!("invalid state: {e}"))?;
    let (kind, report) = match input {
        StateInput::Pure(v) => ("pure", concurrence_report_pure(&v)),
        StateInput::Mixed(rho) => ("mixed", concurrence_report_mixed(&rho)),
    };
    let r = report.map_err(|e| e.to_string())?;
    Ok(json!({
        "kind": kind,
        "concurrence": r.concurrence,
        "lambdas": r.lambdas,
        "eof": r.eof,
        "separable": r.separable,
    })
    .to_string())
}

#[wasm_bindgen(js_name = figure1)]
pub fn figure1_js(y: f64, t_max: f64, points: usize) -> Result<String, JsValue> {
    figure1_json(y, t_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = figure2)]
pub fn figure2_js(gamma14: f64, other_gamma: f64, t_max: f64, points: usize) -> Result<String, JsValue> {
    figure2_json(gamma14, other_gamma, t_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = concurrence)]
pub fn concurrence_js(state: &str, normalize: bool) -> Result<String, JsValue> {
    concurrence_json(state, normalize).map_err(|e| JsValue::from_str(&e))
}
