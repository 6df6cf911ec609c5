use orbitlab::bounds::{evaluate_bound, BoundParams, FormulaId};
use orbitlab::reports::{run, ProblemFile, ProblemKind, RunOptions};
use serde_json::Value;
use wasm_bindgen::prelude::*;

fn run_payload(kind: ProblemKind, payload: &str, n_max: u64) -> Result<String, String> {
    let payload: Value = serde_json::from_str(payload).map_err(|e| format!("invalid JSON: {e}"))?;
    let problem = ProblemFile::new(kind, payload);
    let opts = RunOptions { n_max: Some(n_max), ..RunOptions::default() };
    let report = run(&problem, &opts).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

pub fn orbit_report(payload: &str, n_max: u64) -> Result<String, String> {
    run_payload(ProblemKind::OrbitIntersect, payload, n_max)
}

pub fn lrs_report(payload: &str, n_max: u64) -> Result<String, String> {
    run_payload(ProblemKind::LrsZeros, payload, n_max)
}

/// `params` is a JSON object such as `{"k": 3, "r": 2}`.
pub fn bound_report(formula: &str, params: &str) -> Result<String, String> {
    let formula: FormulaId = formula.parse().map_err(|e: orbitlab::Error| e.to_string())?;
    let params: BoundParams = serde_json::from_str(params).map_err(|e| format!("invalid parameters: {e}"))?;
    let value = evaluate_bound(formula, &params).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&value).map_err(|e| e.to_string())
}

pub fn formula_list() -> String {
    let list: Vec<Value> = FormulaId::ALL
        .iter()
        .map(|f| serde_json::json!({"id": f.as_str(), "parameters": f.parameters()}))
        .collect();
    Value::Array(list).to_string()
}

#[wasm_bindgen]
pub fn orbit_intersect(payload: &str, n_max: u32) -> Result<String, JsValue> {
    orbit_report(payload, n_max.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lrs_zeros(payload: &str, n_max: u32) -> Result<String, JsValue> {
    lrs_report(payload, n_max.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bound_calc(formula: &str, params: &str) -> Result<String, JsValue> {
    bound_report(formula, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn formulas() -> String {
    formula_list()
}
