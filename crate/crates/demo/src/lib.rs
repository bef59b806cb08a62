//! WebAssembly bindings for the static page in `www/`. Every export takes
//! plain numbers or strings and returns a JSON string; errors come back as
//! JavaScript exceptions carrying the message.

use harmjet::geometry::{default_angles, default_radii, residual_decay};
use harmjet::io::{parse_jet_str, VerdictDocument};
use harmjet::sampling::{random_graded, rng};
use harmjet::{build_theta, obstruct, run, s_of_m, Jet, StarJet};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_M: usize = 12;

fn check_m(m: usize, lo: usize) -> Result<(), String> {
    if !(lo..=MAX_M).contains(&m) {
        return Err(format!("m must be between {lo} and {MAX_M} here"));
    }
    Ok(())
}

pub fn theta_summary(m: usize, k: usize) -> Result<String, String> {
    check_m(m, 2)?;
    if !(1..=2 * MAX_M).contains(&k) {
        return Err(format!("k must be between 1 and {}", 2 * MAX_M));
    }
    let op = build_theta(m, k).map_err(|e| e.to_string())?;
    let report = op.rank_report();
    Ok(json!({
        "m": m,
        "k": k,
        "domain_dim": 2 * (k + 1),
        "target_degree": op.target_degree(),
        "target_dim": op.target_degree() + 1,
        "rank": report.rank,
        "injective": report.injective,
        "surjective": report.surjective,
        "irr_inclusion": op.irr_inclusion().iter().map(|(q, inside)| json!({"q": q, "in_image": inside})).collect::<Vec<_>>(),
        "cokernel": op.cokernel_directions().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
    .to_string())
}

pub fn classify(document: &str) -> Result<String, String> {
    let jet = parse_jet_str(document).map_err(|e| e.to_string())?;
    check_m(jet.m(), 2)?;
    let report = obstruct(&jet).map_err(|e| e.to_string())?;
    let doc = VerdictDocument::from_report(&report, jet.order());
    let mut value = serde_json::to_value(&doc).map_err(|e| e.to_string())?;
    value["pretty"] = report
        .residuals
        .iter()
        .map(|(k, r)| json!({"k": k, "residual": r.to_string()}))
        .collect();
    Ok(value.to_string())
}

/// Mean |Δ_g f| per radius for a random jet that is flat through `s(m)`,
/// with the flat metric and with the solved metric of order `m - 1`.
pub fn decay(m: usize, seed: u64) -> Result<String, String> {
    check_m(m, 2)?;
    let k = m - 1;
    let s = s_of_m(m);
    let tail = random_graded(&mut rng(seed), s + 1, (k + m).max(s + 1));
    let jet = Jet::truncated(m, tail, (k + m).max(s + 1)).map_err(|e| e.to_string())?;
    let out = run(&jet, k).map_err(|e| e.to_string())?;
    let radii = default_radii();
    let angles = default_angles(32);
    let mean = |values: &[Vec<f64>]| -> Vec<f64> {
        values
            .iter()
            .map(|row| row.iter().sum::<f64>() / row.len() as f64)
            .collect()
    };
    let flat =
        residual_decay(&StarJet::flat(), &jet, &radii, &angles).map_err(|e| e.to_string())?;
    let solved = residual_decay(&out.metric, &jet, &radii, &angles).map_err(|e| e.to_string())?;
    Ok(json!({
        "m": m,
        "order": k,
        "radii": radii,
        "flat": {"mean": mean(&flat.values), "slope": flat.fitted_slope},
        "solved": {"mean": mean(&solved.values), "slope": solved.fitted_slope},
        "expected_slope": k + m - 1,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn theta_report(m: usize, k: usize) -> Result<String, JsValue> {
    theta_summary(m, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify_jet(document: &str) -> Result<String, JsValue> {
    classify(document).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decay_curve(m: usize, seed: u32) -> Result<String, JsValue> {
    decay(m, seed as u64).map_err(|e| JsValue::from_str(&e))
}
