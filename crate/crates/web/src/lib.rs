//! wasm-bindgen bindings behind `index.html`. Every entry point takes and
//! returns JSON text; the `*_json` functions are the plain Rust versions.

use dualent::cli::{parse_spec_str, Built};
use dualent::crystal::crystal_entropy;
use dualent::group::{AbelianAutomorphism, FgAbelianGroup, IntMatrix};
use dualent::peters::{growth_rate_estimate, peters_growth, unit_cube_corners};
use dualent::spectral::eigen_entropy;
use serde_json::json;
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-12;
pub const MAX_TERMS: usize = 14;
pub const BROWSER_CAP: usize = 400_000;

fn parse_matrix(text: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text).map_err(|e| format!("matrix: {e}"))?;
    let m = IntMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
    if !m.is_square() || m.rows() == 0 {
        return Err("matrix must be square and nonempty".into());
    }
    Ok(m)
}

pub fn matrix_entropy_json(matrix: &str) -> Result<String, String> {
    let m = parse_matrix(matrix)?;
    let est = eigen_entropy(&m, TOL).map_err(|e| e.to_string())?;
    serde_json::to_string(&est).map_err(|e| e.to_string())
}

/// Sumset growth of the unit-cube corners under `matrix`, next to the
/// spectral value.
pub fn growth_series_json(matrix: &str, n: usize) -> Result<String, String> {
    let m = parse_matrix(matrix)?;
    let n = n.clamp(1, MAX_TERMS);
    let group = FgAbelianGroup::free(m.rows());
    let gamma = AbelianAutomorphism::from_lattice(group.clone(), m.clone()).map_err(|e| e.to_string())?;
    let series = peters_growth(&gamma, &unit_cube_corners(&group), n, BROWSER_CAP).map_err(|e| e.to_string())?;
    let estimate = growth_rate_estimate(&series).map_err(|e| e.to_string())?;
    let spectral = eigen_entropy(&m, TOL).map_err(|e| e.to_string())?;
    Ok(json!({
        "series": series,
        "log_rates": series.log_rates(),
        "estimate": estimate.value,
        "spectral": spectral.value,
    })
    .to_string())
}

/// Entropy of the automorphism in an experiment document, abelian or crystal.
pub fn document_entropy_json(document: &str) -> Result<String, String> {
    let doc = parse_spec_str(document).map_err(|e| e.to_string())?;
    let est = match doc.build().map_err(|e| e.to_string())? {
        Built::Abelian { auto: Some(auto), .. } => eigen_entropy(auto.lattice_part(), TOL),
        Built::Crystal { group, auto: Some(auto), .. } => crystal_entropy(&group, &auto, TOL),
        _ => return Err("the document has no \"auto\" block".into()),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({ "description": doc.description, "estimate": est }).to_string())
}

#[wasm_bindgen]
pub fn matrix_entropy(matrix: &str) -> Result<String, JsValue> {
    matrix_entropy_json(matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn growth_series(matrix: &str, n: usize) -> Result<String, JsValue> {
    growth_series_json(matrix, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn document_entropy(document: &str) -> Result<String, JsValue> {
    document_entropy_json(document).map_err(|e| JsValue::from_str(&e))
}
