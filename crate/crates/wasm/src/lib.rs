//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; errors surface as JS exceptions
//! carrying the message.

use bec_core::exact::{condensate_fraction, threshold_temperature};
use bec_core::semiclassical::{lda_condensate_fraction_limit, tc0, tc_first_order};
use bec_core::sweep::{linear_grid, DETECTION_WINDOW, THRESHOLD_FRACTIONS};
use bec_core::{check_validity, BecError, Shape, TrapSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn trap_from(shape: &str, s: f64) -> Result<TrapSpec, BecError> {
    let shape: Shape = shape.parse()?;
    let s = if shape == Shape::Isotropic { 1.0 } else { s };
    TrapSpec::new(shape, s)
}

/// Condensate fraction on `points` values of `T/Tc0` in `[lo, hi]`.
pub fn fraction_curve_json(
    shape: &str,
    s: f64,
    n_atoms: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<String, BecError> {
    let trap = trap_from(shape, s)?;
    let scale = tc0(&trap, n_atoms)?;
    let grid = linear_grid(lo, hi, points.max(2));
    let f0 = grid
        .iter()
        .map(|&r| condensate_fraction(&trap, n_atoms, r * scale))
        .collect::<Result<Vec<_>, _>>()?;
    let lda: Vec<f64> = grid.iter().map(|&r| lda_condensate_fraction_limit(r)).collect();
    let fo = tc_first_order(&trap, n_atoms)?;
    Ok(json!({
        "t_over_tc0": grid,
        "f0": f0,
        "lda_limit": lda,
        "first_order_ratio": fo.t_c_first_order / fo.t_c0,
        "window": [DETECTION_WINDOW.0, DETECTION_WINDOW.1],
        "tc0": scale,
    })
    .to_string())
}

/// `T_{0.1%}`, `T_{0.5%}`, `T_{1%}` and the first-order `Tc`, in reduced
/// units and rescaled by `Tc0`.
pub fn thresholds_json(shape: &str, s: f64, n_atoms: f64) -> Result<String, BecError> {
    let trap = trap_from(shape, s)?;
    let fo = tc_first_order(&trap, n_atoms)?;
    let mut rows = Vec::new();
    for x in THRESHOLD_FRACTIONS {
        let t = threshold_temperature(&trap, n_atoms, x)?.t_threshold;
        rows.push(json!({ "fraction": x, "t": t, "ratio": t / fo.t_c0 }));
    }
    Ok(json!({
        "tc0": fo.t_c0,
        "first_order": fo.t_c_first_order,
        "first_order_ratio": fo.t_c_first_order / fo.t_c0,
        "thresholds": rows,
    })
    .to_string())
}

pub fn validity_json(shape: &str, s: f64, n_atoms: f64, threshold: f64) -> Result<String, BecError> {
    let trap = trap_from(shape, s)?;
    Ok(serde_json::to_string(&check_validity(&trap, n_atoms, threshold)?).expect("serializable"))
}

fn to_js(err: BecError) -> JsValue {
    JsValue::from_str(&err.to_string())
}

#[wasm_bindgen]
pub fn fraction_curve(
    shape: &str,
    s: f64,
    n_atoms: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<String, JsValue> {
    fraction_curve_json(shape, s, n_atoms, lo, hi, points).map_err(to_js)
}

#[wasm_bindgen]
pub fn thresholds(shape: &str, s: f64, n_atoms: f64) -> Result<String, JsValue> {
    thresholds_json(shape, s, n_atoms).map_err(to_js)
}

#[wasm_bindgen]
pub fn validity(shape: &str, s: f64, n_atoms: f64, threshold: f64) -> Result<String, JsValue> {
    validity_json(shape, s, n_atoms, threshold).map_err(to_js)
}
