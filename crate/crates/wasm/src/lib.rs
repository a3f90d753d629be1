//! Browser bindings for the quasijoint demo page.
//!
//! Three operations back the static page in `index.html`: a witness run
//! with optional separability verdict, a threshold heatmap sweep, and a
//! finite-shot certification. All three take plain numbers and return a
//! JSON string (an object with an `error` field on invalid input), so the
//! page needs no framework and the logic stays testable on the host.

mod api;

use wasm_bindgen::prelude::wasm_bindgen;

/// Witness run for the state (sx, sy, sz). Pass `eta <= 0` for the default
/// strength rule; `with_separability` attaches the hidden-variable LP
/// verdict on a `rings` x `angles` disk grid.
#[wasm_bindgen]
pub fn witness_json(
    sx: f64,
    sy: f64,
    sz: f64,
    eta: f64,
    with_separability: bool,
    rings: u32,
    angles: u32,
) -> String {
    api::witness_json(sx, sy, sz, eta, with_separability, rings, angles)
}

/// Minimum quasi-entry over the (|s|, eta) grid for the threshold heatmap.
#[wasm_bindgen]
pub fn sweep_json(s_steps: u32, eta_steps: u32) -> String {
    api::sweep_json(s_steps, eta_steps)
}

/// Finite-shot certification; `eta <= 0` and `threshold <= 0` select the
/// defaults (strength rule and 5 sigma).
#[wasm_bindgen]
pub fn sample_json(
    sx: f64,
    sy: f64,
    sz: f64,
    eta: f64,
    shots: u32,
    seed: u32,
    threshold: f64,
) -> String {
    api::sample_json(sx, sy, sz, eta, shots, seed, threshold)
}
