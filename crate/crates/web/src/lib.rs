//! Browser bindings for collapse-kit: the exclusion curve of a preset, the
//! squeezing of the differential mode over time, and the coloured-noise
//! steady state as a function of the cutoff.
//!
//! Results cross the boundary as flat `Float64Array`s of interleaved pairs.
//! The computations live in [`demo`] so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// Names of the built-in presets.
#[wasm_bindgen]
pub fn preset_names() -> Vec<String> {
    demo::preset_names()
}

/// `[r₀, λ₀, r₁, λ₁, …]` over `n` log-spaced collapse lengths in [lo, hi].
/// `witness` is `"squeeze"` or `"entangle"`.
#[wasm_bindgen]
pub fn exclusion_curve(preset: &str, witness: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    demo::exclusion_curve(preset, witness, lo, hi, n).map_err(js)
}

/// `[t₀, ν₀, t₁, ν₁, …]`: smallest eigenvalue of the differential-mode
/// covariance divided by N/2, from the thermal state up to `t_end`.
#[wasm_bindgen]
pub fn squeezing_trace(preset: &str, lambda: f64, r_csl: f64, t_end: f64, n: usize) -> Result<Vec<f64>, JsError> {
    demo::squeezing_trace(preset, lambda, r_csl, t_end, n).map_err(js)
}

/// `[Ω₀, s₀, Ω₁, s₁, …]`: steady σ_ZZ/(N/2) of the differential mode under
/// coloured CSL noise, over `n` log-spaced cutoffs in [lo, hi] rad/s.
#[wasm_bindgen]
pub fn coloured_scan(preset: &str, lambda: f64, r_csl: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    demo::coloured_scan(preset, lambda, r_csl, lo, hi, n).map_err(js)
}

/// σ_ZZ/(N/2) for the same collapse parameters with white noise, the
/// Ω → ∞ limit of [`coloured_scan`].
#[wasm_bindgen]
pub fn white_steady_ratio(preset: &str, lambda: f64, r_csl: f64) -> Result<f64, JsError> {
    demo::white_steady_ratio(preset, lambda, r_csl).map_err(js)
}
