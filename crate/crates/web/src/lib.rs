//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`. The plain `*_points` functions
//! hold the logic so they can be tested natively.

use sil_core::agent::{optimal_effort, utility};
use sil_core::manipulation::{manipulation_advantage, manipulation_region};
use sil_core::policy::{optimal_threshold, welfare_grid};
use sil_core::{Density, ManipulationSetting, Scenario};
use wasm_bindgen::prelude::*;

fn grid(steps: u32) -> Result<Vec<f64>, String> {
    if steps < 2 {
        return Err("need at least 2 steps".into());
    }
    Ok((0..=steps).map(|i| i as f64 / steps as f64).collect())
}

/// `[k*, U*, U(k_0), ..., U(k_steps)]` with `k_i = i / steps`.
pub fn utility_points(theta: f64, r: f64, x0: f64, steps: u32) -> Result<Vec<f64>, String> {
    let sc = Scenario::new(theta, r).map_err(|e| e.to_string())?;
    let best = optimal_effort(sc, x0).map_err(|e| e.to_string())?;
    let mut out = vec![best.effort.unwrap_or(0.0), best.utility];
    for k in grid(steps)? {
        out.push(utility(k, sc, x0).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `[theta*, U_d(theta*), U_d(theta_0), ..., U_d(theta_steps)]` for a Beta(v, w) population.
pub fn welfare_points(v: f64, w: f64, r: f64, m: f64, steps: u32) -> Result<Vec<f64>, String> {
    let density = Density::beta(v, w).map_err(|e| e.to_string())?;
    let best = optimal_threshold(&density, r, m).map_err(|e| e.to_string())?;
    let mut out = vec![best.theta, best.welfare];
    out.extend(welfare_grid(&grid(steps)?, &density, r, m));
    Ok(out)
}

/// `[n, lo_1, hi_1, ..., lo_n, hi_n, A(x_0), ..., A(x_steps)]` where `A` is the
/// manipulation advantage over honest play at `x_i = i theta / steps`.
pub fn manipulation_points(theta: f64, r: f64, p: f64, steps: u32) -> Result<Vec<f64>, String> {
    let sc = Scenario::new(theta, r).map_err(|e| e.to_string())?;
    let setting = ManipulationSetting::new(p).map_err(|e| e.to_string())?;
    let region = manipulation_region(sc, setting).map_err(|e| e.to_string())?;
    let mut out = vec![region.intervals.len() as f64];
    for &(a, b) in &region.intervals {
        out.extend([a, b]);
    }
    for x in grid(steps)? {
        // The advantage is undefined at x = 0; start just inside.
        let x = (x * theta).max(1e-6);
        out.push(manipulation_advantage(sc, x, setting).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn incentive_constant() -> f64 {
    sil_core::agent::incentive_constant().m
}

#[wasm_bindgen]
pub fn utility_curve(theta: f64, r: f64, x0: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    utility_points(theta, r, x0, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn welfare_curve(v: f64, w: f64, r: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    welfare_points(v, w, r, incentive_constant(), steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn manipulation_curve(theta: f64, r: f64, p: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    manipulation_points(theta, r, p, steps).map_err(|e| JsError::new(&e))
}
