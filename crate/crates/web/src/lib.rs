//! Browser demo: three read-only operations over the core crate, each
//! returning a JSON string for the page to render.

use etwist_core::geometry::{check_positivity, gamma_at, Potential, Weight};
use etwist_core::spectral::{dyadic_sweep, estimate_decay, fss_pages, sweep_h, InvariantComplex, LieAlgebraModel, BUILTIN_MODELS};
use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn builtin(model: &str) -> Result<InvariantComplex, String> {
    if !BUILTIN_MODELS.contains(&model) {
        return Err(format!("unknown model `{model}` (expected one of {})", BUILTIN_MODELS.join(", ")));
    }
    let m = LieAlgebraModel::load(model).map_err(|e| e.to_string())?;
    InvariantComplex::build(&m).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Frölicher pages E_1..E_{r_max}, E_∞ and Betti numbers of a built-in model.
pub fn fss_json(model: &str, r_max: usize) -> Result<String, String> {
    if !(1..=6).contains(&r_max) {
        return Err("r_max must be in 1..=6".into());
    }
    let cx = builtin(model)?;
    to_json(&fss_pages(&cx, r_max).map_err(|e| e.to_string())?)
}

#[derive(Serialize)]
struct Sweep {
    model: String,
    k: usize,
    h_values: Vec<f64>,
    eigenvalues: Vec<Vec<f64>>,
    slopes: Vec<Option<f64>>,
    counts: Vec<usize>,
    page_dimensions: Vec<usize>,
    betti: usize,
}

/// Δ_h spectrum in degree k over h = 2^-1..2^-steps, with decay counts next
/// to dim E_r^k for r = 1..3.
pub fn sweep_json(model: &str, k: usize, steps: usize) -> Result<String, String> {
    if !(4..=16).contains(&steps) {
        return Err("steps must be in 4..=16".into());
    }
    let cx = builtin(model)?;
    if k > 2 * cx.n {
        return Err(format!("degree must be at most {}", 2 * cx.n));
    }
    let r_max = 3;
    let fss = fss_pages(&cx, r_max).map_err(|e| e.to_string())?;
    let table = sweep_h(&cx, k, &dyadic_sweep(steps)).map_err(|e| e.to_string())?;
    let decay = estimate_decay(&table, r_max, 0.2).map_err(|e| e.to_string())?;
    to_json(&Sweep {
        model: model.to_string(),
        k,
        counts: (1..=r_max).map(|r| decay.count(r)).collect(),
        page_dimensions: (1..=r_max).map(|r| fss.total(r, k)).collect(),
        betti: fss.betti[k],
        slopes: decay.slopes,
        h_values: table.h_values,
        eigenvalues: table.eigenvalues,
    })
}

#[derive(Serialize)]
struct Slice {
    potential: String,
    epsilon: f64,
    radius: f64,
    size: usize,
    /// Row-major; `null` outside the disc.
    min_eigenvalue: Vec<Option<f64>>,
    min: Option<f64>,
    positive: bool,
}

/// Smallest eigenvalue of γ_η for η = exp(-εφ) on the slice
/// z = (x + iy, 0) of the ball in C^2, over a size×size grid.
pub fn gamma_slice_json(potential: &str, epsilon: f64, radius: f64, size: usize) -> Result<String, String> {
    let phi = Potential::parse(potential).ok_or_else(|| format!("unknown potential `{potential}`"))?;
    if !(2..=200).contains(&size) {
        return Err("size must be in 2..=200".into());
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err("epsilon must be positive".into());
    }
    if !(radius > 0.0) || (phi == Potential::BallLog && radius >= 1.0) {
        return Err("radius must be positive, and below 1 for ball-log".into());
    }
    let w = Weight::exp_potential(phi, epsilon);
    let mut cells = Vec::with_capacity(size * size);
    let mut fields = Vec::new();
    for row in 0..size {
        for col in 0..size {
            let x = radius * (2.0 * col as f64 / (size - 1) as f64 - 1.0);
            let y = radius * (1.0 - 2.0 * row as f64 / (size - 1) as f64);
            if x * x + y * y >= radius * radius {
                cells.push(None);
                continue;
            }
            let g = gamma_at(&w, &[Complex64::new(x, y), Complex64::new(0.0, 0.0)]).map_err(|e| e.to_string())?;
            cells.push(Some(check_positivity(std::slice::from_ref(&g), 0.0).min_eigenvalue));
            fields.push(g);
        }
    }
    let overall = (!fields.is_empty()).then(|| check_positivity(&fields, 0.0));
    to_json(&Slice {
        potential: phi.name().to_string(),
        epsilon,
        radius,
        size,
        min_eigenvalue: cells,
        min: overall.as_ref().map(|p| p.min_eigenvalue),
        positive: overall.is_some_and(|p| p.holds),
    })
}

#[wasm_bindgen]
pub fn fss(model: &str, r_max: usize) -> Result<String, JsValue> {
    fss_json(model, r_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep(model: &str, k: usize, steps: usize) -> Result<String, JsValue> {
    sweep_json(model, k, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gamma_slice(potential: &str, epsilon: f64, radius: f64, size: usize) -> Result<String, JsValue> {
    gamma_slice_json(potential, epsilon, radius, size).map_err(|e| JsValue::from_str(&e))
}
