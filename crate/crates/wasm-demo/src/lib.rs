//! Browser bindings: a thin layer over the core library for the static demo
//! page in `www/`.
//!
//! Build the WebAssembly module with
//!
//! ```text
//! cargo build -p zipcurve-wasm --target wasm32-unknown-unknown --release
//! wasm-bindgen --target web --out-dir www/pkg \
//!     target/wasm32-unknown-unknown/release/zipcurve_wasm.wasm
//! ```
//!
//! and serve `www/` from any static file server. The exported functions
//! return flat `[x0, y0, x1, y1, ...]` buffers so the page can feed a canvas
//! without conversion; errors surface as JavaScript exceptions carrying the
//! library's error message.

use wasm_bindgen::prelude::*;

use zipcurve::attractor::chaos_game;
use zipcurve::catalog;

/// Point budget for browser-driven enumerations; deep levels on many-map
/// systems fail fast with a message instead of hanging the tab.
const BROWSER_BUDGET: u64 = 2_000_000;

/// Hard cap on chaos-game samples per call.
const MAX_SAMPLES: usize = 200_000;

/// Evaluation depth for single curve points (enough for f64-scale accuracy
/// on every catalog entry).
const POINT_DEPTH: usize = 40;

fn flatten(points: &[zipcurve::Point2]) -> Vec<f64> {
    let mut flat = Vec::with_capacity(points.len() * 2);
    for p in points {
        flat.push(p.x);
        flat.push(p.y);
    }
    flat
}

fn js_err(e: zipcurve::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn curve_points_impl(name: &str, level: usize) -> zipcurve::Result<Vec<f64>> {
    let entry = catalog::get_example(name)?;
    let param = entry.parametrization()?;
    let poly = param.curve_polyline(level, BROWSER_BUDGET)?;
    Ok(flatten(poly.vertices()))
}

fn attractor_points_impl(name: &str, samples: usize, seed: u64) -> zipcurve::Result<Vec<f64>> {
    let entry = catalog::get_example(name)?;
    let ifs = zipcurve::IFS::from_zipper(&entry.zipper()?)?;
    let cloud = chaos_game(&ifs, samples.min(MAX_SAMPLES), seed, 40);
    Ok(flatten(cloud.points()))
}

fn gamma_point_impl(name: &str, t: f64) -> zipcurve::Result<Vec<f64>> {
    let entry = catalog::get_example(name)?;
    let param = entry.parametrization()?;
    let p = param.gamma(t, POINT_DEPTH)?;
    Ok(vec![p.x, p.y])
}

/// JSON array of the built-in systems: `[{name, summary, maps}, ...]`.
#[wasm_bindgen]
pub fn catalog_names() -> String {
    let items: Vec<serde_json::Value> = catalog::all_entries()
        .iter()
        .map(|e| {
            serde_json::json!({
                "name": e.name,
                "summary": e.summary,
                "maps": e.vertices.len().saturating_sub(1),
            })
        })
        .collect();
    serde_json::Value::Array(items).to_string()
}

/// Vertices of the level-`level` space-filling-curve polyline for a catalog
/// system, as a flat `[x, y, ...]` buffer.
#[wasm_bindgen]
pub fn curve_points(name: &str, level: usize) -> Result<Vec<f64>, JsValue> {
    curve_points_impl(name, level).map_err(js_err)
}

/// Chaos-game sample of a catalog system's attractor, as a flat
/// `[x, y, ...]` buffer. Deterministic for a fixed `seed`.
#[wasm_bindgen]
pub fn attractor_points(name: &str, samples: usize, seed: u64) -> Result<Vec<f64>, JsValue> {
    attractor_points_impl(name, samples, seed).map_err(js_err)
}

/// The curve point `gamma(t)` of a catalog system, as `[x, y]`.
#[wasm_bindgen]
pub fn gamma_point(name: &str, t: f64) -> Result<Vec<f64>, JsValue> {
    gamma_point_impl(name, t).map_err(js_err)
}
