//! wasm-bindgen entry points for the static page in `www/`. Every export takes
//! and returns strings; results are JSON.

use meshdist::bijections;
use meshdist::distribution::Scanner;
use meshdist::{list_occurrences, MeshPattern, Permutation};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest depth the page may request; S_8 is still quick single-threaded.
pub const MAX_DEPTH: usize = 8;

fn pattern(s: &str) -> Result<MeshPattern, String> {
    s.trim().parse().map_err(|e: meshdist::ParseError| e.to_string())
}

fn perm(s: &str) -> Result<Permutation, String> {
    s.trim().parse().map_err(|e: meshdist::ParseError| e.to_string())
}

pub fn distribution_json(p: &str, depth: usize) -> Result<String, String> {
    let p = pattern(p)?;
    let t = Scanner::with_max_depth(MAX_DEPTH).distribution(&p, depth).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<u64>> = t
        .rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            while r.len() > 1 && r.last() == Some(&0) {
                r.pop();
            }
            r
        })
        .collect();
    Ok(json!({"pattern": p.to_string(), "rows": rows, "orbit": orbit_of(&p)}).to_string())
}

fn orbit_of(p: &MeshPattern) -> Vec<String> {
    p.symmetry_orbit().iter().map(|q| q.to_string()).collect()
}

/// Occurrences plus the pattern grid, enough to draw the permutation with the
/// chosen occurrence highlighted.
pub fn occurrences_json(p: &str, pi: &str) -> Result<String, String> {
    let p = pattern(p)?;
    let pi = perm(pi)?;
    let occ = list_occurrences(&p, &pi);
    let shaded: Vec<[usize; 2]> = p.shading().iter().map(|b| [b.i, b.j]).collect();
    Ok(json!({
        "pattern": p.to_string(),
        "tau": p.tau().entries(),
        "shaded": shaded,
        "perm": pi.entries(),
        "count": occ.len(),
        "occurrences": occ,
    })
    .to_string())
}

pub fn bijection_json(name: &str, pi: &str) -> Result<String, String> {
    let spec = bijections::by_name(name).ok_or_else(|| format!("unknown bijection `{name}`"))?;
    let pi = perm(pi)?;
    let out = Permutation::new((spec.map)(pi.entries())).map_err(|e| e.to_string())?;
    let c = |p: &MeshPattern, x: &Permutation| meshdist::count_occurrences(p, x);
    Ok(json!({
        "name": spec.name,
        "input": pi.to_string(),
        "output": out.to_string(),
        "first": {"pattern": spec.first.to_string(), "before": c(&spec.first, &pi), "after": c(&spec.first, &out)},
        "second": {"pattern": spec.second.to_string(), "before": c(&spec.second, &pi), "after": c(&spec.second, &out)},
    })
    .to_string())
}

pub fn bijection_names() -> Vec<String> {
    bijections::catalog().iter().map(|b| b.name.to_string()).collect()
}

#[wasm_bindgen]
pub fn distribution(pattern: &str, depth: usize) -> Result<String, JsValue> {
    distribution_json(pattern, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn occurrences(pattern: &str, perm: &str) -> Result<String, JsValue> {
    occurrences_json(pattern, perm).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bijection(name: &str, perm: &str) -> Result<String, JsValue> {
    bijection_json(name, perm).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bijections() -> String {
    json!(bijection_names()).to_string()
}
