//! Browser bindings: generate a graph, test membership, colour it.
//!
//! The plain functions return JSON strings so they can be tested natively;
//! the `wasm_*` wrappers only convert errors into `JsValue`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use chibound::engine::{colour, EngineError};
use chibound::generators::{grotzsch, h_n, random_in_class, schlafli_complement};
use chibound::io::{parse_graph6, write_graph6};
use chibound::{class_membership, Graph};

#[derive(Serialize)]
struct Drawing {
    graph6: String,
    order: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct Painted {
    order: usize,
    edges: Vec<(usize, usize)>,
    strategy: String,
    omega: usize,
    bound: usize,
    colours_used: usize,
    colouring: Vec<u32>,
}

fn drawing(g: &Graph) -> Result<String, String> {
    let d = Drawing { graph6: write_graph6(g).map_err(|e| e.to_string())?, order: g.order(), edges: g.edges().collect() };
    serde_json::to_string(&d).map_err(|e| e.to_string())
}

/// `family` is one of `grotzsch`, `schlafli`, `h`, `random`.
pub fn generate(family: &str, n: usize, p: f64, seed: u64) -> Result<String, String> {
    let g = match family {
        "grotzsch" => grotzsch(),
        "schlafli" => schlafli_complement(),
        "h" => h_n(n).map_err(|e| e.to_string())?,
        "random" if (0.0..=1.0).contains(&p) && n <= 64 => random_in_class(n, p, seed),
        "random" => return Err("random needs n ≤ 64 and p in [0, 1]".into()),
        other => return Err(format!("unknown family `{other}`")),
    };
    drawing(&g)
}

/// Membership verdict for a graph6 string, as JSON.
pub fn check(graph6: &str) -> Result<String, String> {
    let g = parse_graph6(graph6.trim().as_bytes()).map_err(|e| e.to_string())?;
    serde_json::to_string(&class_membership(&g)).map_err(|e| e.to_string())
}

/// Colouring for a graph6 string, with its edges for drawing, as JSON.
pub fn colour_graph6(graph6: &str) -> Result<String, String> {
    let g = parse_graph6(graph6.trim().as_bytes()).map_err(|e| e.to_string())?;
    let o = colour(&g).map_err(|e| match e {
        EngineError::OutOfClass(w) => format!("not in class: {:?} on {:?}", w.kind, w.vertices),
        other => other.to_string(),
    })?;
    let painted = Painted {
        order: g.order(),
        edges: g.edges().collect(),
        strategy: o.strategy.id().to_string(),
        omega: o.omega,
        bound: o.bound,
        colours_used: o.colouring.colours_used,
        colouring: o.colouring.assignment,
    };
    serde_json::to_string(&painted).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = generate)]
pub fn wasm_generate(family: &str, n: usize, p: f64, seed: u32) -> Result<String, JsValue> {
    generate(family, n, p, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = check)]
pub fn wasm_check(graph6: &str) -> Result<String, JsValue> {
    check(graph6).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = colour)]
pub fn wasm_colour(graph6: &str) -> Result<String, JsValue> {
    colour_graph6(graph6).map_err(|e| JsValue::from_str(&e))
}
