//! Browser bindings for graphcover. Every export takes and returns JSON text
//! in the same formats the `cover` command line tool reads and writes.

use graphcover::families::{complete, complete_bipartite, cycle, path};
use graphcover::graph::ColoredGraph;
use graphcover::io;
use graphcover::leighton::{self, covering_degree, CoverError, SPolicy};
use graphcover::polyhedra;
use graphcover::refine::{common_cover_exists, joint_refinement};
use graphcover::symres::{check_cycle_condition, edge_stabilizers, reduce_to_balanced, SymRestrictedData};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Covers larger than this are summarized without their vertex and dart lists.
pub const DRAW_LIMIT: usize = 400;

fn graph(text: &str) -> Result<ColoredGraph, String> {
    let g = io::parse_graph(text).map_err(|e| e.to_string())?;
    if !g.is_connected() {
        return Err("graph is not connected".into());
    }
    Ok(g)
}

fn value(text: String) -> Value {
    serde_json::from_str(&text).expect("library emits valid JSON")
}

pub fn preset_graph_json(name: &str) -> Result<String, String> {
    let g = match name {
        "p2" => path(2),
        "p3" => path(3),
        "c3" => cycle(3),
        "c4" => cycle(4),
        "c6" => cycle(6),
        "k4" => complete(4),
        "k33" => complete_bipartite(3, 3),
        "k5" => complete(5),
        "k44" => complete_bipartite(4, 4),
        "petersen" => {
            let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            edges.extend((0..5).map(|i| (i, i + 5)));
            edges.extend((0..5).map(|i| (i + 5, (i + 2) % 5 + 5)));
            ColoredGraph::from_edges(10, &edges)
        }
        _ => return Err(format!("unknown preset graph {name:?}")),
    };
    Ok(io::graph_to_json(&g))
}

/// Joint refinement of one graph, or of two when `second` is not blank.
pub fn refine_json(first: &str, second: &str) -> Result<String, String> {
    let g = graph(first)?;
    if second.trim().is_empty() {
        let rc = joint_refinement(&g, None).map_err(|e| e.to_string())?;
        return Ok(io::refinement_to_json(&rc, None, None));
    }
    let g2 = graph(second)?;
    let d = common_cover_exists(&g, &g2).map_err(|e| e.to_string())?;
    Ok(io::refinement_to_json(&d.coloring, d.data.as_ref(), Some(d.exists)))
}

/// Builds a common cover and reports its size, the two covering degrees, and
/// for small covers the graph itself with its projection to `first`.
pub fn construct_json(first: &str, second: &str, seed: u64, component_only: bool) -> Result<String, String> {
    let (g, g2) = (graph(first)?, graph(second)?);
    let cover = match leighton::construct(&g, &g2, SPolicy::FirstGraph, Some(seed), component_only) {
        Ok(c) => c,
        Err(CoverError::NoCommonCover) => return Ok(json!({"common_cover": false}).to_string()),
        Err(e) => return Err(e.to_string()),
    };
    let d1 = covering_degree(&cover.h, &g, &cover.to_g).map_err(|e| e.to_string())?;
    let d2 = covering_degree(&cover.h, &g2, &cover.to_g2).map_err(|e| e.to_string())?;
    let small = cover.h.vertex_count() <= DRAW_LIMIT;
    Ok(json!({
        "common_cover": true,
        "darts": cover.h.dart_count(),
        "degrees": [d1, d2],
        "h": if small { io::graph_value(&cover.h) } else { Value::Null },
        "map_g": if small { json!(cover.to_g.vertex_map) } else { Value::Null },
        "vertices": cover.h.vertex_count(),
    })
    .to_string())
}

pub fn preset_symdata_json(name: &str) -> Result<String, String> {
    match name {
        "dodeca-cube" => Ok(io::symdata_to_json(&polyhedra::dodeca_cube())),
        "icosa-cube" => Ok(io::symdata_to_json(&polyhedra::icosa_cube())),
        _ => Err(format!("unknown preset {name:?}")),
    }
}

/// Stabilizer and cycle checks on symmetry-restricted data, before and after
/// reduction to balanced data.
pub fn stabilizers_json(text: &str) -> Result<String, String> {
    let d = io::parse_symdata(text).map_err(|e| e.to_string())?;
    let report = |d: &SymRestrictedData| -> Result<Value, String> {
        let stab = edge_stabilizers(d).map_err(|e| e.to_string())?;
        let max_len = 2 * d.color_graph.edge_count();
        let cycles = check_cycle_condition(d, max_len).map_err(|e| e.to_string())?;
        Ok(json!({
            "cycles": value(io::cycles_to_json(&cycles)),
            "stabilizers": value(io::stabilizers_to_json(&stab)),
        }))
    };
    let reduced = match reduce_to_balanced(&d) {
        Ok(r) => report(&r)?,
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(json!({"input": report(&d)?, "reduced": reduced}).to_string())
}

#[wasm_bindgen]
pub fn preset_graph(name: &str) -> Result<String, JsError> {
    preset_graph_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn refine(first: &str, second: &str) -> Result<String, JsError> {
    refine_json(first, second).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn construct(first: &str, second: &str, seed: u32, component_only: bool) -> Result<String, JsError> {
    construct_json(first, second, seed.into(), component_only).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn preset_symdata(name: &str) -> Result<String, JsError> {
    preset_symdata_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn stabilizers(text: &str) -> Result<String, JsError> {
    stabilizers_json(text).map_err(|e| JsError::new(&e))
}
