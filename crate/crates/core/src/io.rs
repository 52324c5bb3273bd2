//! JSON file formats and DOT export.
//!
//! Writers build `serde_json::Value`s, whose object keys serialize in sorted
//! order, and emit compact JSON followed by a newline. Arrays are sorted by
//! id. Readers reject unknown fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{validate_graph, ColorGraph, ColoredGraph, GraphMap, Violation};
use crate::permgroup::{closure, Perm};
use crate::refine::{ColorGraphData, RefinedColoring};
use crate::symres::{validate_symdata, CycleReport, SRGraph, StabilizerReport, SymRestrictedData, VertexGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// Malformed JSON or a document of the wrong shape.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input describing an invalid object.
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn parse_err(e: serde_json::Error) -> FormatError {
    FormatError::Parse(e.to_string())
}

fn invalid<T: ToString>(items: &[T]) -> FormatError {
    FormatError::Invalid(items.iter().map(T::to_string).collect::<Vec<_>>().join("; "))
}

fn emit(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn int_key(k: &str) -> Result<usize, FormatError> {
    k.parse().map_err(|_| FormatError::Parse(format!("object key {k:?} is not a non-negative integer")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRec {
    id: usize,
    color: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DartRec {
    id: usize,
    bar: usize,
    tail: usize,
    color: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRec {
    vertices: Vec<VertexRec>,
    darts: Vec<DartRec>,
}

/// Sorts records by id and checks that the ids are exactly `0..n`.
fn by_id<T>(mut recs: Vec<T>, id: impl Fn(&T) -> usize, what: &'static str) -> Result<Vec<T>, FormatError> {
    recs.sort_by_key(&id);
    if recs.iter().enumerate().any(|(j, r)| id(r) != j) {
        return Err(invalid(&[Violation::NonContiguousIds { what }]));
    }
    Ok(recs)
}

fn graph_from_rec(rec: GraphRec) -> Result<ColoredGraph, FormatError> {
    let vs = by_id(rec.vertices, |v| v.id, "vertex")?;
    let ds = by_id(rec.darts, |d| d.id, "dart")?;
    Ok(ColoredGraph::with_colors(
        vs.iter().map(|v| v.color).collect(),
        ds.iter().map(|d| d.tail).collect(),
        ds.iter().map(|d| d.bar).collect(),
        ds.iter().map(|d| d.color).collect(),
    ))
}

/// Parses a graph file and validates it.
pub fn parse_graph(text: &str) -> Result<ColoredGraph, FormatError> {
    let rec: GraphRec = serde_json::from_str(text).map_err(parse_err)?;
    let g = graph_from_rec(rec)?;
    let v = validate_graph(&g);
    if !v.is_empty() {
        return Err(invalid(&v));
    }
    Ok(g)
}

pub fn graph_value(g: &ColoredGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| match g.vertex_color(v) {
            Some(c) => json!({"id": v, "color": c}),
            None => json!({"id": v}),
        })
        .collect();
    let darts: Vec<Value> = g
        .darts()
        .map(|e| match g.dart_color(e) {
            Some(c) => json!({"id": e, "bar": g.bar(e), "tail": g.tail(e), "color": c}),
            None => json!({"id": e, "bar": g.bar(e), "tail": g.tail(e)}),
        })
        .collect();
    json!({"vertices": vertices, "darts": darts})
}

pub fn graph_to_json(g: &ColoredGraph) -> String {
    emit(&graph_value(g))
}

fn color_graph_from_value(v: Value) -> Result<ColorGraph, FormatError> {
    let rec: GraphRec = serde_json::from_value(v).map_err(parse_err)?;
    if rec.vertices.iter().any(|v| v.color.is_some()) || rec.darts.iter().any(|d| d.color.is_some()) {
        return Err(FormatError::Invalid("a graph of colors carries no colors".into()));
    }
    let g = graph_from_rec(rec)?;
    ColorGraph::new(g.vertex_count(), g.darts().map(|e| g.tail(e)).collect(), g.darts().map(|e| g.bar(e)).collect())
        .map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn color_graph_value(c: &ColorGraph) -> Value {
    graph_value(&c.as_graph())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRec {
    vertex_map: Vec<(usize, usize)>,
    dart_map: Vec<(usize, usize)>,
}

/// Parses a map file. Pairs may come in any order but must cover `0..n`.
pub fn parse_map(text: &str) -> Result<GraphMap, FormatError> {
    let rec: MapRec = serde_json::from_str(text).map_err(parse_err)?;
    let vm = by_id(rec.vertex_map, |p| p.0, "vertex")?;
    let dm = by_id(rec.dart_map, |p| p.0, "dart")?;
    Ok(GraphMap { vertex_map: vm.into_iter().map(|p| p.1).collect(), dart_map: dm.into_iter().map(|p| p.1).collect() })
}

pub fn map_to_json(p: &GraphMap) -> String {
    let pairs = |m: &[usize]| m.iter().enumerate().map(|(x, &y)| json!([x, y])).collect::<Vec<_>>();
    emit(&json!({"vertex_map": pairs(&p.vertex_map), "dart_map": pairs(&p.dart_map)}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRec {
    degree: usize,
    generators: Vec<Vec<usize>>,
    orbit_labels: Option<BTreeMap<String, usize>>,
    star_degree: Option<usize>,
}

fn labels_from(m: BTreeMap<String, usize>) -> Result<BTreeMap<usize, usize>, FormatError> {
    m.into_iter().map(|(k, v)| Ok((int_key(&k)?, v))).collect()
}

fn group_from_rec(rec: GroupRec) -> Result<VertexGroup, FormatError> {
    let mut gens = Vec::with_capacity(rec.generators.len());
    for (j, images) in rec.generators.into_iter().enumerate() {
        if images.len() != rec.degree {
            return Err(FormatError::Invalid(format!("generator {j} has {} images, degree is {}", images.len(), rec.degree)));
        }
        gens.push(Perm::from_images(images).map_err(|e| FormatError::Invalid(format!("generator {j}: {e}")))?);
    }
    let group = closure(rec.degree, gens).map_err(|e| FormatError::Invalid(e.to_string()))?;
    let orbit_labels = labels_from(rec.orbit_labels.unwrap_or_default())?;
    let star_degree = rec.star_degree.unwrap_or(rec.degree);
    if star_degree > rec.degree {
        return Err(FormatError::Invalid(format!("star_degree {star_degree} exceeds degree {}", rec.degree)));
    }
    Ok(VertexGroup { group, star_degree, orbit_labels })
}

/// Parses a group file; labels are optional.
pub fn parse_group(text: &str) -> Result<VertexGroup, FormatError> {
    group_from_rec(serde_json::from_str(text).map_err(parse_err)?)
}

pub fn group_value(vg: &VertexGroup) -> Value {
    let g = &vg.group;
    let gens: Vec<Value> = g.generators().iter().map(|p| json!(p.images())).collect();
    let mut obj = json!({"degree": g.degree(), "generators": gens});
    if !vg.orbit_labels.is_empty() {
        let labels: serde_json::Map<String, Value> = vg.orbit_labels.iter().map(|(p, k)| (p.to_string(), json!(k))).collect();
        obj["orbit_labels"] = Value::Object(labels);
    }
    if vg.star_degree != g.degree() {
        obj["star_degree"] = json!(vg.star_degree);
    }
    obj
}

pub fn group_to_json(vg: &VertexGroup) -> String {
    emit(&group_value(vg))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymRec {
    color_graph: Value,
    groups: BTreeMap<String, GroupRec>,
    orbit_labels: Option<BTreeMap<String, BTreeMap<String, usize>>>,
}

/// Parses and validates a symmetry data file.
///
/// Orbit labels may sit inside each group object, in a top-level
/// `orbit_labels` object keyed by vertex color, or both if they agree.
pub fn parse_symdata(text: &str) -> Result<SymRestrictedData, FormatError> {
    let rec: SymRec = serde_json::from_str(text).map_err(parse_err)?;
    let color_graph = color_graph_from_value(rec.color_graph)?;
    let mut groups = BTreeMap::new();
    for (k, g) in rec.groups {
        groups.insert(int_key(&k)?, group_from_rec(g)?);
    }
    for (i, labels) in rec.orbit_labels.unwrap_or_default() {
        let i = int_key(&i)?;
        let vg = groups.get_mut(&i).ok_or_else(|| FormatError::Invalid(format!("orbit labels for unknown vertex color {i}")))?;
        for (point, k) in labels_from(labels)? {
            if *vg.orbit_labels.entry(point).or_insert(k) != k {
                return Err(FormatError::Invalid(format!("conflicting labels for point {point} at vertex color {i}")));
            }
        }
    }
    if groups.keys().enumerate().any(|(j, &i)| i != j) {
        return Err(invalid(&[Violation::NonContiguousIds { what: "group" }]));
    }
    let d = SymRestrictedData { color_graph, groups: groups.into_values().collect() };
    let v = validate_symdata(&d);
    if !v.is_empty() {
        return Err(invalid(&v));
    }
    Ok(d)
}

pub fn symdata_to_json(d: &SymRestrictedData) -> String {
    let groups: serde_json::Map<String, Value> =
        d.groups.iter().enumerate().map(|(i, vg)| (i.to_string(), group_value(vg))).collect();
    emit(&json!({"color_graph": color_graph_value(&d.color_graph), "groups": groups}))
}

/// Parses a chart file: an object mapping each vertex to its
/// `[dart, point]` pairs.
pub fn parse_charts(text: &str, vertex_count: usize) -> Result<Vec<Vec<(usize, usize)>>, FormatError> {
    let rec: BTreeMap<String, Vec<(usize, usize)>> = serde_json::from_str(text).map_err(parse_err)?;
    let mut charts = vec![None; vertex_count];
    for (k, mut pairs) in rec {
        let v = int_key(&k)?;
        if v >= vertex_count {
            return Err(FormatError::Invalid(format!("chart for unknown vertex {v}")));
        }
        pairs.sort_unstable();
        charts[v] = Some(pairs);
    }
    charts
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| FormatError::Invalid(format!("no chart for vertex {v}"))))
        .collect()
}

pub fn charts_to_json(g: &SRGraph) -> String {
    let obj: serde_json::Map<String, Value> = g
        .charts
        .iter()
        .enumerate()
        .map(|(v, c)| {
            let mut c = c.clone();
            c.sort_unstable();
            (v.to_string(), json!(c))
        })
        .collect();
    emit(&Value::Object(obj))
}

/// The refined coloring with its color graph and, when available, the counts.
pub fn refinement_to_json(coloring: &RefinedColoring, data: Option<&ColorGraphData>, common_cover: Option<bool>) -> String {
    let per_graph = |f: &dyn Fn(usize) -> Vec<usize>| (0..coloring.graph_count()).map(f).collect::<Vec<_>>();
    let mut obj = json!({
        "color_graph": color_graph_value(coloring.color_graph()),
        "dart_classes": per_graph(&|g| coloring.dart_classes(g).to_vec()),
        "rounds": coloring.rounds(),
        "vertex_classes": per_graph(&|g| coloring.vertex_classes(g).to_vec()),
    });
    if let Some(b) = common_cover {
        obj["common_cover"] = json!(b);
    }
    if let Some(d) = data {
        obj["r"] = json!(d.r);
        obj["n"] = json!(d.counts.iter().map(|c| c.n.clone()).collect::<Vec<_>>());
        obj["m"] = json!(d.counts.iter().map(|c| c.m.clone()).collect::<Vec<_>>());
    }
    emit(&obj)
}

pub fn stabilizers_to_json(rep: &StabilizerReport) -> String {
    let stabs: Vec<Value> = rep
        .stabilizers
        .iter()
        .map(|s| {
            json!({
                "abelian": s.group.is_abelian(),
                "basepoint": s.basepoint,
                "dart_color": s.dart_color,
                "order": s.group.order(),
            })
        })
        .collect();
    let bal: Vec<Value> = rep
        .balance
        .iter()
        .map(|b| json!({"balanced": b.balanced, "bar": b.bar, "dart_color": b.dart_color}))
        .collect();
    emit(&json!({"all_balanced": rep.all_balanced(), "balance": bal, "stabilizers": stabs}))
}

pub fn cycles_to_json(rep: &CycleReport) -> String {
    emit(&json!({
        "all_pass": rep.all_pass(),
        "checked": rep.results.len(),
        "first_failure": rep.first_failure,
        "max_len": rep.max_len,
    }))
}

const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    "#ccebc5", "#ffed6f",
];

/// DOT rendering with vertices filled by class and one line per geometric
/// edge, labeled and colored by the class of its lower-numbered dart.
pub fn to_dot(g: &ColoredGraph, vertex_class: &[usize], dart_class: &[usize]) -> String {
    let mut s = String::from("graph G {\n  node [style=filled];\n");
    for v in g.vertices() {
        let c = vertex_class[v];
        writeln!(s, "  v{v} [label=\"{v}:{c}\", fillcolor=\"{}\"];", PALETTE[c % PALETTE.len()]).unwrap();
    }
    for e in g.darts().filter(|&e| e < g.bar(e)) {
        let (k, kb) = (dart_class[e], dart_class[g.bar(e)]);
        writeln!(
            s,
            "  v{} -- v{} [label=\"{k}/{kb}\", color=\"{}\"];",
            g.tail(e),
            g.head(e),
            PALETTE[k.min(kb) % PALETTE.len()]
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
