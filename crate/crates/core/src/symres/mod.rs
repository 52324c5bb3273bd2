//! Symmetry-restricted graphs.
//!
//! The data are a graph of colors `C` and, for every vertex color `i`, a
//! finite permutation group `Δ_i` on a reference star `X_i` whose orbits are
//! labeled by the dart colors leaving `i`. A symmetry-restricted graph is a
//! `C`-colored graph with a chart at every vertex identifying its star with
//! `X_i`, so that `Δ_i` acts on each star through the chart.

mod checks;
mod morphism;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{validate_against, validate_graph, ColorGraph, ColoredGraph, Dart, Vertex, Violation};
use crate::permgroup::{GroupError, Orbit, PermGroup};

pub use checks::{
    check_cycle_condition, edge_stabilizers, reduce_to_balanced, towards, CycleReport, CycleResult, EdgeBalance,
    EdgeStabilizer, StabilizerReport,
};
pub use morphism::{check_weak_equivariance, verify_sr_morphism, MorphismDefect, MorphismReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("the graph of colors is not a tree")]
    NotATree,
    #[error("invalid symmetry data: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<SymViolation>),
    #[error("reduced data is not balanced at dart color {0}")]
    NotBalancedAfterReduction(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `Δ_i` together with its orbit labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexGroup {
    pub group: PermGroup,
    /// Points `0..star_degree` are the reference star `X_i`. Any further
    /// points belong to extra direct factors that act trivially on the star.
    pub star_degree: usize,
    /// Smallest point of an orbit on the star, mapped to its dart color.
    pub orbit_labels: BTreeMap<usize, usize>,
}

impl VertexGroup {
    /// A group acting faithfully on its whole point set.
    pub fn new(group: PermGroup, orbit_labels: BTreeMap<usize, usize>) -> Self {
        let star_degree = group.degree();
        VertexGroup { group, star_degree, orbit_labels }
    }

    /// Orbits on the star points, with their labels filled in.
    pub fn star_orbits(&self) -> Vec<Orbit> {
        self.group
            .orbits()
            .into_iter()
            .filter(|o| o.min_point() < self.star_degree)
            .map(|mut o| {
                o.label = self.orbit_labels.get(&o.min_point()).copied();
                o
            })
            .collect()
    }

    /// The orbit labeled `k`, if any.
    pub fn orbit_of_color(&self, k: usize) -> Option<Orbit> {
        self.star_orbits().into_iter().find(|o| o.label == Some(k))
    }
}

/// The symmetry data: a color graph and one group per vertex color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymRestrictedData {
    pub color_graph: ColorGraph,
    pub groups: Vec<VertexGroup>,
}

impl SymRestrictedData {
    /// Basepoint of dart color `k`: the smallest point of the orbit labeled `k`.
    pub fn basepoint(&self, k: usize) -> Option<usize> {
        let i = self.color_graph.d0(k);
        self.groups[i].orbit_of_color(k).map(|o| o.min_point())
    }

    /// `Δ_k`: the stabilizer of the basepoint of `k` in `Δ_{d0 k}`.
    pub fn edge_stabilizer(&self, k: usize) -> Result<PermGroup, SymError> {
        let x = self.basepoint(k).ok_or_else(|| SymError::Invalid(vec![SymViolation::MissingColor { color: self.color_graph.d0(k), dart: k }]))?;
        Ok(self.groups[self.color_graph.d0(k)].group.stabilizer(x)?)
    }
}

/// A broken invariant of symmetry data or of a symmetry-restricted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymViolation {
    GroupCount { expected: usize, found: usize },
    /// The star block `0..star_degree` is not preserved by the group.
    StarNotInvariant { color: usize },
    /// The number of orbits differs from the number of dart colors at `color`.
    OrbitColorMismatch { color: usize, orbits: usize, darts: usize },
    /// A label is attached to a point that is not the smallest of an orbit.
    LabelNotAnOrbit { color: usize, point: usize },
    /// A label names a dart color that does not leave `color`.
    LabelViolatesD0 { color: usize, dart: usize },
    /// Two orbits carry the same label.
    DuplicateLabel { color: usize, dart: usize },
    UnlabeledOrbit { color: usize, point: usize },
    /// No orbit is labeled by a dart color leaving `color`.
    MissingColor { color: usize, dart: usize },
    /// The input graph is not a valid graph colored over the color graph.
    Graph(Violation),
    /// The chart at `vertex` is not a bijection from its star onto `X_i`.
    ChartNotBijective { vertex: Vertex },
    /// The chart sends a `k`-dart outside the orbit labeled `k`.
    ChartWrongOrbit { vertex: Vertex, dart: Dart },
    /// The number of `k`-darts at `vertex` differs from the size of orbit `k`.
    DegreeMismatch { vertex: Vertex, dart_color: usize, expected: usize, found: usize },
}

impl fmt::Display for SymViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SymViolation::*;
        match self {
            GroupCount { expected, found } => write!(f, "expected {expected} groups, found {found}"),
            StarNotInvariant { color } => write!(f, "group at {color} does not preserve its star"),
            OrbitColorMismatch { color, orbits, darts } => {
                write!(f, "orbit/color mismatch at {color}: {orbits} orbits, {darts} dart colors")
            }
            LabelNotAnOrbit { color, point } => write!(f, "label at {color} on point {point}, not an orbit minimum"),
            LabelViolatesD0 { color, dart } => write!(f, "label {dart} at {color} violates d0"),
            DuplicateLabel { color, dart } => write!(f, "label {dart} used twice at {color}"),
            UnlabeledOrbit { color, point } => write!(f, "orbit of {point} at {color} has no label"),
            MissingColor { color, dart } => write!(f, "no orbit at {color} is labeled {dart}"),
            Graph(v) => write!(f, "{v}"),
            ChartNotBijective { vertex } => write!(f, "chart at vertex {vertex} is not bijective"),
            ChartWrongOrbit { vertex, dart } => write!(f, "chart at vertex {vertex} sends dart {dart} into the wrong orbit"),
            DegreeMismatch { vertex, dart_color, expected, found } => {
                write!(f, "vertex {vertex} has {found} darts of color {dart_color}, orbit has {expected}")
            }
        }
    }
}

/// Checks that orbit labels biject the orbits of every `Δ_i` on its star
/// with the dart colors leaving `i`.
pub fn validate_symdata(d: &SymRestrictedData) -> Vec<SymViolation> {
    let c = &d.color_graph;
    let mut out = Vec::new();
    if d.groups.len() != c.vertex_count() {
        return vec![SymViolation::GroupCount { expected: c.vertex_count(), found: d.groups.len() }];
    }
    for (i, vg) in d.groups.iter().enumerate() {
        let sd = vg.star_degree;
        if sd > vg.group.degree() || vg.group.generators().iter().any(|g| (0..sd).any(|x| g.apply(x) >= sd)) {
            out.push(SymViolation::StarNotInvariant { color: i });
            continue;
        }
        let orbits = vg.star_orbits();
        let darts = c.darts_at(i);
        if orbits.len() != darts.len() {
            out.push(SymViolation::OrbitColorMismatch { color: i, orbits: orbits.len(), darts: darts.len() });
        }
        let mins: BTreeSet<usize> = orbits.iter().map(Orbit::min_point).collect();
        let mut used = BTreeSet::new();
        for (&point, &k) in &vg.orbit_labels {
            if !mins.contains(&point) {
                out.push(SymViolation::LabelNotAnOrbit { color: i, point });
            }
            if k >= c.dart_count() || c.d0(k) != i {
                out.push(SymViolation::LabelViolatesD0 { color: i, dart: k });
            }
            if !used.insert(k) {
                out.push(SymViolation::DuplicateLabel { color: i, dart: k });
            }
        }
        for o in &orbits {
            if o.label.is_none() {
                out.push(SymViolation::UnlabeledOrbit { color: i, point: o.min_point() });
            }
        }
        for k in darts {
            if !used.contains(&k) {
                out.push(SymViolation::MissingColor { color: i, dart: k });
            }
        }
    }
    out
}

/// A `C`-colored graph with a chart at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRGraph {
    pub graph: ColoredGraph,
    /// `charts[v]` lists `(dart, point)` pairs: the chart `λ_v: ⋆(v) -> X_i`.
    pub charts: Vec<Vec<(Dart, usize)>>,
}

impl SRGraph {
    /// Builds charts that number each star in dart-id order, sending the
    /// `k`-darts at a vertex onto the orbit labeled `k` in increasing order.
    pub fn with_ranked_charts(graph: ColoredGraph, d: &SymRestrictedData) -> Self {
        let mut charts = Vec::with_capacity(graph.vertex_count());
        for star in graph.stars() {
            let mut next: BTreeMap<usize, usize> = BTreeMap::new();
            let mut chart = Vec::new();
            for e in star {
                let Some(k) = graph.dart_color(e) else { continue };
                let i = d.color_graph.d0(k);
                let Some(orbit) = d.groups[i].orbit_of_color(k) else { continue };
                let r = next.entry(k).or_insert(0);
                if let Some(&x) = orbit.points.get(*r) {
                    chart.push((e, x));
                }
                *r += 1;
            }
            charts.push(chart);
        }
        SRGraph { graph, charts }
    }

    /// `point[e]`: the chart value of dart `e` at its tail. Assumes charts
    /// are valid.
    pub fn chart_points(&self) -> Vec<usize> {
        let mut p = vec![usize::MAX; self.graph.dart_count()];
        for chart in &self.charts {
            for &(e, x) in chart {
                p[e] = x;
            }
        }
        p
    }
}

/// Checks that every chart is a bijection from the star onto `X_i` that sends
/// `k`-darts into the orbit labeled `k`.
pub fn validate_srs_graph(g: &SRGraph, d: &SymRestrictedData) -> Vec<SymViolation> {
    let mut out: Vec<SymViolation> = validate_graph(&g.graph).into_iter().map(SymViolation::Graph).collect();
    if !out.is_empty() {
        return out;
    }
    out.extend(validate_against(&g.graph, &d.color_graph).into_iter().map(SymViolation::Graph));
    if !out.is_empty() {
        return out;
    }
    if g.charts.len() != g.graph.vertex_count() {
        return vec![SymViolation::ChartNotBijective { vertex: g.charts.len().min(g.graph.vertex_count()) }];
    }
    let c = &d.color_graph;
    for (v, star) in g.graph.stars().iter().enumerate() {
        let i = g.graph.vertex_color(v).expect("validated coloring");
        let vg = &d.groups[i];
        let chart = &g.charts[v];
        let darts: BTreeSet<Dart> = chart.iter().map(|&(e, _)| e).collect();
        let points: BTreeSet<usize> = chart.iter().map(|&(_, x)| x).collect();
        let bijective = chart.len() == star.len()
            && darts.len() == chart.len()
            && darts.iter().copied().eq(star.iter().copied())
            && points.len() == vg.star_degree
            && points.iter().all(|&x| x < vg.star_degree);
        if !bijective {
            out.push(SymViolation::ChartNotBijective { vertex: v });
        }
        for k in c.darts_at(i) {
            let expected = vg.orbit_of_color(k).map_or(0, |o| o.points.len());
            let found = star.iter().filter(|&&e| g.graph.dart_color(e) == Some(k)).count();
            if expected != found {
                out.push(SymViolation::DegreeMismatch { vertex: v, dart_color: k, expected, found });
            }
        }
        for &(e, x) in chart {
            let Some(k) = g.graph.dart_color(e) else { continue };
            let inside = vg.orbit_of_color(k).is_some_and(|o| o.points.binary_search(&x).is_ok());
            if !inside {
                out.push(SymViolation::ChartWrongOrbit { vertex: v, dart: e });
            }
        }
    }
    out
}
