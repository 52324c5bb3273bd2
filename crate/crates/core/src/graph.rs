//! Finite multigraphs in the dart formalism.
//!
//! A graph is a set of vertices `0..n` and a set of darts (directed edges)
//! `0..m`. Every dart has a tail vertex and a partner `bar(e)` pointing the
//! other way; the head of `e` is the tail of `bar(e)`. A geometric edge is
//! the pair `{e, bar(e)}`, so a loop is a dart pair with equal tail and head.
//!
//! Ids are dense: vertex ids are exactly `0..vertex_count()` and dart ids
//! are exactly `0..dart_count()`. All later choices iterate in id order.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;
pub type Dart = usize;
/// Opaque color label attached to a vertex or a dart.
pub type Color = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("invalid graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A broken structural invariant, reported as data by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `bar(e) = e`; only color graphs may carry half-edges.
    HalfEdge { dart: Dart },
    /// `bar(e)` names a dart that does not exist.
    BarOutOfRange { dart: Dart, bar: Dart },
    /// `bar(bar(e)) != e`.
    BarNotInvolutive { dart: Dart },
    /// The tail of `dart` is not a vertex.
    TailOutOfRange { dart: Dart, tail: Vertex },
    /// `color(bar(e))` disagrees with the bar of `color(e)` in the color graph.
    DartColorBar { dart: Dart },
    /// `color(tail(e))` disagrees with `d0(color(e))`.
    DartColorTail { dart: Dart },
    /// A color label does not exist in the color graph.
    UnknownColor { vertex: Option<Vertex>, dart: Option<Dart>, color: Color },
    /// Colors are present on some items but missing on others.
    PartialColoring,
    /// Ids in a file were not exactly `0..n`.
    NonContiguousIds { what: &'static str },
    /// The color graph is not connected.
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HalfEdge { dart } => write!(f, "half-edge at dart {dart}"),
            Violation::BarOutOfRange { dart, bar } => {
                write!(f, "bar of dart {dart} is {bar}, which is not a dart")
            }
            Violation::BarNotInvolutive { dart } => write!(f, "bar not involutive at {dart}"),
            Violation::TailOutOfRange { dart, tail } => {
                write!(f, "tail of dart {dart} is {tail}, which is not a vertex")
            }
            Violation::DartColorBar { dart } => {
                write!(f, "color of bar({dart}) is not the bar of the color of {dart}")
            }
            Violation::DartColorTail { dart } => {
                write!(f, "color of tail({dart}) is not d0 of the color of {dart}")
            }
            Violation::UnknownColor { vertex, dart, color } => match (vertex, dart) {
                (Some(v), _) => write!(f, "vertex {v} has unknown color {color}"),
                (_, Some(e)) => write!(f, "dart {e} has unknown color {color}"),
                _ => write!(f, "unknown color {color}"),
            },
            Violation::PartialColoring => write!(f, "coloring is only partially present"),
            Violation::NonContiguousIds { what } => write!(f, "{what} ids are not 0..n"),
            Violation::Disconnected => write!(f, "graph is not connected"),
        }
    }
}

/// A finite multigraph with optional initial colors on vertices and darts.
///
/// The struct may hold invalid data (for example a broken involution) so that
/// [`validate_graph`] can report it; every other operation assumes a valid
/// graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    vertex_colors: Vec<Option<Color>>,
    tail: Vec<Vertex>,
    bar: Vec<Dart>,
    dart_colors: Vec<Option<Color>>,
}

impl ColoredGraph {
    /// Builds an uncolored graph without validating it.
    pub fn from_parts(vertex_count: usize, tail: Vec<Vertex>, bar: Vec<Dart>) -> Self {
        assert_eq!(tail.len(), bar.len(), "tail and bar must have one entry per dart");
        let m = tail.len();
        ColoredGraph {
            vertex_colors: vec![None; vertex_count],
            tail,
            bar,
            dart_colors: vec![None; m],
        }
    }

    /// Builds a graph from geometric edges `(u, w)`; edge `j` becomes the dart
    /// pair `2j: u -> w`, `2j + 1: w -> u`.
    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut tail = Vec::with_capacity(2 * edges.len());
        let mut bar = Vec::with_capacity(2 * edges.len());
        for (j, &(u, w)) in edges.iter().enumerate() {
            tail.push(u);
            tail.push(w);
            bar.push(2 * j + 1);
            bar.push(2 * j);
        }
        Self::from_parts(vertex_count, tail, bar)
    }

    /// Like [`ColoredGraph::from_parts`] but rejects invalid input.
    pub fn try_new(
        vertex_colors: Vec<Option<Color>>,
        tail: Vec<Vertex>,
        bar: Vec<Dart>,
        dart_colors: Vec<Option<Color>>,
    ) -> Result<Self, GraphError> {
        let g = Self::with_colors(vertex_colors, tail, bar, dart_colors);
        let violations = validate_graph(&g);
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// Builds a colored graph without validating it.
    pub fn with_colors(
        vertex_colors: Vec<Option<Color>>,
        tail: Vec<Vertex>,
        bar: Vec<Dart>,
        dart_colors: Vec<Option<Color>>,
    ) -> Self {
        assert_eq!(tail.len(), bar.len());
        assert_eq!(tail.len(), dart_colors.len());
        ColoredGraph { vertex_colors, tail, bar, dart_colors }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_colors.len()
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    pub fn darts(&self) -> std::ops::Range<Dart> {
        0..self.dart_count()
    }

    pub fn tail(&self, e: Dart) -> Vertex {
        self.tail[e]
    }

    pub fn head(&self, e: Dart) -> Vertex {
        self.tail[self.bar[e]]
    }

    pub fn bar(&self, e: Dart) -> Dart {
        self.bar[e]
    }

    pub fn vertex_color(&self, v: Vertex) -> Option<Color> {
        self.vertex_colors[v]
    }

    pub fn dart_color(&self, e: Dart) -> Option<Color> {
        self.dart_colors[e]
    }

    pub fn vertex_colors(&self) -> &[Option<Color>] {
        &self.vertex_colors
    }

    pub fn dart_colors(&self) -> &[Option<Color>] {
        &self.dart_colors
    }

    /// True when any vertex or dart carries a color label.
    pub fn is_colored(&self) -> bool {
        self.vertex_colors.iter().any(Option::is_some) || self.dart_colors.iter().any(Option::is_some)
    }

    pub fn set_vertex_colors(&mut self, colors: Vec<Option<Color>>) {
        assert_eq!(colors.len(), self.vertex_count());
        self.vertex_colors = colors;
    }

    pub fn set_dart_colors(&mut self, colors: Vec<Option<Color>>) {
        assert_eq!(colors.len(), self.dart_count());
        self.dart_colors = colors;
    }

    /// Drops all color labels.
    pub fn uncolored(&self) -> Self {
        ColoredGraph::from_parts(self.vertex_count(), self.tail.clone(), self.bar.clone())
    }

    /// The darts with tail `v`, ascending by id.
    pub fn star(&self, v: Vertex) -> Result<Vec<Dart>, GraphError> {
        if v >= self.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.darts().filter(|&e| self.tail[e] == v).collect())
    }

    /// All stars at once, indexed by vertex. Each star is ascending by id.
    pub fn stars(&self) -> Vec<Vec<Dart>> {
        let mut stars = vec![Vec::new(); self.vertex_count()];
        for e in self.darts() {
            stars[self.tail[e]].push(e);
        }
        stars
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.tail.iter().filter(|&&t| t == v).count()
    }

    /// Number of geometric edges, i.e. dart pairs. A bar-fixed dart counts once.
    pub fn edge_count(&self) -> usize {
        self.darts().filter(|&e| self.bar[e] >= e).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        reachable(self, 0).iter().all(|&r| r)
    }

    /// The component containing `v`, renumbered densely in increasing id
    /// order, together with its inclusion into `self`.
    pub fn connected_component(&self, v: Vertex) -> Result<(ColoredGraph, GraphMap), GraphError> {
        if v >= self.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        let seen = reachable(self, v);
        Ok(self.induced(&seen))
    }

    /// Restriction to a bar- and tail-closed set of vertices (all darts whose
    /// tail is kept are kept).
    fn induced(&self, keep: &[bool]) -> (ColoredGraph, GraphMap) {
        let mut vnew = vec![usize::MAX; self.vertex_count()];
        let mut vertex_map = Vec::new();
        for v in self.vertices().filter(|&v| keep[v]) {
            vnew[v] = vertex_map.len();
            vertex_map.push(v);
        }
        let mut dnew = vec![usize::MAX; self.dart_count()];
        let mut dart_map = Vec::new();
        for e in self.darts().filter(|&e| keep[self.tail[e]]) {
            dnew[e] = dart_map.len();
            dart_map.push(e);
        }
        let tail = dart_map.iter().map(|&e| vnew[self.tail[e]]).collect();
        let bar = dart_map.iter().map(|&e| dnew[self.bar[e]]).collect();
        let vc = vertex_map.iter().map(|&v| self.vertex_colors[v]).collect();
        let dc = dart_map.iter().map(|&e| self.dart_colors[e]).collect();
        (
            ColoredGraph::with_colors(vc, tail, bar, dc),
            GraphMap { vertex_map, dart_map },
        )
    }
}

fn reachable(g: &ColoredGraph, start: Vertex) -> Vec<bool> {
    let stars = g.stars();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &e in &stars[v] {
            let w = g.head(e);
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Checks every structural invariant and returns all violations found.
///
/// Colors are only checked for all-or-nothing presence here; use
/// [`validate_against`] to check them against a declared color graph.
pub fn validate_graph(g: &ColoredGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = g.dart_count();
    for e in g.darts() {
        let b = g.bar[e];
        if b >= m {
            out.push(Violation::BarOutOfRange { dart: e, bar: b });
        } else if b == e {
            out.push(Violation::HalfEdge { dart: e });
        } else if g.bar[b] != e {
            out.push(Violation::BarNotInvolutive { dart: b });
        }
        if g.tail[e] >= g.vertex_count() {
            out.push(Violation::TailOutOfRange { dart: e, tail: g.tail[e] });
        }
    }
    let colored_v = g.vertex_colors.iter().filter(|c| c.is_some()).count();
    let colored_d = g.dart_colors.iter().filter(|c| c.is_some()).count();
    if (colored_v != 0 && colored_v != g.vertex_count()) || (colored_d != 0 && colored_d != m) {
        out.push(Violation::PartialColoring);
    }
    out.dedup();
    out
}

/// Checks that the colors of `g` form a graph homomorphism into `c`.
/// Assumes `validate_graph(g)` is empty and `g` is fully colored.
pub fn validate_against(g: &ColoredGraph, c: &ColorGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in g.vertices() {
        match g.vertex_colors[v] {
            Some(i) if i < c.vertex_count() => {}
            Some(i) => out.push(Violation::UnknownColor { vertex: Some(v), dart: None, color: i }),
            None => out.push(Violation::PartialColoring),
        }
    }
    for e in g.darts() {
        let Some(k) = g.dart_colors[e] else {
            out.push(Violation::PartialColoring);
            continue;
        };
        if k >= c.dart_count() {
            out.push(Violation::UnknownColor { vertex: None, dart: Some(e), color: k });
            continue;
        }
        if g.dart_colors[g.bar[e]] != Some(c.bar(k)) {
            out.push(Violation::DartColorBar { dart: e });
        }
        if g.vertex_colors[g.tail[e]] != Some(c.d0(k)) {
            out.push(Violation::DartColorTail { dart: e });
        }
    }
    out.dedup();
    out
}

/// A graph of colors: like a graph, but bar-fixed darts (half-edges) are
/// allowed, and it carries no further labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorGraph {
    vertex_count: usize,
    d0: Vec<Vertex>,
    bar: Vec<Dart>,
}

impl ColorGraph {
    /// Builds and validates a color graph. Connectivity is required.
    pub fn new(vertex_count: usize, d0: Vec<Vertex>, bar: Vec<Dart>) -> Result<Self, GraphError> {
        let c = ColorGraph { vertex_count, d0, bar };
        let v = c.violations();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(GraphError::Invalid(v))
        }
    }

    pub(crate) fn new_unchecked(vertex_count: usize, d0: Vec<Vertex>, bar: Vec<Dart>) -> Self {
        ColorGraph { vertex_count, d0, bar }
    }

    /// Structural violations; half-edges are permitted.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = self.d0.len();
        if self.bar.len() != m {
            out.push(Violation::NonContiguousIds { what: "dart" });
            return out;
        }
        for k in 0..m {
            let b = self.bar[k];
            if b >= m {
                out.push(Violation::BarOutOfRange { dart: k, bar: b });
            } else if self.bar[b] != k {
                out.push(Violation::BarNotInvolutive { dart: b });
            }
            if self.d0[k] >= self.vertex_count {
                out.push(Violation::TailOutOfRange { dart: k, tail: self.d0[k] });
            }
        }
        if out.is_empty() && !self.as_graph().is_connected() {
            out.push(Violation::Disconnected);
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dart_count(&self) -> usize {
        self.d0.len()
    }

    pub fn d0(&self, k: Dart) -> Vertex {
        self.d0[k]
    }

    pub fn d1(&self, k: Dart) -> Vertex {
        self.d0[self.bar[k]]
    }

    pub fn bar(&self, k: Dart) -> Dart {
        self.bar[k]
    }

    /// Dart colors departing vertex color `i`, ascending.
    pub fn darts_at(&self, i: Vertex) -> Vec<Dart> {
        (0..self.dart_count()).filter(|&k| self.d0[k] == i).collect()
    }

    /// Number of geometric edges; a half-edge counts as one.
    pub fn edge_count(&self) -> usize {
        (0..self.dart_count()).filter(|&k| self.bar[k] >= k).count()
    }

    /// The color graph seen as an ordinary (possibly half-edged) graph.
    pub fn as_graph(&self) -> ColoredGraph {
        ColoredGraph::from_parts(self.vertex_count, self.d0.clone(), self.bar.clone())
    }
}

/// True iff `c` is a tree in the ordinary sense: no half-edges, no loops, and
/// exactly `|I| - 1` geometric edges.
pub fn is_tree(c: &ColorGraph) -> bool {
    let has_half_edge = (0..c.dart_count()).any(|k| c.bar(k) == k);
    let has_loop = (0..c.dart_count()).any(|k| c.d0(k) == c.d1(k));
    !has_half_edge
        && !has_loop
        && c.edge_count() + 1 == c.vertex_count()
        && c.as_graph().is_connected()
}

/// A vertex map and a dart map from one graph to another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GraphMap {
    pub vertex_map: Vec<Vertex>,
    pub dart_map: Vec<Dart>,
}

impl GraphMap {
    pub fn identity(g: &ColoredGraph) -> Self {
        GraphMap { vertex_map: g.vertices().collect(), dart_map: g.darts().collect() }
    }

    /// `self` after `first`: maps through `first` and then through `self`.
    pub fn after(&self, first: &GraphMap) -> GraphMap {
        GraphMap {
            vertex_map: first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            dart_map: first.dart_map.iter().map(|&e| self.dart_map[e]).collect(),
        }
    }

    /// True iff the map commutes with tail and bar. Does not check colors or
    /// local bijectivity.
    pub fn is_homomorphism(&self, from: &ColoredGraph, to: &ColoredGraph) -> bool {
        self.vertex_map.len() == from.vertex_count()
            && self.dart_map.len() == from.dart_count()
            && self.vertex_map.iter().all(|&v| v < to.vertex_count())
            && self.dart_map.iter().all(|&e| e < to.dart_count())
            && from.darts().all(|e| {
                let fe = self.dart_map[e];
                to.tail(fe) == self.vertex_map[from.tail(e)] && to.bar(fe) == self.dart_map[from.bar(e)]
            })
    }
}
