//! Joint color refinement and the refined graph of colors.
//!
//! The refined colors of a graph are the orbits of the automorphism group of
//! its universal cover. They are computed here as the coarsest stable
//! partition of vertices and darts: two vertices share a class only if they
//! see equally many darts of every class, and two darts share a class only
//! if their tails, heads and bars do. Running the refinement on a disjoint
//! union decides whether two graphs have the same universal cover.

mod unfold;

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::graph::{ColorGraph, ColoredGraph, Dart, Vertex};

pub use unfold::{
    canonical_code, same_universal_cover_oracle, truncated_universal_cover, UnfoldedTree, UnfoldingCodes,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error("initial colorings are incompatible: {0}")]
    IncompatibleColorings(&'static str),
    #[error("dart class {class} has {found} darts at vertex {vertex} of graph {graph}, expected {expected}")]
    InconsistentR { class: usize, graph: usize, vertex: Vertex, found: u64, expected: u64 },
    #[error("count identity n_i r_k = m_k = m_kbar = n_j r_kbar fails for dart class {class} in graph {graph}")]
    CountIdentity { class: usize, graph: usize },
}

/// The coarsest stable partition of the vertices and darts of one or two
/// graphs, with class ids shared between the graphs.
///
/// Classes are numbered by their smallest member in the disjoint union, where
/// the second graph's ids come after the first graph's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedColoring {
    vertex_class: Vec<Vec<usize>>,
    dart_class: Vec<Vec<usize>>,
    color_graph: ColorGraph,
    rounds: usize,
}

impl RefinedColoring {
    pub fn graph_count(&self) -> usize {
        self.vertex_class.len()
    }

    /// Class of vertex `v` of input graph `graph` (0 or 1).
    pub fn vertex_class(&self, graph: usize, v: Vertex) -> usize {
        self.vertex_class[graph][v]
    }

    pub fn dart_class(&self, graph: usize, e: Dart) -> usize {
        self.dart_class[graph][e]
    }

    pub fn vertex_classes(&self, graph: usize) -> &[usize] {
        &self.vertex_class[graph]
    }

    pub fn dart_classes(&self, graph: usize) -> &[usize] {
        &self.dart_class[graph]
    }

    /// The refined graph of colors: one vertex per vertex class and one dart
    /// per dart class.
    pub fn color_graph(&self) -> &ColorGraph {
        &self.color_graph
    }

    /// Number of refinement rounds that ran before the partition stabilized.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// True iff every class has members in every input graph.
    pub fn all_classes_shared(&self) -> bool {
        let c = &self.color_graph;
        let mut vseen = vec![0u32; c.vertex_count()];
        let mut dseen = vec![0u32; c.dart_count()];
        for g in 0..self.graph_count() {
            for &i in &self.vertex_class[g] {
                vseen[i] |= 1 << g;
            }
            for &k in &self.dart_class[g] {
                dseen[k] |= 1 << g;
            }
        }
        let full = (1u32 << self.graph_count()) - 1;
        vseen.iter().chain(&dseen).all(|&s| s == full)
    }
}

/// Assigns dense ids to keys in order of first appearance.
fn relabel<K: Hash + Eq>(keys: impl Iterator<Item = K>) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let labels = keys
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect();
    (labels, ids.len())
}

/// The disjoint union of the inputs, as flat arrays.
struct Union {
    vertex_offset: Vec<usize>,
    dart_offset: Vec<usize>,
    tail: Vec<usize>,
    bar: Vec<usize>,
    stars: Vec<Vec<usize>>,
}

impl Union {
    fn new(graphs: &[&ColoredGraph]) -> Self {
        let mut u = Union { vertex_offset: vec![], dart_offset: vec![], tail: vec![], bar: vec![], stars: vec![] };
        let (mut nv, mut nd) = (0, 0);
        for g in graphs {
            u.vertex_offset.push(nv);
            u.dart_offset.push(nd);
            u.tail.extend(g.darts().map(|e| g.tail(e) + nv));
            u.bar.extend(g.darts().map(|e| g.bar(e) + nd));
            nv += g.vertex_count();
            nd += g.dart_count();
        }
        u.stars = vec![Vec::new(); nv];
        for (e, &t) in u.tail.iter().enumerate() {
            u.stars[t].push(e);
        }
        u
    }

    fn head(&self, e: usize) -> usize {
        self.tail[self.bar[e]]
    }
}

/// Joint refinement of `g` and, optionally, `g2`.
///
/// Initial vertex and dart colors are respected: the result refines them.
/// If one graph carries vertex (or dart) colors the other must as well.
pub fn joint_refinement(g: &ColoredGraph, g2: Option<&ColoredGraph>) -> Result<RefinedColoring, RefineError> {
    let mut graphs = vec![g];
    graphs.extend(g2);
    refine_all(&graphs)
}

fn refine_all(graphs: &[&ColoredGraph]) -> Result<RefinedColoring, RefineError> {
    if let [a, b] = graphs {
        let has_v = |g: &ColoredGraph| g.vertex_colors().iter().any(Option::is_some);
        let has_d = |g: &ColoredGraph| g.dart_colors().iter().any(Option::is_some);
        if has_v(a) != has_v(b) {
            return Err(RefineError::IncompatibleColorings("only one graph has vertex colors"));
        }
        if has_d(a) != has_d(b) {
            return Err(RefineError::IncompatibleColorings("only one graph has dart colors"));
        }
    }
    let u = Union::new(graphs);
    let init_v = graphs.iter().flat_map(|g| g.vertex_colors().iter().copied());
    let init_d = graphs.iter().flat_map(|g| g.dart_colors().iter().copied());
    let (mut vclass, mut nv) = relabel(init_v);
    let (mut dclass, mut nd) = relabel(init_d);

    let bound = u.stars.len() + u.tail.len() + 1;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let (new_v, new_nv) = relabel((0..u.stars.len()).map(|v| {
            let mut seen: Vec<usize> = u.stars[v].iter().map(|&e| dclass[e]).collect();
            seen.sort_unstable();
            (vclass[v], seen)
        }));
        let (new_d, new_nd) = relabel(
            (0..u.tail.len()).map(|e| (dclass[e], new_v[u.tail[e]], new_v[u.head(e)], dclass[u.bar[e]])),
        );
        let stable = new_nv == nv && new_nd == nd;
        vclass = new_v;
        dclass = new_d;
        nv = new_nv;
        nd = new_nd;
        if stable {
            break;
        }
        debug_assert!(rounds <= bound, "refinement did not stabilize");
    }

    let mut d0 = vec![0; nd];
    let mut cbar = vec![0; nd];
    for e in 0..u.tail.len() {
        d0[dclass[e]] = vclass[u.tail[e]];
        cbar[dclass[e]] = dclass[u.bar[e]];
    }
    let split = |labels: &[usize], offsets: &[usize], sizes: Vec<usize>| -> Vec<Vec<usize>> {
        offsets.iter().zip(sizes).map(|(&o, n)| labels[o..o + n].to_vec()).collect()
    };
    let vertex_class = split(&vclass, &u.vertex_offset, graphs.iter().map(|g| g.vertex_count()).collect());
    let dart_class = split(&dclass, &u.dart_offset, graphs.iter().map(|g| g.dart_count()).collect());
    Ok(RefinedColoring {
        vertex_class,
        dart_class,
        color_graph: ColorGraph::new_unchecked(nv, d0, cbar),
        rounds,
    })
}

/// Per-graph tallies over the refined color graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCounts {
    /// `n[i]`: number of vertices of class `i`.
    pub n: Vec<u64>,
    /// `m[k]`: number of darts of class `k`.
    pub m: Vec<u64>,
}

/// The refined color graph together with the counts driving the common
/// cover construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorGraphData {
    pub color_graph: ColorGraph,
    /// `r[k]`: darts of class `k` at any vertex of class `d0(k)`, identical
    /// across all input graphs.
    pub r: Vec<u64>,
    /// One entry per input graph.
    pub counts: Vec<GraphCounts>,
}

impl ColorGraphData {
    /// Checks `n_i r_k = m_k = m_kbar = n_j r_kbar` for every dart class of
    /// every input graph.
    pub fn check_identities(&self) -> Result<(), RefineError> {
        let c = &self.color_graph;
        for (graph, counts) in self.counts.iter().enumerate() {
            for k in 0..c.dart_count() {
                let kb = c.bar(k);
                let lhs = counts.n[c.d0(k)] * self.r[k];
                let rhs = counts.n[c.d1(k)] * self.r[kb];
                if lhs != counts.m[k] || counts.m[k] != counts.m[kb] || counts.m[kb] != rhs {
                    return Err(RefineError::CountIdentity { class: k, graph });
                }
            }
        }
        Ok(())
    }
}

/// Tallies `n_i`, `m_k` per graph and `r_k`, certifying that `r_k` is the same
/// at every vertex of class `d0(k)` in every input graph.
pub fn quotient_color_graph(
    coloring: &RefinedColoring,
    graphs: &[&ColoredGraph],
) -> Result<ColorGraphData, RefineError> {
    assert_eq!(graphs.len(), coloring.graph_count());
    let c = coloring.color_graph().clone();
    let mut r: Vec<Option<u64>> = vec![None; c.dart_count()];
    let mut counts = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        let mut n = vec![0u64; c.vertex_count()];
        let mut m = vec![0u64; c.dart_count()];
        for &i in coloring.vertex_classes(gi) {
            n[i] += 1;
        }
        for &k in coloring.dart_classes(gi) {
            m[k] += 1;
        }
        let mut local = vec![0u64; c.dart_count()];
        for (v, star) in g.stars().iter().enumerate() {
            let i = coloring.vertex_class(gi, v);
            for &e in star {
                local[coloring.dart_class(gi, e)] += 1;
            }
            for k in c.darts_at(i) {
                let found = local[k];
                match r[k] {
                    None => r[k] = Some(found),
                    Some(expected) if expected != found => {
                        return Err(RefineError::InconsistentR { class: k, graph: gi, vertex: v, found, expected })
                    }
                    Some(_) => {}
                }
            }
            for &e in star {
                local[coloring.dart_class(gi, e)] = 0;
            }
        }
        counts.push(GraphCounts { n, m });
    }
    let data = ColorGraphData { color_graph: c, r: r.into_iter().map(|x| x.unwrap_or(0)).collect(), counts };
    Ok(data)
}

/// Outcome of [`common_cover_exists`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub exists: bool,
    pub coloring: RefinedColoring,
    /// Present exactly when `exists`.
    pub data: Option<ColorGraphData>,
}

/// Decides whether two connected graphs have a common covering.
///
/// They do iff every class of their joint refinement has members in both
/// graphs. On a positive answer the count identities are certified.
pub fn common_cover_exists(g: &ColoredGraph, g2: &ColoredGraph) -> Result<Decision, RefineError> {
    let coloring = joint_refinement(g, Some(g2))?;
    if !coloring.all_classes_shared() {
        return Ok(Decision { exists: false, coloring, data: None });
    }
    let data = quotient_color_graph(&coloring, &[g, g2])?;
    data.check_identities()?;
    Ok(Decision { exists: true, coloring, data: Some(data) })
}
