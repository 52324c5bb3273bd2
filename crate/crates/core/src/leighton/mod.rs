//! Explicit common finite covers.
//!
//! Given two connected graphs with the same refined graph of colors `C`, let
//! `n_i`, `m_k` be the vertex and dart counts per color in the first graph and
//! `r_k` the number of `k`-darts at any `i`-vertex. For `s` a common multiple of
//! the `m_k`, put `a_i = s / n_i` and `b_k = s / m_k`. Then
//! `b_k = a_i / r_k = a_j / r_kbar = b_kbar` whenever `k` runs from `i` to `j`.
//!
//! The cover `H` has vertices `(i, v, v', alpha)` with `alpha < a_i` and darts
//! `(k, e, e', beta)` with `beta < b_k`. With a group `Pi_k` of order `r_k`, a
//! bijection `phi_k: Pi_k x B_k -> A_i` and star bijections `psi` from the
//! `k`-darts at each vertex onto `Pi_k`:
//!
//! ```text
//! tail(k, e, e', beta) = (d0 k, tail e, tail e', phi_k(psi(e) psi'(e')^-1, beta))
//! bar(k, e, e', beta)  = (kbar, bar e, bar e', beta)
//! ```
//!
//! Forgetting coordinates gives coverings `H -> G` and `H -> G'`.

mod blueprint;
mod verify;

use thiserror::Error;

use crate::graph::{ColoredGraph, Dart, GraphMap, Vertex};
use crate::refine::{ColorGraphData, Decision, RefineError};

pub use blueprint::{make_blueprint, CoverBlueprint, EdgeGroup, GroupTable};
pub use verify::{covering_degree, verify_covering, CoveringReport, Defect};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("the graphs have no common covering")]
    NoCommonCover,
    #[error("{what} is not an integer")]
    NonIntegral { what: String },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("parameter identity fails at dart color {class}")]
    ParameterIdentity { class: usize },
    #[error("blueprint does not match the color data: {0}")]
    Blueprint(String),
    #[error("fiber sizes differ: {first} over vertex 0, {other} over vertex {vertex}")]
    UnequalFibers { first: usize, other: usize, vertex: Vertex },
    #[error(transparent)]
    Refine(#[from] RefineError),
}

/// How to pick the common multiple `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SPolicy {
    /// Least common multiple of the dart counts of the first graph.
    #[default]
    FirstGraph,
    /// Least common multiple over the dart counts of both graphs.
    BothGraphs,
}

/// The integers `s`, `a_i`, `b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverParameters {
    pub s: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn lcm(x: u64, y: u64) -> Result<u64, CoverError> {
    if x == 0 || y == 0 {
        return Ok(x.max(y));
    }
    (x / gcd(x, y)).checked_mul(y).ok_or(CoverError::Overflow("s"))
}

fn exact_div(num: u64, den: u64, what: impl FnOnce() -> String) -> Result<u64, CoverError> {
    if den == 0 || !num.is_multiple_of(den) {
        Err(CoverError::NonIntegral { what: what() })
    } else {
        Ok(num / den)
    }
}

/// Computes `s`, `a_i = s / n_i` and `b_k = s / m_k` and re-checks the
/// parameter identities in integer arithmetic.
///
/// The vertex counts `n_i` also enter the least common multiple; this only
/// matters for a graph without darts, where it makes `s = 1`.
pub fn cover_parameters(data: &ColorGraphData, policy: SPolicy) -> Result<CoverParameters, CoverError> {
    let c = &data.color_graph;
    let first = &data.counts[0];
    let pool: Vec<&crate::refine::GraphCounts> = match policy {
        SPolicy::FirstGraph => vec![first],
        SPolicy::BothGraphs => data.counts.iter().collect(),
    };
    let mut s = 1;
    for counts in pool {
        for &m in &counts.m {
            s = lcm(s, m)?;
        }
        for &n in &counts.n {
            s = lcm(s, n)?;
        }
    }
    let a = (0..c.vertex_count())
        .map(|i| exact_div(s, first.n[i], || format!("a_{i} = {s}/{}", first.n[i])))
        .collect::<Result<Vec<_>, _>>()?;
    let b = (0..c.dart_count())
        .map(|k| exact_div(s, first.m[k], || format!("b_{k} = {s}/{}", first.m[k])))
        .collect::<Result<Vec<_>, _>>()?;
    let params = CoverParameters { s, a, b };
    check_parameters(data, &params)?;
    Ok(params)
}

/// Residual check: `b_k r_k = a_i`, `b_kbar r_kbar = a_j`, `b_k = b_kbar`, and
/// for every input graph `n_i a_i` is the same for all `i`.
pub fn check_parameters(data: &ColorGraphData, p: &CoverParameters) -> Result<(), CoverError> {
    let c = &data.color_graph;
    for k in 0..c.dart_count() {
        let kb = c.bar(k);
        if p.b[k] * data.r[k] != p.a[c.d0(k)] || p.b[kb] * data.r[kb] != p.a[c.d1(k)] || p.b[k] != p.b[kb] {
            return Err(CoverError::ParameterIdentity { class: k });
        }
    }
    for counts in &data.counts {
        let sheets: Vec<u64> = (0..c.vertex_count()).map(|i| counts.n[i] * p.a[i]).collect();
        if sheets.windows(2).any(|w| w[0] != w[1]) {
            return Err(CoverError::NonIntegral { what: "n_i a_i is not constant".into() });
        }
    }
    Ok(())
}

/// `(sum_i n_i n'_i a_i, sum_k m_k m'_k b_k)`: sizes of the full cover.
pub fn expected_size(data: &ColorGraphData, p: &CoverParameters) -> (u64, u64) {
    let (x, y) = (&data.counts[0], &data.counts[1]);
    let v = (0..x.n.len()).map(|i| x.n[i] * y.n[i] * p.a[i]).sum();
    let d = (0..x.m.len()).map(|k| x.m[k] * y.m[k] * p.b[k]).sum();
    (v, d)
}

/// Vertex `(i, v, v', alpha)` of the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverVertex {
    pub color: usize,
    pub v: Vertex,
    pub v2: Vertex,
    pub alpha: usize,
}

/// Dart `(k, e, e', beta)` of the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverDart {
    pub color: usize,
    pub e: Dart,
    pub e2: Dart,
    pub beta: usize,
}

/// A common cover `H` with its projections onto both inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonCover {
    pub h: ColoredGraph,
    pub to_g: GraphMap,
    pub to_g2: GraphMap,
    /// Tuple label of each vertex of `h`, in id order.
    pub vertices: Vec<CoverVertex>,
    /// Tuple label of each dart of `h`, in id order.
    pub darts: Vec<CoverDart>,
}

/// Members of each class in one graph, and each member's rank in its class.
struct ClassIndex {
    members: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl ClassIndex {
    fn new(labels: &[usize], classes: usize) -> Self {
        let mut members = vec![Vec::new(); classes];
        let mut rank = vec![0; labels.len()];
        for (x, &c) in labels.iter().enumerate() {
            rank[x] = members[c].len();
            members[c].push(x);
        }
        ClassIndex { members, rank }
    }
}

/// Builds the common cover described by `blueprint`.
///
/// Ids of `h` follow lexicographic tuple order. With `component_only`, `h`
/// is cut down to the connected component of vertex 0 and renumbered.
pub fn build_common_cover(
    g: &ColoredGraph,
    g2: &ColoredGraph,
    decision: &Decision,
    blueprint: &CoverBlueprint,
    component_only: bool,
) -> Result<CommonCover, CoverError> {
    let data = decision.data.as_ref().filter(|_| decision.exists).ok_or(CoverError::NoCommonCover)?;
    blueprint.check(data)?;
    let rc = &decision.coloring;
    let c = &data.color_graph;
    let (ni, nk) = (c.vertex_count(), c.dart_count());
    let vx = [ClassIndex::new(rc.vertex_classes(0), ni), ClassIndex::new(rc.vertex_classes(1), ni)];
    let dx = [ClassIndex::new(rc.dart_classes(0), nk), ClassIndex::new(rc.dart_classes(1), nk)];

    let mut vbase = vec![0usize; ni + 1];
    for i in 0..ni {
        let block = vx[0].members[i].len() * vx[1].members[i].len() * blueprint.a[i];
        vbase[i + 1] = vbase[i] + block;
    }
    let mut dbase = vec![0usize; nk + 1];
    for k in 0..nk {
        let block = dx[0].members[k].len() * dx[1].members[k].len() * blueprint.b[k];
        dbase[k + 1] = dbase[k] + block;
    }
    let vertex_id = |i: usize, v: Vertex, v2: Vertex, alpha: usize| {
        vbase[i] + (vx[0].rank[v] * vx[1].members[i].len() + vx[1].rank[v2]) * blueprint.a[i] + alpha
    };
    let dart_id = |k: usize, e: Dart, e2: Dart, beta: usize| {
        dbase[k] + (dx[0].rank[e] * dx[1].members[k].len() + dx[1].rank[e2]) * blueprint.b[k] + beta
    };

    let mut vertices = Vec::with_capacity(vbase[ni]);
    for i in 0..ni {
        for &v in &vx[0].members[i] {
            for &v2 in &vx[1].members[i] {
                for alpha in 0..blueprint.a[i] {
                    vertices.push(CoverVertex { color: i, v, v2, alpha });
                }
            }
        }
    }
    let mut darts = Vec::with_capacity(dbase[nk]);
    let mut tail = Vec::with_capacity(dbase[nk]);
    let mut bar = Vec::with_capacity(dbase[nk]);
    for k in 0..nk {
        for &e in &dx[0].members[k] {
            for &e2 in &dx[1].members[k] {
                let p = blueprint.groups[k].div(blueprint.psi[0][e], blueprint.psi[1][e2]);
                for beta in 0..blueprint.b[k] {
                    let alpha = blueprint.phi[k][p * blueprint.b[k] + beta];
                    tail.push(vertex_id(c.d0(k), g.tail(e), g2.tail(e2), alpha));
                    bar.push(dart_id(c.bar(k), g.bar(e), g2.bar(e2), beta));
                    darts.push(CoverDart { color: k, e, e2, beta });
                }
            }
        }
    }
    debug_assert_eq!(vertices.len(), vbase[ni]);
    debug_assert_eq!(darts.len(), dbase[nk]);

    let vc = vertices.iter().map(|x| g.vertex_color(x.v)).collect();
    let dc = darts.iter().map(|x| g.dart_color(x.e)).collect();
    let h = ColoredGraph::with_colors(vc, tail, bar, dc);
    let to_g = GraphMap {
        vertex_map: vertices.iter().map(|x| x.v).collect(),
        dart_map: darts.iter().map(|x| x.e).collect(),
    };
    let to_g2 = GraphMap {
        vertex_map: vertices.iter().map(|x| x.v2).collect(),
        dart_map: darts.iter().map(|x| x.e2).collect(),
    };
    let full = CommonCover { h, to_g, to_g2, vertices, darts };
    if component_only && full.h.vertex_count() > 0 {
        Ok(full.component(0))
    } else {
        Ok(full)
    }
}

impl CommonCover {
    /// Restriction to the connected component of `w`.
    pub fn component(&self, w: Vertex) -> CommonCover {
        let (h, inc) = self.h.connected_component(w).expect("vertex of h");
        CommonCover {
            h,
            to_g: self.to_g.after(&inc),
            to_g2: self.to_g2.after(&inc),
            vertices: inc.vertex_map.iter().map(|&v| self.vertices[v]).collect(),
            darts: inc.dart_map.iter().map(|&e| self.darts[e]).collect(),
        }
    }
}

/// Decides, picks parameters, and builds the cover in one call.
pub fn construct(
    g: &ColoredGraph,
    g2: &ColoredGraph,
    policy: SPolicy,
    seed: Option<u64>,
    component_only: bool,
) -> Result<CommonCover, CoverError> {
    let decision = crate::refine::common_cover_exists(g, g2)?;
    let data = decision.data.as_ref().ok_or(CoverError::NoCommonCover)?;
    let params = cover_parameters(data, policy)?;
    let bp = make_blueprint(g, g2, &decision, &params, seed)?;
    build_common_cover(g, g2, &decision, &bp, component_only)
}
