use std::fmt;

use super::CoverError;
use crate::graph::{ColoredGraph, Dart, GraphMap, Vertex};
use crate::refine::joint_refinement;

/// A reason a map fails to be a covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    MapSize,
    VertexOutOfRange { vertex: Vertex },
    DartOutOfRange { dart: Dart },
    TailNotPreserved { dart: Dart },
    BarNotPreserved { dart: Dart },
    VertexColor { vertex: Vertex },
    DartColor { dart: Dart },
    RefinedColor { vertex: Vertex },
    /// The dart map is not a bijection from the star of `vertex` onto the
    /// star of its image.
    StarNotBijective { vertex: Vertex },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::MapSize => write!(f, "map sizes do not match the source graph"),
            Defect::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} maps outside the target"),
            Defect::DartOutOfRange { dart } => write!(f, "dart {dart} maps outside the target"),
            Defect::TailNotPreserved { dart } => write!(f, "tail not preserved at dart {dart}"),
            Defect::BarNotPreserved { dart } => write!(f, "bar not preserved at dart {dart}"),
            Defect::VertexColor { vertex } => write!(f, "color not preserved at vertex {vertex}"),
            Defect::DartColor { dart } => write!(f, "color not preserved at dart {dart}"),
            Defect::RefinedColor { vertex } => write!(f, "refined color not preserved at vertex {vertex}"),
            Defect::StarNotBijective { vertex } => write!(f, "star of vertex {vertex} is not mapped bijectively"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoveringReport {
    pub defects: Vec<Defect>,
}

impl CoveringReport {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks that `p: h -> g` is a covering map: a color-preserving graph
/// homomorphism that maps every star of `h` bijectively onto a star of `g`.
///
/// Each kind of defect is reported at its first offending vertex or dart.
pub fn verify_covering(h: &ColoredGraph, g: &ColoredGraph, p: &GraphMap) -> CoveringReport {
    let mut defects = Vec::new();
    if p.vertex_map.len() != h.vertex_count() || p.dart_map.len() != h.dart_count() {
        return CoveringReport { defects: vec![Defect::MapSize] };
    }
    if let Some(vertex) = h.vertices().find(|&w| p.vertex_map[w] >= g.vertex_count()) {
        defects.push(Defect::VertexOutOfRange { vertex });
    }
    if let Some(dart) = h.darts().find(|&f| p.dart_map[f] >= g.dart_count()) {
        defects.push(Defect::DartOutOfRange { dart });
    }
    if !defects.is_empty() {
        return CoveringReport { defects };
    }
    let pv = |w: Vertex| p.vertex_map[w];
    let pd = |f: Dart| p.dart_map[f];

    if let Some(dart) = h.darts().find(|&f| g.tail(pd(f)) != pv(h.tail(f))) {
        defects.push(Defect::TailNotPreserved { dart });
    }
    if let Some(dart) = h.darts().find(|&f| g.bar(pd(f)) != pd(h.bar(f))) {
        defects.push(Defect::BarNotPreserved { dart });
    }
    if let Some(vertex) = h.vertices().find(|&w| h.vertex_color(w) != g.vertex_color(pv(w))) {
        defects.push(Defect::VertexColor { vertex });
    }
    if let Some(dart) = h.darts().find(|&f| h.dart_color(f) != g.dart_color(pd(f))) {
        defects.push(Defect::DartColor { dart });
    }

    let g_stars = g.stars();
    let mut hits = vec![0u32; g.dart_count()];
    for (w, star) in h.stars().iter().enumerate() {
        let target = &g_stars[pv(w)];
        let mut ok = star.len() == target.len();
        for &f in star {
            hits[pd(f)] += 1;
        }
        ok &= target.iter().all(|&e| hits[e] == 1);
        for &f in star {
            hits[pd(f)] = 0;
        }
        if !ok {
            defects.push(Defect::StarNotBijective { vertex: w });
            break;
        }
    }

    if defects.is_empty() {
        // A covering preserves refined colors; a failure here means the
        // colorings themselves disagree.
        match joint_refinement(h, Some(g)) {
            Ok(rc) => {
                if let Some(vertex) = h.vertices().find(|&w| rc.vertex_class(0, w) != rc.vertex_class(1, pv(w))) {
                    defects.push(Defect::RefinedColor { vertex });
                }
            }
            Err(_) => defects.push(Defect::VertexColor { vertex: 0 }),
        }
    }
    CoveringReport { defects }
}

/// The common size of the fibers of `p` over the vertices of `g`.
pub fn covering_degree(h: &ColoredGraph, g: &ColoredGraph, p: &GraphMap) -> Result<usize, CoverError> {
    let mut fiber = vec![0usize; g.vertex_count()];
    for w in h.vertices() {
        fiber[p.vertex_map[w]] += 1;
    }
    let first = fiber.first().copied().unwrap_or(0);
    match fiber.iter().position(|&x| x != first) {
        Some(vertex) => Err(CoverError::UnequalFibers { first, other: fiber[vertex], vertex }),
        None => Ok(first),
    }
}
