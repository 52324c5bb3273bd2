//! Truncated universal covers and rooted-tree canonical codes.
//!
//! This is the independent cross-check for [`super::common_cover_exists`]:
//! two connected graphs have a common cover iff their universal covers are
//! isomorphic, which is tested here on finite truncations using exact
//! rooted-tree canonical forms.

use std::collections::{HashMap, VecDeque};

use crate::graph::{Color, ColoredGraph, Dart, GraphMap, Vertex};

/// A finite ball of the universal cover, rooted at tree vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedTree {
    pub tree: ColoredGraph,
    pub projection: GraphMap,
}

/// Unfolds the non-backtracking walks from `root` of length at most `depth`.
///
/// Tree vertex 0 is the root. Children are created in breadth-first order,
/// following darts in ascending id order; each tree edge gets darts
/// `2j` (parent to child) and `2j + 1` (child to parent).
pub fn truncated_universal_cover(g: &ColoredGraph, root: Vertex, depth: usize) -> UnfoldedTree {
    let stars = g.stars();
    let mut vertex_map = vec![root];
    let mut tail = Vec::new();
    let mut bar = Vec::new();
    let mut dart_map = Vec::new();
    let mut queue: VecDeque<(usize, Option<Dart>, usize)> = VecDeque::from([(0, None, 0)]);
    while let Some((t, incoming, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        let v = vertex_map[t];
        for &f in &stars[v] {
            if incoming.is_some_and(|e| g.bar(e) == f) {
                continue;
            }
            let child = vertex_map.len();
            vertex_map.push(g.head(f));
            let j = tail.len();
            tail.extend([t, child]);
            bar.extend([j + 1, j]);
            dart_map.extend([f, g.bar(f)]);
            queue.push_back((child, Some(f), d + 1));
        }
    }
    let vc = vertex_map.iter().map(|&v| g.vertex_color(v)).collect();
    let dc = dart_map.iter().map(|&e| g.dart_color(e)).collect();
    UnfoldedTree {
        tree: ColoredGraph::with_colors(vc, tail, bar, dc),
        projection: GraphMap { vertex_map, dart_map },
    }
}

fn color_str(c: Option<Color>) -> String {
    c.map_or_else(|| "-".to_string(), |c| c.to_string())
}

/// Canonical string of a finite colored tree rooted at `root`.
///
/// Two rooted colored trees get equal codes iff they are isomorphic as rooted
/// colored trees. Children are sorted by their codes.
pub fn canonical_code(tree: &ColoredGraph, root: Vertex) -> String {
    fn rec(t: &ColoredGraph, stars: &[Vec<Dart>], v: Vertex, from: Option<Dart>) -> String {
        let mut kids: Vec<String> = stars[v]
            .iter()
            .filter(|&&f| from.is_none_or(|e| t.bar(e) != f))
            .map(|&f| {
                format!(
                    "{}/{}{}",
                    color_str(t.dart_color(f)),
                    color_str(t.dart_color(t.bar(f))),
                    rec(t, stars, t.head(f), Some(f))
                )
            })
            .collect();
        kids.sort();
        format!("({}{})", color_str(t.vertex_color(v)), kids.concat())
    }
    rec(tree, &tree.stars(), root, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Root { color: Option<Color>, children: Vec<u32> },
    Branch { color: Option<Color>, dart: Option<Color>, back: Option<Color>, children: Vec<u32> },
}

/// Interned canonical codes of truncated universal covers.
///
/// The subtree hanging off a walk that ends with dart `e` at remaining depth
/// `d` depends only on `(e, d)`, so codes are computed level by level without
/// materializing the trees. A single table can be shared across graphs, making
/// codes comparable between them.
#[derive(Debug, Default)]
pub struct UnfoldingCodes {
    ids: HashMap<Node, u32>,
}

impl UnfoldingCodes {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: Node) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(node).or_insert(next)
    }

    /// Code of the depth-`depth` ball around each vertex, indexed by vertex.
    pub fn root_codes(&mut self, g: &ColoredGraph, depth: usize) -> Vec<u32> {
        self.root_codes_all_depths(g, depth).pop().expect("at least depth 0")
    }

    /// `out[d][v]` is the code of the depth-`d` ball around `v`, for
    /// `d = 0..=max_depth`.
    pub fn root_codes_all_depths(&mut self, g: &ColoredGraph, max_depth: usize) -> Vec<Vec<u32>> {
        let stars = g.stars();
        let mut out = Vec::with_capacity(max_depth + 1);
        // below[e] = code of the subtree entered through dart e, one level shorter
        let mut below: Vec<u32> = Vec::new();
        for d in 0..=max_depth {
            let roots = g
                .vertices()
                .map(|v| {
                    let mut children: Vec<u32> =
                        if d == 0 { Vec::new() } else { stars[v].iter().map(|&f| below[f]).collect() };
                    children.sort_unstable();
                    self.intern(Node::Root { color: g.vertex_color(v), children })
                })
                .collect();
            out.push(roots);
            if d == max_depth {
                break;
            }
            below = g
                .darts()
                .map(|e| {
                    let w = g.head(e);
                    let mut children: Vec<u32> = if d == 0 {
                        Vec::new()
                    } else {
                        stars[w].iter().filter(|&&f| f != g.bar(e)).map(|&f| below[f]).collect()
                    };
                    children.sort_unstable();
                    self.intern(Node::Branch {
                        color: g.vertex_color(w),
                        dart: g.dart_color(e),
                        back: g.dart_color(g.bar(e)),
                        children,
                    })
                })
                .collect();
        }
        out
    }
}

/// True iff some root pair has isomorphic truncated universal covers at depth
/// `|V(g)| + |V(g2)|`.
pub fn same_universal_cover_oracle(g: &ColoredGraph, g2: &ColoredGraph) -> bool {
    let depth = g.vertex_count() + g2.vertex_count();
    let mut codes = UnfoldingCodes::new();
    let a = codes.root_codes(g, depth);
    let b = codes.root_codes(g2, depth);
    a.iter().any(|x| b.contains(x))
}
