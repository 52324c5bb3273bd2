//! Symmetry groups of a few polyhedra, acting on their corners, and the
//! ready-made symmetry-restricted data built from them.
//!
//! The full symmetry group of a convex polyhedron (rotations and
//! reflections) acts on the corners exactly as the automorphism group of its
//! edge skeleton, so the groups are enumerated as skeleton automorphisms.

use std::collections::BTreeMap;

use crate::graph::ColorGraph;
use crate::permgroup::{closure, Perm, PermGroup};
use crate::symres::{SymRestrictedData, VertexGroup};

/// Edge list of a named skeleton.
pub fn skeleton(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    match name {
        "cube" => {
            let mut e = Vec::new();
            for v in 0..8usize {
                for bit in [1, 2, 4] {
                    if v & bit == 0 {
                        e.push((v, v | bit));
                    }
                }
            }
            Some((8, e))
        }
        // generalized Petersen graph GP(10, 2)
        "dodecahedron" => {
            let mut e = Vec::new();
            for i in 0..10 {
                e.push((i, (i + 1) % 10));
                e.push((i, 10 + i));
                e.push((10 + i, 10 + (i + 2) % 10));
            }
            Some((20, e))
        }
        // apex 0, upper ring 1..=5, lower ring 6..=10, apex 11
        "icosahedron" => {
            let mut e = Vec::new();
            for j in 0..5 {
                let (u, u_next) = (1 + j, 1 + (j + 1) % 5);
                let (l, l_next) = (6 + j, 6 + (j + 1) % 5);
                e.extend([(0, u), (u, u_next), (u, l), (u, l_next), (l, l_next), (11, l)]);
            }
            Some((12, e))
        }
        "tetrahedron" => Some((4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        _ => None,
    }
}

/// All automorphisms of a small simple graph, by backtracking over vertices in
/// breadth-first order.
fn automorphisms(n: usize, edges: &[(usize, usize)]) -> Vec<Perm> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, w) in edges {
        adj[u][w] = true;
        adj[w][u] = true;
    }
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut j = 0;
    while j < order.len() {
        let v = order[j];
        for w in 0..n {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        j += 1;
    }
    assert_eq!(order.len(), n, "skeleton must be connected");

    fn rec(depth: usize, order: &[usize], adj: &[Vec<bool>], img: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let n = adj.len();
        if depth == n {
            out.push(Perm::from_images(img.clone()).expect("bijection"));
            return;
        }
        let v = order[depth];
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let ok = order[..depth].iter().all(|&u| adj[u][v] == adj[img[u]][cand]);
            if ok {
                img[v] = cand;
                used[cand] = true;
                rec(depth + 1, order, adj, img, used, out);
                used[cand] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, &order, &adj, &mut vec![0; n], &mut vec![false; n], &mut out);
    out
}

/// Full symmetry group of a named polyhedron acting on its corners.
pub fn symmetry_group(name: &str) -> Option<PermGroup> {
    let (n, edges) = skeleton(name)?;
    let all = automorphisms(n, &edges);
    let full = closure(n, all).expect("polyhedral groups are small");
    let gens = full.small_generating_set();
    Some(closure(n, gens).expect("same group"))
}

/// Two vertex colors joined by one edge `0: 0 -> 1`, `1: 1 -> 0`, with the
/// named polyhedral groups at the two ends.
pub fn single_edge_data(first: &str, second: &str) -> Option<SymRestrictedData> {
    let c = ColorGraph::new(2, vec![0, 1], vec![1, 0]).expect("single edge");
    let g0 = symmetry_group(first)?;
    let g1 = symmetry_group(second)?;
    Some(SymRestrictedData {
        color_graph: c,
        groups: vec![
            VertexGroup::new(g0, BTreeMap::from([(0, 0)])),
            VertexGroup::new(g1, BTreeMap::from([(0, 1)])),
        ],
    })
}

/// Dodecahedra joined corner to corner with cubes.
pub fn dodeca_cube() -> SymRestrictedData {
    single_edge_data("dodecahedron", "cube").expect("known polyhedra")
}

/// Icosahedra joined corner to corner with cubes.
pub fn icosa_cube() -> SymRestrictedData {
    single_edge_data("icosahedron", "cube").expect("known polyhedra")
}
