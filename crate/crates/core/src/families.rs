//! Named graph families and random test-pair generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ColoredGraph, GraphMap, Vertex};

/// Path on `n` vertices: `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> ColoredGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    ColoredGraph::from_edges(n, &edges)
}

/// Cycle on `n >= 1` vertices; `n = 1` is a single loop, `n = 2` a double edge.
pub fn cycle(n: usize) -> ColoredGraph {
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    ColoredGraph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> ColoredGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            edges.push((u, w));
        }
    }
    ColoredGraph::from_edges(n, &edges)
}

/// `K_{p,q}` with parts `0..p` and `p..p+q`.
pub fn complete_bipartite(p: usize, q: usize) -> ColoredGraph {
    let mut edges = Vec::new();
    for u in 0..p {
        for w in 0..q {
            edges.push((u, p + w));
        }
    }
    ColoredGraph::from_edges(p + q, &edges)
}

/// A random connected multigraph: a random spanning tree on `n` vertices plus
/// `extra` random edges (loops and parallel edges allowed).
pub fn random_connected(n: usize, extra: usize, seed: u64) -> ColoredGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    ColoredGraph::from_edges(n, &edges)
}

/// Permutation-voltage lift of `base`.
///
/// `voltages[j]` is a permutation of `0..degree` attached to the geometric
/// edge whose smaller dart id is the `j`-th such dart. Lifted vertex `(v, x)`
/// has id `v * degree + x` and lifted dart `(e, x)` has id `e * degree + x`;
/// for `e < bar(e)` the lift satisfies `bar(e, x) = (bar(e), sigma(x))`.
/// The base must be half-edge free. Returns the full lift and its projection.
pub fn voltage_lift(base: &ColoredGraph, degree: usize, voltages: &[Vec<usize>]) -> (ColoredGraph, GraphMap) {
    let forward: Vec<_> = base.darts().filter(|&e| e < base.bar(e)).collect();
    assert_eq!(forward.len(), voltages.len(), "one voltage per geometric edge");
    let m = base.dart_count() * degree;
    let mut tail = vec![0; m];
    let mut bar = vec![0; m];
    for e in base.darts() {
        for x in 0..degree {
            tail[e * degree + x] = base.tail(e) * degree + x;
        }
    }
    for (sigma, &e) in voltages.iter().zip(&forward) {
        let eb = base.bar(e);
        for x in 0..degree {
            let y = sigma[x];
            bar[e * degree + x] = eb * degree + y;
            bar[eb * degree + y] = e * degree + x;
        }
    }
    let vc = (0..base.vertex_count() * degree).map(|w| base.vertex_color(w / degree)).collect();
    let dc = (0..m).map(|d| base.dart_color(d / degree)).collect();
    let lift = ColoredGraph::with_colors(vc, tail, bar, dc);
    let proj = GraphMap {
        vertex_map: (0..lift.vertex_count()).map(|w| w / degree).collect(),
        dart_map: (0..m).map(|d| d / degree).collect(),
    };
    (lift, proj)
}

/// A random connected finite cover of `base` of degree at most `degree`:
/// a uniformly random voltage assignment, then the component of vertex 0.
pub fn random_lift(base: &ColoredGraph, degree: usize, rng: &mut impl Rng) -> (ColoredGraph, GraphMap) {
    let edges = base.darts().filter(|&e| e < base.bar(e)).count();
    let voltages: Vec<Vec<usize>> = (0..edges)
        .map(|_| {
            let mut p: Vec<usize> = (0..degree).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let (lift, proj) = voltage_lift(base, degree, &voltages);
    let (comp, inc) = lift.connected_component(0).expect("lift has vertex 0");
    (comp, proj.after(&inc))
}

/// `count` random connected lifts of `base`, each of degree `degree`, seeded.
pub fn gen_corpus(base: &ColoredGraph, degree: usize, count: usize, seed: u64) -> Vec<ColoredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_lift(base, degree, &mut rng).0).collect()
}

/// Relabels vertices by `perm` (old id `v` becomes `perm[v]`); darts keep ids.
pub fn relabel_vertices(g: &ColoredGraph, perm: &[Vertex]) -> ColoredGraph {
    let mut vc = vec![None; g.vertex_count()];
    for v in g.vertices() {
        vc[perm[v]] = g.vertex_color(v);
    }
    let tail = g.darts().map(|e| perm[g.tail(e)]).collect();
    let bar = g.darts().map(|e| g.bar(e)).collect();
    ColoredGraph::with_colors(vc, tail, bar, g.dart_colors().to_vec())
}
