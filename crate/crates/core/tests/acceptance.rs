//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints one PASS/FAIL line, and exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphcover::families::{complete, complete_bipartite, cycle, path, random_connected, random_lift};
use graphcover::graph::{ColorGraph, ColoredGraph, GraphMap};
use graphcover::leighton::{
    build_common_cover, construct, cover_parameters, make_blueprint, verify_covering, CommonCover, CoverParameters,
    EdgeGroup, GroupTable, SPolicy,
};
use graphcover::permgroup::{are_isomorphic, closure, direct_product, Perm, PermGroup};
use graphcover::polyhedra::{dodeca_cube, icosa_cube, symmetry_group};
use graphcover::refine::{
    common_cover_exists, joint_refinement, same_universal_cover_oracle, ColorGraphData, Decision, UnfoldingCodes,
};
use graphcover::symres::{
    check_cycle_condition, check_weak_equivariance, edge_stabilizers, reduce_to_balanced, validate_symdata,
    SymRestrictedData, VertexGroup,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

// ---------------------------------------------------------------------------
// independent tallies

/// Fiber size of `p` over every vertex of `g`, counted directly.
fn fiber_sizes(h: &ColoredGraph, g: &ColoredGraph, p: &GraphMap) -> Vec<usize> {
    let mut n = vec![0; g.vertex_count()];
    for w in h.vertices() {
        n[p.vertex_map[w]] += 1;
    }
    n
}

/// Checks the counting identities and the parameter residuals for one
/// constructed cover, recomputing every count from the graphs.
fn check_identities(
    g: &ColoredGraph,
    g2: &ColoredGraph,
    decision: &Decision,
    p: &CoverParameters,
    cover: &CommonCover,
) -> Result<(), String> {
    let data: &ColorGraphData = decision.data.as_ref().ok_or("no color data")?;
    let c = &data.color_graph;
    let rc = &decision.coloring;
    let (ni, nk) = (c.vertex_count(), c.dart_count());
    let mut n = [vec![0i128; ni], vec![0i128; ni]];
    let mut m = [vec![0i128; nk], vec![0i128; nk]];
    let mut r = vec![None::<i128>; nk];
    for (gi, graph) in [g, g2].into_iter().enumerate() {
        for v in graph.vertices() {
            n[gi][rc.vertex_class(gi, v)] += 1;
            let mut local = vec![0i128; nk];
            for e in graph.star(v).unwrap() {
                local[rc.dart_class(gi, e)] += 1;
            }
            for k in c.darts_at(rc.vertex_class(gi, v)) {
                match r[k] {
                    None => r[k] = Some(local[k]),
                    Some(x) => ensure!(x == local[k], "r_{k} not constant"),
                }
            }
        }
        for e in graph.darts() {
            m[gi][rc.dart_class(gi, e)] += 1;
        }
    }
    let r: Vec<i128> = r.into_iter().map(|x| x.unwrap_or(0)).collect();
    let a: Vec<i128> = p.a.iter().map(|&x| x as i128).collect();
    let b: Vec<i128> = p.b.iter().map(|&x| x as i128).collect();
    for k in 0..nk {
        let (i, j, kb) = (c.d0(k), c.d1(k), c.bar(k));
        let residuals = [b[k] * r[k] - a[i], b[kb] * r[kb] - a[j], b[k] - b[kb]];
        ensure!(residuals == [0, 0, 0], "parameter residuals {residuals:?} at dart class {k}");
    }
    let v_expected: i128 = (0..ni).map(|i| n[0][i] * n[1][i] * a[i]).sum();
    let d_expected: i128 = (0..nk).map(|k| m[0][k] * m[1][k] * b[k]).sum();
    ensure!(cover.h.vertex_count() as i128 == v_expected, "|V(H)| = {} != {v_expected}", cover.h.vertex_count());
    ensure!(cover.h.dart_count() as i128 == d_expected, "|darts(H)| = {} != {d_expected}", cover.h.dart_count());
    // fibers: over a vertex of class i of g, H has n'_i a_i vertices
    for (gi, graph, map) in [(0, g, &cover.to_g), (1, g2, &cover.to_g2)] {
        let fib = fiber_sizes(&cover.h, graph, map);
        for v in graph.vertices() {
            let i = rc.vertex_class(gi, v);
            ensure!(fib[v] as i128 == n[1 - gi][i] * a[i], "fiber over vertex {v} of graph {gi}");
        }
    }
    Ok(())
}

fn build_and_check(g: &ColoredGraph, g2: &ColoredGraph, policy: SPolicy, seed: Option<u64>) -> Result<CommonCover, String> {
    let decision = common_cover_exists(g, g2).map_err(|e| e.to_string())?;
    ensure!(decision.exists, "no common cover reported");
    let p = cover_parameters(decision.data.as_ref().unwrap(), policy).map_err(|e| e.to_string())?;
    let bp = make_blueprint(g, g2, &decision, &p, seed).map_err(|e| e.to_string())?;
    let cover = build_common_cover(g, g2, &decision, &bp, false).map_err(|e| e.to_string())?;
    verify_both(g, g2, &cover)?;
    check_identities(g, g2, &decision, &p, &cover)?;
    Ok(cover)
}

fn verify_both(g: &ColoredGraph, g2: &ColoredGraph, cover: &CommonCover) -> Result<(), String> {
    let r1 = verify_covering(&cover.h, g, &cover.to_g);
    let r2 = verify_covering(&cover.h, g2, &cover.to_g2);
    ensure!(r1.is_ok(), "projection to first graph: {:?}", r1.defects);
    ensure!(r2.is_ok(), "projection to second graph: {:?}", r2.defects);
    Ok(())
}

/// Connected components as vertex lists, by breadth-first search.
fn components(h: &ColoredGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; h.vertex_count()];
    let mut out = Vec::new();
    for s in h.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut j = 0;
        while j < comp.len() {
            for e in h.star(comp[j]).unwrap() {
                let w = h.head(e);
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            j += 1;
        }
        out.push(comp);
    }
    out
}

// ---------------------------------------------------------------------------
// exhaustive corpus

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, w) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, w));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// Lexicographically least relabeled edge list: a complete isomorphism
/// invariant for multigraphs.
fn canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut es: Vec<(usize, usize)> =
                edges.iter().map(|&(u, w)| (p[u].min(p[w]), p[u].max(p[w]))).collect();
            es.sort_unstable();
            es
        })
        .min()
        .unwrap()
}

/// Every connected multigraph (loops and parallel edges allowed) with at most
/// `max_v` vertices and at most `max_e` edges, one per isomorphism class.
fn multigraph_corpus(max_v: usize, max_e: usize) -> Vec<ColoredGraph> {
    let mut out = Vec::new();
    for n in 1..=max_v {
        let kinds: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |w| (u, w))).collect();
        let perms = permutations(n);
        let mut seen = HashSet::new();
        for e in 0..=max_e {
            // nondecreasing index sequences enumerate the edge multisets
            let mut idx = vec![0usize; e];
            loop {
                let edges: Vec<(usize, usize)> = idx.iter().map(|&t| kinds[t]).collect();
                if connected(n, &edges) {
                    let canon = canonical(&edges, &perms);
                    if seen.insert(canon.clone()) {
                        out.push(ColoredGraph::from_edges(n, &canon));
                    }
                }
                let Some(j) = (0..e).rev().find(|&j| idx[j] + 1 < kinds.len()) else { break };
                idx[j] += 1;
                for l in j + 1..e {
                    idx[l] = idx[j];
                }
            }
        }
    }
    out
}

/// Connected simple graphs on exactly `n` vertices, one per isomorphism class.
fn simple_graphs(n: usize) -> Vec<ColoredGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&j| mask >> j & 1 == 1).map(|j| pairs[j]).collect();
        if connected(n, &edges) {
            let canon = canonical(&edges, &perms);
            if seen.insert(canon.clone()) {
                out.push(ColoredGraph::from_edges(n, &canon));
            }
        }
    }
    out
}

fn corpus() -> &'static Vec<ColoredGraph> {
    static CORPUS: OnceLock<Vec<ColoredGraph>> = OnceLock::new();
    CORPUS.get_or_init(|| multigraph_corpus(5, 8))
}

// ---------------------------------------------------------------------------
// brute-force coarsest equitable partition

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    fn rec(j: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if j == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(j + 1, n, cur, max.max(b), out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    rec(1, n, &mut cur, 0, &mut out);
    out
}

/// Equitable: vertices in one block send equally many darts into each block.
fn equitable(g: &ColoredGraph, block: &[usize]) -> bool {
    let blocks = block.iter().max().map_or(0, |&b| b + 1);
    let profile = |v: usize| {
        let mut c = vec![0; blocks];
        for e in g.star(v).unwrap() {
            c[block[g.head(e)]] += 1;
        }
        c
    };
    let mut rep: Vec<Option<Vec<usize>>> = vec![None; blocks];
    g.vertices().all(|v| {
        let p = profile(v);
        let slot = &mut rep[block[v]];
        match slot {
            None => {
                *slot = Some(p);
                true
            }
            Some(q) => *q == p,
        }
    })
}

fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    (0..fine.len()).all(|x| (0..fine.len()).all(|y| fine[x] != fine[y] || coarse[x] == coarse[y]))
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    refines(a, b) && refines(b, a)
}

// ---------------------------------------------------------------------------
// criteria

fn criterion_1() -> Outcome {
    let mut fixed = vec![(path(2), path(2)), (cycle(3), cycle(6)), (complete(4), complete_bipartite(3, 3))];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1eed);
    let mut largest = 0;
    for j in 0..200u64 {
        let n = rng.gen_range(1..=8);
        let extra = rng.gen_range(0..=4);
        let base = random_connected(n, extra, j);
        let (g, _) = random_lift(&base, rng.gen_range(1..=4), &mut rng);
        let (g2, _) = random_lift(&base, rng.gen_range(1..=4), &mut rng);
        fixed.push((g, g2));
    }
    for (j, (g, g2)) in fixed.iter().enumerate() {
        let policy = if j % 2 == 0 { SPolicy::FirstGraph } else { SPolicy::BothGraphs };
        let cover = construct(g, g2, policy, Some(j as u64), false).map_err(|e| format!("pair {j}: {e}"))?;
        verify_both(g, g2, &cover).map_err(|e| format!("pair {j}: {e}"))?;
        largest = largest.max(cover.h.vertex_count());
    }
    Ok(format!("{} pairs constructed and verified on both projections; largest |V(H)| = {largest}", fixed.len()))
}

fn criterion_2() -> Outcome {
    let (k4, k33) = (complete(4), complete_bipartite(3, 3));
    let cover = build_and_check(&k4, &k33, SPolicy::FirstGraph, None)?;
    let sizes = (cover.h.vertex_count(), cover.h.dart_count());
    ensure!(sizes == (72, 216), "(K4, K3,3) sizes {sizes:?}");
    let f1 = fiber_sizes(&cover.h, &k4, &cover.to_g);
    let f2 = fiber_sizes(&cover.h, &k33, &cover.to_g2);
    ensure!(f1.iter().all(|&x| x == 18), "fibers over K4 {f1:?}");
    ensure!(f2.iter().all(|&x| x == 12), "fibers over K3,3 {f2:?}");

    let (c3, c6) = (cycle(3), cycle(6));
    let cover = build_and_check(&c3, &c6, SPolicy::FirstGraph, None)?;
    let sizes = (cover.h.vertex_count(), cover.h.dart_count());
    ensure!(sizes == (36, 72), "(C3, C6) sizes {sizes:?}");
    let comps = components(&cover.h);
    for comp in &comps {
        ensure!(comp.iter().all(|&v| cover.h.degree(v) == 2), "component is not 2-regular");
        ensure!(comp.len() % 6 == 0, "cycle of length {}", comp.len());
    }

    let p2 = path(2);
    let cover = construct(&p2, &p2, SPolicy::FirstGraph, None, true).map_err(|e| e.to_string())?;
    verify_both(&p2, &p2, &cover)?;
    let h = &cover.h;
    let is_p2 = h.vertex_count() == 2 && h.dart_count() == 2 && h.tail(0) != h.tail(1) && h.bar(0) == 1;
    ensure!(is_p2, "component is not P2");
    Ok(format!("K4/K3,3 72/216 degrees 18,12; C3/C6 36/72 in {} cycles; P2/P2 component P2", comps.len()))
}

fn criterion_3() -> Outcome {
    // every construction of criteria 1, 2 and 4, rebuilt with explicit checks
    let mut runs = 0;
    let mut pairs = vec![(path(2), path(2)), (cycle(3), cycle(6)), (complete(4), complete_bipartite(3, 3))];
    pairs.push((complete(7), complete_bipartite(6, 6)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x1eed);
    for j in 0..200u64 {
        let n = rng.gen_range(1..=8);
        let extra = rng.gen_range(0..=4);
        let base = random_connected(n, extra, j);
        let (g, _) = random_lift(&base, rng.gen_range(1..=4), &mut rng);
        let (g2, _) = random_lift(&base, rng.gen_range(1..=4), &mut rng);
        pairs.push((g, g2));
    }
    for (j, (g, g2)) in pairs.iter().enumerate() {
        for policy in [SPolicy::FirstGraph, SPolicy::BothGraphs] {
            build_and_check(g, g2, policy, Some(j as u64)).map_err(|e| format!("pair {j}: {e}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs: vertex and dart counts, fibers and all residuals exact"))
}

/// Multiplication table of the symmetric group on three points.
fn s3_table() -> GroupTable {
    let s3 = PermGroup::symmetric(3).unwrap();
    let els = s3.elements();
    let mul = els.iter().map(|x| els.iter().map(|y| s3.index_of(&x.compose(y)).unwrap()).collect()).collect();
    GroupTable::new(mul).unwrap()
}

fn criterion_4() -> Outcome {
    let (k4, k33) = (complete(4), complete_bipartite(3, 3));
    for seed in 0..20 {
        build_and_check(&k4, &k33, SPolicy::FirstGraph, Some(seed)).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    let (k7, k66) = (complete(7), complete_bipartite(6, 6));
    let decision = common_cover_exists(&k7, &k66).map_err(|e| e.to_string())?;
    let data = decision.data.as_ref().ok_or("K7 and K6,6 should share a cover")?;
    let p = cover_parameters(data, SPolicy::FirstGraph).map_err(|e| e.to_string())?;
    let mut bp = make_blueprint(&k7, &k66, &decision, &p, Some(5)).map_err(|e| e.to_string())?;
    let table = s3_table();
    ensure!(!table.is_abelian(), "S3 table is abelian");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..data.color_graph.dart_count() {
        ensure!(data.r[k] == 6, "r_{k} = {}", data.r[k]);
        let mut phi: Vec<usize> = (0..bp.a[data.color_graph.d0(k)]).collect();
        phi.shuffle(&mut rng);
        bp.set_edge_group(k, EdgeGroup::Table(table.clone()), phi).map_err(|e| e.to_string())?;
    }
    let cover = build_common_cover(&k7, &k66, &decision, &bp, false).map_err(|e| e.to_string())?;
    verify_both(&k7, &k66, &cover)?;
    check_identities(&k7, &k66, &decision, &p, &cover)?;
    Ok(format!(
        "20 seeds on K4/K3,3 verified; K7/K6,6 with S3 edge group: |V(H)| = {}, |darts(H)| = {}",
        cover.h.vertex_count(),
        cover.h.dart_count()
    ))
}

fn criterion_5() -> Outcome {
    let graphs = corpus();
    // root codes at depth 10 >= |V| + |V'| for every pair, with one shared
    // table, so code sets intersect exactly when the pairwise oracle says yes
    let mut codes = UnfoldingCodes::new();
    let sigs: Vec<BTreeSet<u32>> = graphs.iter().map(|g| codes.root_codes(g, 10).into_iter().collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..5000 {
        let (x, y) = (rng.gen_range(0..graphs.len()), rng.gen_range(0..graphs.len()));
        let by_sig = !sigs[x].is_disjoint(&sigs[y]);
        ensure!(by_sig == same_universal_cover_oracle(&graphs[x], &graphs[y]), "signature shortcut disagrees at {x}, {y}");
    }
    let (mut pairs, mut yes) = (0u64, 0u64);
    for x in 0..graphs.len() {
        for y in x..graphs.len() {
            let oracle = !sigs[x].is_disjoint(&sigs[y]);
            let decided = common_cover_exists(&graphs[x], &graphs[y]).map_err(|e| e.to_string())?.exists;
            ensure!(decided == oracle, "disagreement on graphs {x} and {y}: decision {decided}, oracle {oracle}");
            pairs += 1;
            yes += u64::from(decided);
        }
    }
    Ok(format!("{} graphs, {pairs} unordered pairs, {yes} with a common cover, 100% agreement", graphs.len()))
}

fn criterion_6() -> Outcome {
    let mut graphs: Vec<ColoredGraph> = corpus().clone();
    let six = simple_graphs(6);
    graphs.extend(six.iter().cloned());
    let partitions: Vec<Vec<Vec<usize>>> = (0..=6).map(set_partitions).collect();
    for (j, g) in graphs.iter().enumerate() {
        let n = g.vertex_count();
        let eq: Vec<&Vec<usize>> = partitions[n].iter().filter(|p| equitable(g, p)).collect();
        let coarsest = eq.iter().min_by_key(|p| p.iter().max().map_or(0, |&b| b + 1)).ok_or("no equitable partition")?;
        ensure!(eq.iter().all(|p| refines(p, coarsest)), "graph {j}: no unique coarsest equitable partition");
        let rc = joint_refinement(g, None).map_err(|e| e.to_string())?;
        ensure!(same_partition(rc.vertex_classes(0), coarsest), "graph {j}: vertex classes differ from brute force");
        // dart classes are exactly the (tail class, head class) pairs
        let pairs: Vec<usize> = {
            let mut ids = BTreeMap::new();
            g.darts()
                .map(|e| {
                    let key = (coarsest[g.tail(e)], coarsest[g.head(e)]);
                    let next = ids.len();
                    *ids.entry(key).or_insert(next)
                })
                .collect()
        };
        ensure!(same_partition(rc.dart_classes(0), &pairs), "graph {j}: dart classes differ from brute force");
    }
    Ok(format!("{} graphs ({} on six vertices) match the brute-force coarsest equitable partition", graphs.len(), six.len()))
}

/// Sorted element orders.
fn element_orders(g: &PermGroup) -> Vec<usize> {
    let mut o: Vec<usize> = g.elements().iter().map(Perm::order).collect();
    o.sort_unstable();
    o
}

fn criterion_7() -> Outcome {
    let dc = dodeca_cube();
    ensure!(validate_symdata(&dc).is_empty(), "dodecahedron/cube data invalid");
    let orders: Vec<usize> = dc.groups.iter().map(|g| g.group.order()).collect();
    ensure!(orders == [120, 48], "group orders {orders:?}");
    let rep = edge_stabilizers(&dc).map_err(|e| e.to_string())?;
    let s3 = PermGroup::symmetric(3).unwrap();
    for s in &rep.stabilizers {
        // orbit-stabilizer: 120 / 20 corners and 48 / 8 corners
        ensure!(s.group.order() == 6, "stabilizer of order {}", s.group.order());
        ensure!(!s.group.is_abelian(), "stabilizer is abelian");
        ensure!(element_orders(&s.group) == [1, 2, 2, 2, 3, 3], "element orders of a dihedral group of order 6");
        ensure!(are_isomorphic(&s.group, &s3), "stabilizer not isomorphic to the dihedral group of order 6");
    }
    ensure!(rep.all_balanced(), "dodecahedron/cube is not balanced");

    let ic = icosa_cube();
    let rep = edge_stabilizers(&ic).map_err(|e| e.to_string())?;
    let orders: Vec<usize> = rep.stabilizers.iter().map(|s| s.group.order()).collect();
    ensure!(orders == [10, 6], "icosahedron/cube stabilizer orders {orders:?}");
    ensure!(!rep.all_balanced(), "icosahedron/cube reported balanced");

    let mut reduced_orders = Vec::new();
    for d in [&dc, &ic] {
        let red = reduce_to_balanced(d).map_err(|e| e.to_string())?;
        ensure!(validate_symdata(&red).is_empty(), "reduced data invalid");
        let rep = edge_stabilizers(&red).map_err(|e| e.to_string())?;
        ensure!(rep.balance.iter().all(|b| b.balanced), "reduced data unbalanced");
        reduced_orders.push(rep.stabilizers.iter().map(|s| s.group.order()).collect::<Vec<_>>());
    }
    Ok(format!(
        "dodecahedron/cube stabilizers 6,6 nonabelian and balanced; icosahedron/cube 10 vs 6 unbalanced; reduced stabilizer orders {reduced_orders:?}"
    ))
}

/// One vertex color whose dart colors are half-edges labeling the orbits of
/// `group` in order of their least points.
fn one_vertex_data(group: PermGroup) -> SymRestrictedData {
    let orbits = group.orbits();
    let k = orbits.len();
    let c = ColorGraph::new(1, vec![0; k], (0..k).collect()).unwrap();
    let labels = orbits.iter().enumerate().map(|(j, o)| (o.min_point(), j)).collect();
    SymRestrictedData { color_graph: c, groups: vec![VertexGroup::new(group, labels)] }
}

fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, cycles).unwrap()
}

fn dihedral(n: usize) -> PermGroup {
    let rot: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
    closure(n, vec![Perm::from_images(rot).unwrap(), Perm::from_images(refl).unwrap()]).unwrap()
}

fn regular_cyclic(n: usize) -> PermGroup {
    PermGroup::cyclic(n)
}

/// Brute force over all of `group`: does some `gamma` satisfy
/// `mu delta = gamma delta gamma^-1 mu` for every `delta`?
fn weakly_equivariant_by_brute_force(group: &PermGroup, mu: &Perm) -> Option<Perm> {
    group
        .elements()
        .iter()
        .find(|gamma| {
            let gi = gamma.inverse();
            group.elements().iter().all(|delta| mu.compose(delta) == gamma.compose(delta).compose(&gi).compose(mu))
        })
        .cloned()
}

fn all_perms(n: usize) -> Vec<Perm> {
    permutations(n).into_iter().map(|p| Perm::from_images(p).unwrap()).collect()
}

fn criterion_8() -> Outcome {
    let c4 = closure(4, vec![perm(4, &[&[0, 1, 2, 3]])]).unwrap();
    let d = one_vertex_data(c4.clone());
    let mu = perm(4, &[&[0, 1]]);
    ensure!(check_weak_equivariance(&d, 0, &mu).is_none(), "cyclic counterexample accepted");
    ensure!(weakly_equivariant_by_brute_force(&c4, &mu).is_none(), "brute force finds a gamma for the counterexample");

    let mut groups: Vec<(String, PermGroup)> = Vec::new();
    for n in 1..=12 {
        groups.push((format!("C{n}"), regular_cyclic(n)));
    }
    groups.push(("C24".into(), regular_cyclic(24)));
    groups.push(("C48".into(), regular_cyclic(48)));
    for n in 3..=12 {
        groups.push((format!("D{n}"), dihedral(n)));
    }
    groups.push(("D24".into(), dihedral(24)));
    for n in 1..=4 {
        groups.push((format!("S{n}"), PermGroup::symmetric(n).unwrap()));
    }
    groups.push(("A4".into(), closure(4, vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[1, 2, 3]])]).unwrap()));
    groups.push(("V4".into(), closure(4, vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])]).unwrap()));
    let z2 = closure(2, vec![perm(2, &[&[0, 1]])]).unwrap();
    let z4 = regular_cyclic(4);
    groups.push(("Z2xZ4".into(), direct_product(&[&z2, &z4]).unwrap()));
    groups.push(("S3xZ2".into(), direct_product(&[&PermGroup::symmetric(3).unwrap(), &z2]).unwrap()));
    groups.push(("tetrahedron".into(), symmetry_group("tetrahedron").unwrap()));
    groups.push(("cube".into(), symmetry_group("cube").unwrap()));

    let (mut checked, mut brute) = (0, 0);
    for (name, g) in &groups {
        ensure!(g.order() <= 48, "{name} has order {}", g.order());
        let d = one_vertex_data(g.clone());
        ensure!(validate_symdata(&d).is_empty(), "{name}: invalid data");
        let id = Perm::identity(g.degree());
        let gamma = check_weak_equivariance(&d, 0, &id).ok_or(format!("{name}: identity rejected"))?;
        ensure!(gamma.is_identity(), "{name}: identity paired with a non-identity gamma");
        for mu in g.elements() {
            let gamma = check_weak_equivariance(&d, 0, mu).ok_or(format!("{name}: group element rejected"))?;
            let gi = gamma.inverse();
            let ok = g.elements().iter().all(|delta| mu.compose(delta) == gamma.compose(delta).compose(&gi).compose(mu));
            ensure!(ok, "{name}: returned gamma fails the equation");
            checked += 1;
        }
        // every permutation of a small star against brute force
        if g.degree() <= 5 {
            for mu in all_perms(g.degree()) {
                let found = check_weak_equivariance(&d, 0, &mu).is_some();
                ensure!(found == weakly_equivariant_by_brute_force(g, &mu).is_some(), "{name}: brute force disagrees");
                brute += 1;
            }
        }
    }
    Ok(format!(
        "{} groups of order <= 48: {checked} group elements accepted, {brute} star permutations agree with brute force",
        groups.len()
    ))
}

/// Data on a random color graph where each vertex group acts diagonally and
/// regularly on all of its orbits, so every stabilizer is trivial.
fn random_free_data(seed: u64) -> SymRestrictedData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=3);
    let mut d0 = Vec::new();
    let mut bar = Vec::new();
    for v in 1..nv {
        let u = rng.gen_range(0..v);
        let k = d0.len();
        d0.extend([u, v]);
        bar.extend([k + 1, k]);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (u, v) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let k = d0.len();
        if rng.gen_bool(0.25) {
            d0.push(u);
            bar.push(k);
        } else {
            d0.extend([u, v]);
            bar.extend([k + 1, k]);
        }
    }
    if d0.is_empty() {
        d0.push(0);
        bar.push(0);
    }
    let c = ColorGraph::new(nv, d0, bar).unwrap();
    let groups = (0..nv)
        .map(|i| {
            let darts = c.darts_at(i);
            let order = rng.gen_range(1..=4);
            let deg = order * darts.len();
            let images: Vec<usize> = (0..deg).map(|x| x / order * order + (x % order + 1) % order).collect();
            let g = closure(deg, vec![Perm::from_images(images).unwrap()]).unwrap();
            let labels = darts.iter().enumerate().map(|(j, &k)| (j * order, k)).collect();
            VertexGroup::new(g, labels)
        })
        .collect();
    SymRestrictedData { color_graph: c, groups }
}

fn criterion_9() -> Outcome {
    // V4 regular on 0..4 (orbit of dart 0) times Z/4 regular on 4..8 (dart 1)
    let g = closure(
        8,
        vec![perm(8, &[&[0, 1], &[2, 3]]), perm(8, &[&[0, 2], &[1, 3]]), perm(8, &[&[4, 5, 6, 7]])],
    )
    .unwrap();
    let looped = SymRestrictedData {
        color_graph: ColorGraph::new(1, vec![0, 0], vec![1, 0]).unwrap(),
        groups: vec![VertexGroup::new(g, BTreeMap::from([(0, 0), (4, 1)]))],
    };
    ensure!(validate_symdata(&looped).is_empty(), "loop data invalid");
    let rep = check_cycle_condition(&looped, 2).map_err(|e| e.to_string())?;
    ensure!(rep.first_failure.as_ref().is_some_and(|p| p.len() == 1), "loop example: {:?}", rep.first_failure);

    let mut balanced = vec![dodeca_cube(), reduce_to_balanced(&icosa_cube()).map_err(|e| e.to_string())?];
    for seed in 0..40 {
        balanced.push(random_free_data(seed));
    }
    let mut paths = 0;
    for (j, d) in balanced.iter().enumerate() {
        ensure!(validate_symdata(d).is_empty(), "balanced set {j} invalid");
        ensure!(edge_stabilizers(d).map_err(|e| e.to_string())?.all_balanced(), "set {j} is not balanced");
        let max_len = 2 * d.color_graph.edge_count();
        let rep = check_cycle_condition(d, max_len).map_err(|e| e.to_string())?;
        ensure!(rep.all_pass(), "balanced set {j} fails on {:?}", rep.first_failure);
        paths += rep.results.len();
    }

    // trees pass whether or not they are balanced
    let ic = icosa_cube();
    ensure!(!edge_stabilizers(&ic).map_err(|e| e.to_string())?.all_balanced(), "icosahedron/cube balanced");
    for d in [&ic, &dodeca_cube()] {
        let rep = check_cycle_condition(d, 2 * d.color_graph.edge_count()).map_err(|e| e.to_string())?;
        ensure!(rep.all_pass(), "tree fails the cycle condition");
    }
    Ok(format!("Z/4 vs Z/2xZ/2 loop fails at length 1; {} balanced data sets pass ({paths} paths); trees pass", balanced.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "end-to-end construction", budget: Some(Duration::from_secs(60)), run: criterion_1 },
        Criterion { id: 2, name: "exact counts", budget: None, run: criterion_2 },
        Criterion { id: 3, name: "counting identities", budget: None, run: criterion_3 },
        Criterion { id: 4, name: "choice independence", budget: None, run: criterion_4 },
        Criterion { id: 5, name: "decision vs oracle", budget: Some(Duration::from_secs(300)), run: criterion_5 },
        Criterion { id: 6, name: "refinement vs brute force", budget: None, run: criterion_6 },
        Criterion { id: 7, name: "polyhedral stabilizers", budget: None, run: criterion_7 },
        Criterion { id: 8, name: "weak equivariance", budget: Some(Duration::from_secs(10)), run: criterion_8 },
        Criterion { id: 9, name: "cycle condition", budget: None, run: criterion_9 },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = match (result, c.budget) {
            (Ok(_), Some(b)) if took > b => Err(format!("took {took:.1?}, budget {b:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {} ({}): PASS in {took:.2?}: {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({}): FAIL in {took:.2?}: {why}", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
