use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CoverError, CoverParameters};
use crate::graph::ColoredGraph;
use crate::refine::{ColorGraphData, Decision};

/// Multiplication table of a finite group on elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl GroupTable {
    /// Accepts `mul[x][y] = x * y` if it is a group table; the identity may
    /// be any element.
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        let n = mul.len();
        let bad = |why: &str| CoverError::Blueprint(format!("not a group table: {why}"));
        if n == 0 || mul.iter().any(|row| row.len() != n || row.iter().any(|&z| z >= n)) {
            return Err(bad("shape"));
        }
        let id = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)).ok_or_else(|| bad("identity"))?;
        let mut inv = vec![0; n];
        for x in 0..n {
            inv[x] = (0..n).find(|&y| mul[x][y] == id).ok_or_else(|| bad("inverse"))?;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(bad("associativity"));
                    }
                }
            }
        }
        Ok(GroupTable { mul, inv })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul[x][y] == self.mul[y][x]))
    }
}

/// The group `Pi_k` attached to a dart color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeGroup {
    /// Integers mod `order`, written additively.
    Cyclic(usize),
    Table(GroupTable),
}

impl EdgeGroup {
    pub fn order(&self) -> usize {
        match self {
            EdgeGroup::Cyclic(n) => *n,
            EdgeGroup::Table(t) => t.order(),
        }
    }

    /// `x * y^-1`; for the cyclic group this is `x - y mod order`.
    pub fn div(&self, x: usize, y: usize) -> usize {
        match self {
            EdgeGroup::Cyclic(n) => (x + n - y) % n,
            EdgeGroup::Table(t) => t.mul[x][t.inv[y]],
        }
    }
}

/// Every choice needed to build the cover, fixed up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverBlueprint {
    /// `a[i] = |A_i|`.
    pub a: Vec<usize>,
    /// `b[k] = |B_k| = |B_kbar|`.
    pub b: Vec<usize>,
    pub r: Vec<usize>,
    pub groups: Vec<EdgeGroup>,
    /// `phi[k][p * b[k] + beta]` is the element of `A_{d0 k}` paired with
    /// `(p, beta)`.
    pub phi: Vec<Vec<usize>>,
    /// `psi[g][e]`: the element of `Pi_k` assigned to dart `e` of input graph
    /// `g`, where `k` is the class of `e`.
    pub psi: [Vec<usize>; 2],
    /// Dart class of every dart of both inputs, copied from the refinement.
    classes: [Vec<usize>; 2],
    /// Tail of every dart of both inputs.
    tails: [Vec<usize>; 2],
}

/// Cyclic groups with `phi_k(p, beta) = p + r_k beta`, and each `psi_vk`
/// ranking the `k`-darts at `v` in star order. With a seed, each rank list is
/// shuffled by a ChaCha8 stream, visiting graphs, vertices and classes in id
/// order.
pub fn make_blueprint(
    g: &ColoredGraph,
    g2: &ColoredGraph,
    decision: &Decision,
    params: &CoverParameters,
    seed: Option<u64>,
) -> Result<CoverBlueprint, CoverError> {
    let data = decision.data.as_ref().ok_or(CoverError::NoCommonCover)?;
    let c = &data.color_graph;
    let to_usize = |x: u64| usize::try_from(x).map_err(|_| CoverError::Overflow("parameter"));
    let a = params.a.iter().map(|&x| to_usize(x)).collect::<Result<Vec<_>, _>>()?;
    let b = params.b.iter().map(|&x| to_usize(x)).collect::<Result<Vec<_>, _>>()?;
    let r = data.r.iter().map(|&x| to_usize(x)).collect::<Result<Vec<_>, _>>()?;
    let groups = r.iter().map(|&n| EdgeGroup::Cyclic(n)).collect();
    let phi = (0..c.dart_count())
        .map(|k| {
            let mut t = vec![0; r[k] * b[k]];
            for p in 0..r[k] {
                for beta in 0..b[k] {
                    t[p * b[k] + beta] = p + r[k] * beta;
                }
            }
            t
        })
        .collect();

    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut psi = [vec![0; g.dart_count()], vec![0; g2.dart_count()]];
    for (gi, graph) in [g, g2].into_iter().enumerate() {
        let classes = decision.coloring.dart_classes(gi);
        let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); c.dart_count()];
        for star in graph.stars() {
            for &e in &star {
                by_class[classes[e]].push(e);
            }
            for darts in by_class.iter_mut().filter(|d| !d.is_empty()) {
                let mut ranks: Vec<usize> = (0..darts.len()).collect();
                if let Some(rng) = rng.as_mut() {
                    ranks.shuffle(rng);
                }
                for (&e, rank) in darts.iter().zip(ranks) {
                    psi[gi][e] = rank;
                }
                darts.clear();
            }
        }
    }
    let classes = [decision.coloring.dart_classes(0).to_vec(), decision.coloring.dart_classes(1).to_vec()];
    let tails = [g.darts().map(|e| g.tail(e)).collect(), g2.darts().map(|e| g2.tail(e)).collect()];
    Ok(CoverBlueprint { a, b, r, groups, phi, psi, classes, tails })
}

impl CoverBlueprint {
    /// Replaces `Pi_k` and `phi_k` for one dart color. The group must have
    /// order `r_k` and `phi` must be a bijection onto `0..a_{d0 k}`, laid out
    /// as in [`CoverBlueprint::phi`]. The `psi` values are reused as group
    /// elements, so they stay bijective.
    pub fn set_edge_group(&mut self, k: usize, group: EdgeGroup, phi: Vec<usize>) -> Result<(), CoverError> {
        if group.order() != self.r[k] {
            return Err(CoverError::Blueprint(format!("group for color {k} has order {} != r_k {}", group.order(), self.r[k])));
        }
        self.groups[k] = group;
        self.phi[k] = phi;
        Ok(())
    }

    /// Checks sizes and bijectivity against the color data.
    pub fn check(&self, data: &ColorGraphData) -> Result<(), CoverError> {
        let c = &data.color_graph;
        let err = |s: String| Err(CoverError::Blueprint(s));
        if self.a.len() != c.vertex_count() || self.b.len() != c.dart_count() {
            return err("parameter vector lengths".into());
        }
        for k in 0..c.dart_count() {
            let i = c.d0(k);
            if self.r[k] as u64 != data.r[k] || self.groups[k].order() != self.r[k] {
                return err(format!("|Pi_{k}| != r_{k}"));
            }
            if self.a[i] != self.r[k] * self.b[k] || self.b[k] != self.b[c.bar(k)] {
                return err(format!("a_{i} != r_{k} b_{k} or b_{k} != b_kbar"));
            }
            let mut hit = vec![false; self.a[i]];
            if self.phi[k].len() != self.a[i] {
                return err(format!("phi_{k} has the wrong size"));
            }
            for &x in &self.phi[k] {
                if x >= hit.len() || std::mem::replace(&mut hit[x], true) {
                    return err(format!("phi_{k} is not a bijection"));
                }
            }
        }
        for gi in 0..2 {
            // psi restricted to the k-darts at each vertex must hit 0..r_k once
            let mut seen = std::collections::HashSet::new();
            for (e, &k) in self.classes[gi].iter().enumerate() {
                let p = self.psi[gi][e];
                if p >= self.r[k] || !seen.insert((self.tails[gi][e], k, p)) {
                    return err(format!("psi is not a bijection at dart {e} of graph {gi}"));
                }
            }
        }
        Ok(())
    }
}
