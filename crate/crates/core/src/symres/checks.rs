use std::collections::VecDeque;

use super::{SymError, SymRestrictedData, VertexGroup};
use crate::graph::{is_tree, ColorGraph};
use crate::permgroup::{are_isomorphic, direct_product, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStabilizer {
    pub dart_color: usize,
    pub basepoint: usize,
    pub group: PermGroup,
}

/// Whether `Δ_k ≅ Δ_kbar` for one geometric edge of the color graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBalance {
    pub dart_color: usize,
    pub bar: usize,
    pub balanced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerReport {
    /// Indexed by dart color.
    pub stabilizers: Vec<EdgeStabilizer>,
    /// One entry per geometric edge, keyed by its smaller dart color.
    pub balance: Vec<EdgeBalance>,
}

impl StabilizerReport {
    pub fn all_balanced(&self) -> bool {
        self.balance.iter().all(|b| b.balanced)
    }
}

/// `Δ_k` for every dart color, at the smallest point of the orbit labeled
/// `k`, and the balance test per geometric edge.
pub fn edge_stabilizers(d: &SymRestrictedData) -> Result<StabilizerReport, SymError> {
    let c = &d.color_graph;
    let mut stabilizers = Vec::with_capacity(c.dart_count());
    for k in 0..c.dart_count() {
        let basepoint = d.basepoint(k).ok_or_else(|| {
            SymError::Invalid(vec![super::SymViolation::MissingColor { color: c.d0(k), dart: k }])
        })?;
        stabilizers.push(EdgeStabilizer { dart_color: k, basepoint, group: d.edge_stabilizer(k)? });
    }
    let balance = (0..c.dart_count())
        .filter(|&k| k <= c.bar(k))
        .map(|k| EdgeBalance {
            dart_color: k,
            bar: c.bar(k),
            balanced: are_isomorphic(&stabilizers[k].group, &stabilizers[c.bar(k)].group),
        })
        .collect();
    Ok(StabilizerReport { stabilizers, balance })
}

/// For a tree `c`, the darts pointing towards vertex `i`: from every
/// geometric edge, the dart whose head lies on `i`'s side. Ascending.
///
/// The narrower reading, only the darts of edges incident to `i`, does not
/// balance a three-vertex path after reduction, so it is not offered.
pub fn towards(c: &ColorGraph, i: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for k in (0..c.dart_count()).filter(|&k| k < c.bar(k)) {
        // side of d1(k) once the edge {k, kbar} is removed
        let mut seen = vec![false; c.vertex_count()];
        let mut queue = VecDeque::from([c.d1(k)]);
        seen[c.d1(k)] = true;
        while let Some(v) = queue.pop_front() {
            for f in c.darts_at(v) {
                if f == k || f == c.bar(k) {
                    continue;
                }
                let w = c.d1(f);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.push(if seen[i] { k } else { c.bar(k) });
    }
    out.sort_unstable();
    out
}

/// Replaces each `Δ_i` by `Δ_i × ∏_{k ∈ K_i} Δ_k`, where `K_i` holds one
/// dart per edge of the tree `C`, the one pointing towards `i`. The product
/// acts on the star through its first factor; the remaining factors act on
/// their own extra points. The output is checked to be balanced.
pub fn reduce_to_balanced(d: &SymRestrictedData) -> Result<SymRestrictedData, SymError> {
    let c = &d.color_graph;
    if !is_tree(c) {
        return Err(SymError::NotATree);
    }
    let stabs: Vec<PermGroup> = (0..c.dart_count()).map(|k| d.edge_stabilizer(k)).collect::<Result<_, _>>()?;
    let mut groups = Vec::with_capacity(d.groups.len());
    for (i, vg) in d.groups.iter().enumerate() {
        let mut factors: Vec<&PermGroup> = vec![&vg.group];
        factors.extend(towards(c, i).into_iter().map(|k| &stabs[k]));
        let product = direct_product(&factors)?;
        groups.push(VertexGroup { group: product, star_degree: vg.star_degree, orbit_labels: vg.orbit_labels.clone() });
    }
    let out = SymRestrictedData { color_graph: c.clone(), groups };
    let report = edge_stabilizers(&out)?;
    if let Some(b) = report.balance.iter().find(|b| !b.balanced) {
        return Err(SymError::NotBalancedAfterReduction(b.dart_color));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleResult {
    /// Dart colors `(k_1, ..., k_r)` of the closed path.
    pub path: Vec<usize>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub max_len: usize,
    /// Every path checked, in order; ends at the first failure if any.
    pub results: Vec<CycleResult>,
    pub first_failure: Option<Vec<usize>>,
}

impl CycleReport {
    pub fn all_pass(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Closed directed paths of length `len`, one per cyclic rotation class
/// (the lexicographically least rotation is kept).
fn closed_paths(c: &ColorGraph, len: usize) -> Vec<Vec<usize>> {
    fn rec(c: &ColorGraph, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == len {
            if c.d1(path[len - 1]) == c.d0(path[0]) && is_min_rotation(path) {
                out.push(path.clone());
            }
            return;
        }
        let at = c.d1(*path.last().expect("nonempty"));
        for k in c.darts_at(at) {
            // the first dart is the least of its rotation class
            if k < path[0] {
                continue;
            }
            path.push(k);
            rec(c, len, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..c.dart_count() {
        let mut path = vec![k];
        rec(c, len, &mut path, &mut out);
    }
    out
}

fn is_min_rotation(p: &[usize]) -> bool {
    (1..p.len()).all(|s| {
        let rot = p[s..].iter().chain(&p[..s]);
        p.iter().le(rot)
    })
}

/// Tests `∏ Δ_{k_j} ≅ ∏ Δ_{kbar_j}` on every closed directed path of the color
/// graph with at most `max_len` darts, stopping at the first failure.
///
/// A path passes outright when the two factor lists match up to isomorphism;
/// otherwise both products are built and compared.
pub fn check_cycle_condition(d: &SymRestrictedData, max_len: usize) -> Result<CycleReport, SymError> {
    let c = &d.color_graph;
    let stabs: Vec<PermGroup> = (0..c.dart_count()).map(|k| d.edge_stabilizer(k)).collect::<Result<_, _>>()?;
    // isomorphism class id of each Δ_k
    let mut class = vec![usize::MAX; c.dart_count()];
    let mut reps: Vec<usize> = Vec::new();
    for k in 0..c.dart_count() {
        class[k] = match reps.iter().position(|&r| are_isomorphic(&stabs[r], &stabs[k])) {
            Some(x) => x,
            None => {
                reps.push(k);
                reps.len() - 1
            }
        };
    }
    let mut results = Vec::new();
    for len in 1..=max_len {
        for path in closed_paths(c, len) {
            let mut ours: Vec<usize> = path.iter().map(|&k| class[k]).collect();
            let mut theirs: Vec<usize> = path.iter().map(|&k| class[c.bar(k)]).collect();
            ours.sort_unstable();
            theirs.sort_unstable();
            let holds = if ours == theirs {
                true
            } else {
                let order = |ks: &mut dyn Iterator<Item = usize>| ks.map(|k| stabs[k].order() as u128).product::<u128>();
                if order(&mut path.iter().copied()) != order(&mut path.iter().map(|&k| c.bar(k))) {
                    false
                } else {
                    let a: Vec<&PermGroup> = path.iter().map(|&k| &stabs[k]).collect();
                    let b: Vec<&PermGroup> = path.iter().map(|&k| &stabs[c.bar(k)]).collect();
                    are_isomorphic(&direct_product(&a)?, &direct_product(&b)?)
                }
            };
            results.push(CycleResult { path: path.clone(), holds });
            if !holds {
                return Ok(CycleReport { max_len, results, first_failure: Some(path) });
            }
        }
    }
    Ok(CycleReport { max_len, results, first_failure: None })
}
