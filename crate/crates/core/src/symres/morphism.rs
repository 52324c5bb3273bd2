use std::fmt;

use super::{SRGraph, SymRestrictedData};
use crate::graph::{GraphMap, Vertex};
use crate::permgroup::Perm;

/// Searches `Δ_i` for `γ` with `μ ∘ δ = (γ δ γ⁻¹) ∘ μ` on the star, for every
/// generator `δ`. Elements are tried in closure order, so the identity comes
/// first.
///
/// `mu` is a permutation of the star points `X_i`.
pub fn check_weak_equivariance(d: &SymRestrictedData, i: usize, mu: &Perm) -> Option<Perm> {
    let vg = &d.groups[i];
    let n = vg.star_degree;
    if mu.degree() != n {
        return None;
    }
    let gens: Vec<Perm> = vg.group.generators().iter().map(|g| g.restrict(0, n)).collect();
    let lhs: Vec<Perm> = gens.iter().map(|delta| mu.compose(delta)).collect();
    vg.group
        .elements()
        .iter()
        .find(|gamma| {
            let gs = gamma.restrict(0, n);
            let gi = gs.inverse();
            gens.iter().zip(&lhs).all(|(delta, l)| *l == gs.compose(delta).compose(&gi).compose(mu))
        })
        .cloned()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismDefect {
    NotAHomomorphism,
    ColorNotPreserved { vertex: Vertex },
    /// The map does not send the star of `vertex` bijectively onto the star
    /// of its image.
    StarNotBijective { vertex: Vertex },
    NotWeaklyEquivariant { vertex: Vertex },
}

impl fmt::Display for MorphismDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismDefect::NotAHomomorphism => write!(f, "map does not commute with tail and bar"),
            MorphismDefect::ColorNotPreserved { vertex } => write!(f, "colors not preserved at vertex {vertex}"),
            MorphismDefect::StarNotBijective { vertex } => write!(f, "star of vertex {vertex} not mapped bijectively"),
            MorphismDefect::NotWeaklyEquivariant { vertex } => {
                write!(f, "star map at vertex {vertex} is not weakly equivariant")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MorphismReport {
    pub defects: Vec<MorphismDefect>,
    /// The conjugating element found at each vertex, when one exists.
    pub gammas: Vec<Option<Perm>>,
}

impl MorphismReport {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks that `phi: g -> g2` is a morphism of symmetry-restricted graphs:
/// a colored homomorphism whose star maps, read through the charts as
/// `μ_v = λ_{φ(v)} ∘ φ ∘ λ_v⁻¹`, are weakly equivariant.
pub fn verify_sr_morphism(phi: &GraphMap, g: &SRGraph, g2: &SRGraph, d: &SymRestrictedData) -> MorphismReport {
    let mut rep = MorphismReport::default();
    let (a, b) = (&g.graph, &g2.graph);
    if !phi.is_homomorphism(a, b) {
        rep.defects.push(MorphismDefect::NotAHomomorphism);
        return rep;
    }
    let pa = g.chart_points();
    let pb = g2.chart_points();
    for (v, star) in a.stars().iter().enumerate() {
        let w = phi.vertex_map[v];
        let colors_ok = a.vertex_color(v) == b.vertex_color(w)
            && star.iter().all(|&e| a.dart_color(e) == b.dart_color(phi.dart_map[e]));
        if !colors_ok {
            rep.defects.push(MorphismDefect::ColorNotPreserved { vertex: v });
            rep.gammas.push(None);
            continue;
        }
        let i = a.vertex_color(v).expect("colored over C");
        let n = d.groups[i].star_degree;
        let mut images = vec![usize::MAX; n];
        for &e in star {
            images[pa[e]] = pb[phi.dart_map[e]];
        }
        let Ok(mu) = Perm::from_images(images) else {
            rep.defects.push(MorphismDefect::StarNotBijective { vertex: v });
            rep.gammas.push(None);
            continue;
        };
        let gamma = check_weak_equivariance(d, i, &mu);
        if gamma.is_none() {
            rep.defects.push(MorphismDefect::NotWeaklyEquivariant { vertex: v });
        }
        rep.gammas.push(gamma);
    }
    rep
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graph::{ColorGraph, ColoredGraph};
    use crate::leighton::verify_covering;
    use crate::permgroup::{closure, PermGroup};
    use crate::polyhedra::dodeca_cube;
    use crate::symres::tests::dodeca_cube_graph;
    use crate::symres::{validate_srs_graph, VertexGroup};

    fn one_color(group: PermGroup) -> SymRestrictedData {
        // one vertex color with a half-edge dart color
        SymRestrictedData {
            color_graph: ColorGraph::new(1, vec![0], vec![0]).unwrap(),
            groups: vec![VertexGroup::new(group, BTreeMap::from([(0, 0)]))],
        }
    }

    #[test]
    fn identity_gives_identity() {
        let d = dodeca_cube();
        let id = Perm::identity(20);
        assert!(check_weak_equivariance(&d, 0, &id).unwrap().is_identity());
    }

    #[test]
    fn group_elements_succeed() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let d = one_color(s3);
        let mu = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let gamma = check_weak_equivariance(&d, 0, &mu).unwrap();
        // for the full symmetric group gamma = mu is the only choice
        assert_eq!(gamma, mu);
    }

    #[test]
    fn transposition_against_rotation_fails() {
        let c4 = closure(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()]).unwrap();
        let d = one_color(c4);
        let mu = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        assert_eq!(check_weak_equivariance(&d, 0, &mu), None);
    }

    /// Re-chart `g` at every vertex by post-composing with `twist(v)`.
    fn twisted(g: &SRGraph, twist: impl Fn(usize) -> Perm) -> SRGraph {
        let charts = g
            .charts
            .iter()
            .enumerate()
            .map(|(v, c)| c.iter().map(|&(e, x)| (e, twist(v).apply(x))).collect())
            .collect();
        SRGraph { graph: g.graph.clone(), charts }
    }

    #[test]
    fn identity_morphism() {
        let d = dodeca_cube();
        let g = dodeca_cube_graph(&d);
        let id = GraphMap::identity(&g.graph);
        let rep = verify_sr_morphism(&id, &g, &g, &d);
        assert!(rep.is_ok());
        assert!(rep.gammas.iter().all(|x| x.as_ref().unwrap().is_identity()));
    }

    #[test]
    fn group_twisted_identity_is_a_morphism() {
        let d = dodeca_cube();
        let g = dodeca_cube_graph(&d);
        let twist = |v: usize| {
            let grp = &d.groups[usize::from(v >= 2)].group;
            grp.elements()[(7 * v + 3) % grp.order()].clone()
        };
        let g2 = twisted(&g, twist);
        assert!(validate_srs_graph(&g2, &d).is_empty());
        let id = GraphMap::identity(&g.graph);
        let rep = verify_sr_morphism(&id, &g, &g2, &d);
        assert!(rep.is_ok(), "{:?}", rep.defects);
        assert!(verify_covering(&g.graph, &g2.graph, &id).is_ok());
    }

    #[test]
    fn non_equivariant_twist_is_caught() {
        let c4 = closure(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()]).unwrap();
        let d = one_color(c4);
        // one vertex with two loops, all darts of the half-edge color
        let mut g = ColoredGraph::from_edges(1, &[(0, 0), (0, 0)]);
        g.set_vertex_colors(vec![Some(0)]);
        g.set_dart_colors(vec![Some(0); 4]);
        let sg = SRGraph::with_ranked_charts(g, &d);
        assert!(validate_srs_graph(&sg, &d).is_empty());
        let mu = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let sg2 = twisted(&sg, |_| mu.clone());
        let id = GraphMap::identity(&sg.graph);
        let rep = verify_sr_morphism(&id, &sg, &sg2, &d);
        assert_eq!(rep.defects, vec![MorphismDefect::NotWeaklyEquivariant { vertex: 0 }]);
        // still a plain covering
        assert!(verify_covering(&sg.graph, &sg2.graph, &id).is_ok());
    }
}
