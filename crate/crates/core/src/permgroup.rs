//! Small permutation groups with explicitly enumerated elements.
//!
//! Groups are closed breadth-first from their generators and every element
//! is kept. That caps the practical order at a few thousand, which is plenty
//! for polyhedral symmetry groups and their products.
//!
//! Composition convention: `a.compose(&b)` applies `b` first and then `a`,
//! i.e. `(a ∘ b)(x) = a(b(x))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Largest group order materialized unless a different cap is passed.
pub const DEFAULT_CAP: usize = 10240;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("permutation degree {found} does not match {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("point {point} is outside 0..{degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(GroupError::NotAPermutation(n));
            }
        }
        Ok(Perm(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (j, &x) in cyc.iter().enumerate() {
                if x >= n {
                    return Err(GroupError::PointOutOfRange { point: x, degree: n });
                }
                images[x] = cyc[(j + 1) % cyc.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// Order as a group element: lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.0.len()];
        let mut ord = 1usize;
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            ord = ord / gcd(ord, len) * len;
        }
        ord
    }

    /// Extends by fixed points to degree `n`, shifting the moved points up by
    /// `offset`.
    pub fn shifted(&self, offset: usize, n: usize) -> Perm {
        let mut out: Vec<u32> = (0..n as u32).collect();
        for (x, &y) in self.0.iter().enumerate() {
            out[offset + x] = offset as u32 + y;
        }
        Perm(out)
    }

    /// Restriction to the invariant block `start..start + len`, renumbered
    /// from 0. Recovers a factor from an element of a direct product.
    pub fn restrict(&self, start: usize, len: usize) -> Perm {
        Perm(self.0[start..start + len].iter().map(|&y| y - start as u32).collect())
    }
}

fn gcd(mut x: usize, mut y: usize) -> usize {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// A permutation group with all of its elements listed.
///
/// `elements()[0]` is always the identity.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.elements.iter().all(|x| other.contains(x))
    }
}

impl Eq for PermGroup {}

/// Closes `generators` under composition, with the default cap.
pub fn closure(degree: usize, generators: Vec<Perm>) -> Result<PermGroup, GroupError> {
    closure_capped(degree, generators, DEFAULT_CAP)
}

/// Breadth-first closure of `generators`; fails once more than `cap`
/// elements are found.
pub fn closure_capped(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<PermGroup, GroupError> {
    for g in &generators {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch { expected: degree, found: g.degree() });
        }
    }
    let id = Perm::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for s in &generators {
            let y = s.compose(&elements[x]);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    Ok(PermGroup { degree, generators, elements, index })
}

/// One orbit of a group on its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Points of the orbit, ascending.
    pub points: Vec<usize>,
    /// Dart color assigned to the orbit, if any.
    pub label: Option<usize>,
}

impl Orbit {
    pub fn min_point(&self) -> usize {
        self.points[0]
    }
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        closure(degree, vec![]).expect("trivial group")
    }

    /// Cyclic group generated by the rotation `x -> x + 1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        let rot = Perm::from_images((0..n).map(|x| (x + 1) % n).collect()).expect("rotation");
        closure(n, vec![rot]).expect("cyclic group")
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]])?);
            gens.push(Perm::from_images((0..n).map(|x| (x + 1) % n).collect())?);
        }
        closure(n, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Orbits on `0..degree`, sorted by their smallest point, unlabeled.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut label = vec![usize::MAX; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = out.len();
            let mut points = vec![s];
            let mut j = 0;
            while j < points.len() {
                let x = points[j];
                for g in &self.generators {
                    let y = g.apply(x);
                    if label[y] == usize::MAX {
                        label[y] = out.len();
                        points.push(y);
                    }
                }
                j += 1;
            }
            points.sort_unstable();
            out.push(Orbit { points, label: None });
        }
        out
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        self.orbits().into_iter().find(|o| o.points.contains(&x)).map(|o| o.points).unwrap_or_default()
    }

    /// Subgroup fixing point `x`.
    pub fn stabilizer(&self, x: usize) -> Result<PermGroup, GroupError> {
        if x >= self.degree {
            return Err(GroupError::PointOutOfRange { point: x, degree: self.degree });
        }
        let members: Vec<Perm> = self.elements.iter().filter(|p| p.apply(x) == x).cloned().collect();
        Ok(subgroup_from_elements(self.degree, members))
    }

    /// A small generating set, chosen greedily from elements of large order.
    pub fn small_generating_set(&self) -> Vec<Perm> {
        let mut order: Vec<&Perm> = self.elements.iter().collect();
        order.sort_by_key(|p| std::cmp::Reverse(p.order()));
        let mut gens: Vec<Perm> = Vec::new();
        let mut span = PermGroup::trivial(self.degree);
        for p in order {
            if span.order() == self.order() {
                break;
            }
            if !span.contains(p) {
                gens.push(p.clone());
                span = closure(self.degree, gens.clone()).expect("subgroup of a capped group");
            }
        }
        gens
    }
}

/// Wraps an already closed set of elements as a group, with a greedily
/// chosen generating set. The caller guarantees closure.
fn subgroup_from_elements(degree: usize, members: Vec<Perm>) -> PermGroup {
    let mut elements = vec![Perm::identity(degree)];
    elements.extend(members.into_iter().filter(|p| !p.is_identity()));
    let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let full = PermGroup { degree, generators: elements[1..].to_vec(), elements, index };
    let gens = full.small_generating_set();
    PermGroup { generators: gens, ..full }
}

/// Direct product acting on the disjoint union of the factors' point sets,
/// factor `j` on the block starting at the sum of the earlier degrees.
pub fn direct_product(groups: &[&PermGroup]) -> Result<PermGroup, GroupError> {
    direct_product_capped(groups, DEFAULT_CAP)
}

pub fn direct_product_capped(groups: &[&PermGroup], cap: usize) -> Result<PermGroup, GroupError> {
    let degree: usize = groups.iter().map(|g| g.degree).sum();
    let mut order = 1usize;
    for g in groups {
        order = order.checked_mul(g.order()).filter(|&o| o <= cap).ok_or(GroupError::CapExceeded { cap })?;
    }
    let mut elements = vec![Perm::identity(degree)];
    let mut generators = Vec::new();
    let mut offset = 0;
    for g in groups {
        generators.extend(g.generators.iter().map(|p| p.shifted(offset, degree)));
        let mut next = Vec::with_capacity(elements.len() * g.order());
        for x in &elements {
            for y in &g.elements {
                next.push(y.shifted(offset, degree).compose(x));
            }
        }
        elements = next;
        offset += g.degree;
    }
    debug_assert_eq!(elements.len(), order);
    let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(PermGroup { degree, generators, elements, index })
}

/// Per-element invariants preserved by every isomorphism: order, and the
/// numbers of square and cube roots.
fn element_invariants(g: &PermGroup) -> Vec<(usize, usize, usize)> {
    let mut sq = vec![0usize; g.order()];
    let mut cube = vec![0usize; g.order()];
    for x in &g.elements {
        let x2 = x.compose(x);
        let x3 = x2.compose(x);
        sq[g.index[&x2]] += 1;
        cube[g.index[&x3]] += 1;
    }
    g.elements.iter().enumerate().map(|(i, x)| (x.order(), sq[i], cube[i])).collect()
}

/// Decides whether two groups are isomorphic as abstract groups.
///
/// Cheap invariants are compared first; then images of a small generating set
/// of `g1` are searched by backtracking, each partial assignment being
/// checked to extend to an injective homomorphism on the subgroup it spans.
pub fn are_isomorphic(g1: &PermGroup, g2: &PermGroup) -> bool {
    find_isomorphism(g1, g2).is_some()
}

/// Like [`are_isomorphic`], returning the generator images on success:
/// `out[j]` is the image of `g1.small_generating_set()[j]`.
pub fn find_isomorphism(g1: &PermGroup, g2: &PermGroup) -> Option<Vec<Perm>> {
    if g1.order() != g2.order() || g1.is_abelian() != g2.is_abelian() {
        return None;
    }
    let inv1 = element_invariants(g1);
    let inv2 = element_invariants(g2);
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let gens = g1.small_generating_set();
    let gen_idx: Vec<usize> = gens.iter().map(|p| g1.index[p]).collect();
    let candidates: Vec<Vec<usize>> = gen_idx
        .iter()
        .map(|&a| (0..g2.order()).filter(|&b| inv2[b] == inv1[a]).collect())
        .collect();
    // left multiplication tables of the generators inside g1
    let left: Vec<Vec<usize>> =
        gens.iter().map(|s| g1.elements.iter().map(|x| g1.index[&s.compose(x)]).collect()).collect();
    let mut images = Vec::with_capacity(gens.len());
    if search(g1, g2, &left, &candidates, &mut images) {
        Some(images.into_iter().map(|b| g2.elements[b].clone()).collect())
    } else {
        None
    }
}

fn search(g1: &PermGroup, g2: &PermGroup, left: &[Vec<usize>], candidates: &[Vec<usize>], images: &mut Vec<usize>) -> bool {
    let j = images.len();
    if j == candidates.len() {
        return true;
    }
    for &b in &candidates[j] {
        images.push(b);
        if extends(g1, g2, &left[..=j], images) && search(g1, g2, left, candidates, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// True iff sending generator `j` to `images[j]` extends to an injective
/// homomorphism on the subgroup spanned by the first `images.len()`
/// generators.
fn extends(g1: &PermGroup, g2: &PermGroup, left: &[Vec<usize>], images: &[usize]) -> bool {
    let mut map = vec![usize::MAX; g1.order()];
    let mut used = vec![false; g2.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (j, table) in left.iter().enumerate() {
            let y = table[x];
            let img = g2.elements[images[j]].compose(&g2.elements[map[x]]);
            let img = g2.index[&img];
            if map[y] == usize::MAX {
                if used[img] {
                    return false;
                }
                used[img] = true;
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return false;
            }
        }
    }
    true
}
