//! Skeletons: a root with modulator `S` where repeated isolated vertices and
//! repeated type-3 matching edges are collapsed to one representative.
//!
//! For an `S`-matching edge `ab` (an edge of `H - S` whose ends have no
//! other neighbour outside `S`) with modulator neighbourhoods `A` and `B`:
//!
//! | type | condition |
//! |------|-----------|
//! | 1    | one of `A`, `B` empty, the other not |
//! | 2    | both non-empty and disjoint |
//! | 3    | both non-empty and intersecting |

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::bounds;
use crate::error::SkeletonError;
use crate::graph::{square, Graph, PrimeTwinGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    One,
    Two,
    Three,
}

impl EdgeType {
    pub fn number(self) -> u8 {
        match self {
            EdgeType::One => 1,
            EdgeType::Two => 2,
            EdgeType::Three => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Typed(EdgeType),
    /// Neither end touches the modulator.
    Detached,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Modulator,
    Isolated,
    Match1A,
    Match1B,
    Match2A,
    Match2B,
    Match3A,
    Match3B,
}

/// An `S`-matching edge of a skeleton. For type 1, `a` is the end without
/// modulator neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchingEdge {
    pub a: usize,
    pub b: usize,
    pub edge_type: EdgeType,
}

fn modulator_set(n: usize, modulator: &[usize]) -> Result<FixedBitSet, SkeletonError> {
    let mut set = FixedBitSet::with_capacity(n);
    for &s in modulator {
        if s >= n || set.contains(s) {
            return Err(SkeletonError::BadModulator(s));
        }
        set.insert(s);
    }
    Ok(set)
}

fn signature(h: &Graph, in_s: &FixedBitSet, v: usize) -> FixedBitSet {
    let mut sig = h.neighbors(v).clone();
    sig.intersect_with(in_s);
    sig
}

fn type_of(sig_a: &FixedBitSet, sig_b: &FixedBitSet) -> EdgeClass {
    match (sig_a.is_clear(), sig_b.is_clear()) {
        (true, true) => EdgeClass::Detached,
        (true, false) | (false, true) => EdgeClass::Typed(EdgeType::One),
        (false, false) if sig_a.is_disjoint(sig_b) => EdgeClass::Typed(EdgeType::Two),
        (false, false) => EdgeClass::Typed(EdgeType::Three),
    }
}

/// Type of the `S`-matching edge `edge` of `h`.
pub fn classify_edge_type(h: &Graph, modulator: &[usize], edge: (usize, usize)) -> Result<EdgeClass, SkeletonError> {
    let in_s = modulator_set(h.vertex_count(), modulator)?;
    let (a, b) = edge;
    let n = h.vertex_count();
    let outside = |v: usize| h.neighbors(v).difference(&in_s).count();
    if a >= n
        || b >= n
        || in_s.contains(a)
        || in_s.contains(b)
        || !h.has_edge(a, b)
        || outside(a) != 1
        || outside(b) != 1
    {
        return Err(SkeletonError::NotMatchingEdge(edge));
    }
    Ok(type_of(&signature(h, &in_s, a), &signature(h, &in_s, b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub graph: Graph,
    /// Sorted.
    pub modulator: Vec<usize>,
    pub roles: Vec<Role>,
    pub matching: Vec<MatchingEdge>,
}

impl Skeleton {
    /// Derives roles and matching edges of `graph` with respect to
    /// `modulator`. Fails when `graph - S` has a vertex of degree above one.
    pub fn from_parts(graph: Graph, mut modulator: Vec<usize>) -> Result<Self, SkeletonError> {
        modulator.sort_unstable();
        let n = graph.vertex_count();
        let in_s = modulator_set(n, &modulator)?;
        let mut roles = vec![Role::Isolated; n];
        let mut matching = Vec::new();
        for v in 0..n {
            if in_s.contains(v) {
                roles[v] = Role::Modulator;
                continue;
            }
            let outside: Vec<usize> = graph.neighbors(v).difference(&in_s).collect();
            match outside.as_slice() {
                [] => {}
                [w] if v < *w => {
                    let (sv, sw) = (signature(&graph, &in_s, v), signature(&graph, &in_s, *w));
                    let (a, b, t) = match type_of(&sv, &sw) {
                        EdgeClass::Detached => (v, *w, None),
                        EdgeClass::Typed(EdgeType::One) if sv.is_clear() => (v, *w, Some(EdgeType::One)),
                        EdgeClass::Typed(EdgeType::One) => (*w, v, Some(EdgeType::One)),
                        EdgeClass::Typed(t) => (v, *w, Some(t)),
                    };
                    let Some(edge_type) = t else {
                        return Err(SkeletonError::NotMatchingEdge((v, *w)));
                    };
                    let (ra, rb) = match edge_type {
                        EdgeType::One => (Role::Match1A, Role::Match1B),
                        EdgeType::Two => (Role::Match2A, Role::Match2B),
                        EdgeType::Three => (Role::Match3A, Role::Match3B),
                    };
                    roles[a] = ra;
                    roles[b] = rb;
                    matching.push(MatchingEdge { a, b, edge_type });
                }
                [_] => {}
                more => return Err(SkeletonError::DegreeTooLarge(more.len())),
            }
        }
        Ok(Skeleton {
            graph,
            modulator,
            roles,
            matching,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn k(&self) -> usize {
        self.modulator.len()
    }

    fn in_s(&self) -> FixedBitSet {
        modulator_set(self.vertex_count(), &self.modulator).expect("validated at construction")
    }

    /// Modulator neighbours of `v`.
    pub fn signature(&self, v: usize) -> Vec<usize> {
        signature(&self.graph, &self.in_s(), v).ones().collect()
    }

    pub fn isolated(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.roles[v] == Role::Isolated)
    }

    pub fn endpoints(&self, edge_type: EdgeType) -> impl Iterator<Item = usize> + '_ {
        self.matching
            .iter()
            .filter(move |e| e.edge_type == edge_type)
            .flat_map(|e| [e.a, e.b])
    }

    /// Checks the four potential-skeleton conditions, plus the requirement
    /// for connected inputs that no vertex outside `S` is cut off from it.
    pub fn check_conditions(&self) -> Result<(), String> {
        let in_s = self.in_s();
        let sig = |v: usize| -> Vec<usize> { signature(&self.graph, &in_s, v).ones().collect() };
        for v in 0..self.vertex_count() {
            if !in_s.contains(v) && self.graph.neighbors(v).difference(&in_s).count() > 1 {
                return Err(format!("vertex {v} has two neighbours outside the modulator"));
            }
        }
        let mut isolated = HashSet::new();
        for v in self.isolated() {
            let s = sig(v);
            if s.is_empty() {
                return Err(format!("isolated vertex {v} has no modulator neighbour"));
            }
            if !isolated.insert(s) {
                return Err(format!("isolated vertex {v} repeats a neighbourhood"));
            }
        }
        let mut type3 = HashSet::new();
        let cap = bounds::signature_edge_cap(self.k());
        let mut type12: std::collections::HashMap<(Vec<usize>, Vec<usize>), u64> = Default::default();
        for e in &self.matching {
            let (sa, sb) = (sig(e.a), sig(e.b));
            let key = if sa <= sb { (sa, sb) } else { (sb, sa) };
            if e.edge_type == EdgeType::Three {
                if !type3.insert(key) {
                    return Err(format!("type-3 edge {}-{} repeats a signature pair", e.a, e.b));
                }
            } else {
                let count = type12.entry(key).or_default();
                *count += 1;
                if *count > cap {
                    return Err(format!("more than {cap} type-1/2 edges share a signature pair"));
                }
            }
        }
        Ok(())
    }
}

/// The skeleton of a connected root `h` with modulator `modulator`.
/// Representatives are the smallest ids; the result is relabelled in
/// increasing order of the kept vertices.
pub fn skeleton_of(h: &Graph, modulator: &[usize]) -> Result<Skeleton, SkeletonError> {
    if !h.is_connected() {
        return Err(SkeletonError::Disconnected);
    }
    let full = Skeleton::from_parts(h.clone(), modulator.to_vec())?;
    let in_s = full.in_s();
    let mut drop = FixedBitSet::with_capacity(h.vertex_count());
    let mut seen_isolated = HashSet::new();
    for v in full.isolated() {
        if !seen_isolated.insert(signature(h, &in_s, v)) {
            drop.insert(v);
        }
    }
    let mut seen_pairs = HashSet::new();
    for e in full.matching.iter().filter(|e| e.edge_type == EdgeType::Three) {
        let (sa, sb) = (signature(h, &in_s, e.a), signature(h, &in_s, e.b));
        let (sa, sb): (Vec<usize>, Vec<usize>) = (sa.ones().collect(), sb.ones().collect());
        let key = if sa <= sb { (sa, sb) } else { (sb, sa) };
        if !seen_pairs.insert(key) {
            drop.insert(e.a);
            drop.insert(e.b);
        }
    }
    let keep: Vec<usize> = (0..h.vertex_count()).filter(|v| !drop.contains(*v)).collect();
    let graph = h.induced_subgraph(&keep);
    let relabelled: Vec<usize> = keep
        .iter()
        .enumerate()
        .filter(|(_, v)| in_s.contains(**v))
        .map(|(i, _)| i)
        .collect();
    Skeleton::from_parts(graph, relabelled)
}

/// A map from skeleton vertices onto the true-twin classes of the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectionAssignment {
    pub phi: Vec<usize>,
    pub class_count: usize,
}

impl SurjectionAssignment {
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.class_count];
        for &c in &self.phi {
            if c >= self.class_count {
                return false;
            }
            hit[c] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Skeleton vertices mapped to class `c`.
    pub fn preimage(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.phi
            .iter()
            .enumerate()
            .filter(move |(_, &x)| x == c)
            .map(|(v, _)| v)
    }
}

/// Independent check that `phi` is a compatible surjection for `skeleton`
/// over `pt`: distinct classes are adjacent in the quotient exactly when
/// the vertices are adjacent in the skeleton's square, and vertices sharing
/// a class are adjacent in the square.
pub fn is_compatible(skeleton: &Skeleton, phi: &SurjectionAssignment, pt: &PrimeTwinGraph) -> bool {
    if phi.phi.len() != skeleton.vertex_count() || phi.class_count != pt.class_count() || !phi.is_surjective() {
        return false;
    }
    let sq = square(&skeleton.graph);
    let n = skeleton.vertex_count();
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let (cu, cv) = (phi.phi[u], phi.phi[v]);
            if cu == cv {
                sq.has_edge(u, v)
            } else {
                sq.has_edge(u, v) == pt.adjacent(cu, cv)
            }
        })
    })
}
