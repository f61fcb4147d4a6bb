//! Matched twins and nested twins: two equivalence relations on ordered
//! vertex pairs.
//!
//! * `(x,y)` and `(z,w)` are *matched twins* when both pairs are edges and
//!   `N[x] \ {y} = N[z] \ {w}` and `N[y] \ {x} = N[w] \ {z}`.
//! * `(x,y)` is *comparable* when `N[x] ⊆ N[y]`; two comparable pairs are
//!   *nested twins* when `N(x) \ {y} = N(z) \ {w}` and
//!   `N[y] \ {x} = N[w] \ {z}`.
//!
//! Orientation matters: `(x,y)` and `(y,x)` are never related.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::PairError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPair {
    pub first: usize,
    pub second: usize,
}

impl OrderedPair {
    pub fn new(first: usize, second: usize) -> Result<Self, PairError> {
        if first == second {
            return Err(PairError::Degenerate(first));
        }
        Ok(OrderedPair { first, second })
    }

    pub fn reversed(self) -> Self {
        OrderedPair {
            first: self.second,
            second: self.first,
        }
    }
}

impl From<OrderedPair> for (usize, usize) {
    fn from(p: OrderedPair) -> Self {
        (p.first, p.second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairRelation {
    Matched,
    Nested,
}

#[derive(Clone, Debug)]
pub struct PairClassPartition {
    pub relation: PairRelation,
    classes: Vec<Vec<OrderedPair>>,
    class_of: HashMap<OrderedPair, usize>,
}

impl PairClassPartition {
    /// Classes ordered by least member; members ascending.
    pub fn classes(&self) -> &[Vec<OrderedPair>] {
        &self.classes
    }

    pub fn class_of(&self, pair: OrderedPair) -> Option<usize> {
        self.class_of.get(&pair).copied()
    }

    /// Number of pairs in the domain of the relation.
    pub fn domain_size(&self) -> usize {
        self.class_of.len()
    }
}

fn minus(mut set: FixedBitSet, v: usize) -> FixedBitSet {
    set.set(v, false);
    set
}

/// `(first key, second key)` of a pair: the two neighbourhood sets that must
/// agree for related pairs.
fn class_key(g: &Graph, relation: PairRelation, pair: OrderedPair) -> (FixedBitSet, FixedBitSet) {
    let (x, y) = (pair.first, pair.second);
    let first = match relation {
        PairRelation::Matched => minus(g.closed_neighborhood(x), y),
        PairRelation::Nested => minus(g.neighbors(x).clone(), y),
    };
    (first, minus(g.closed_neighborhood(y), x))
}

/// All ordered pairs `(x, y)` with `N[x] ⊆ N[y]`, sorted.
pub fn comparable_pairs(g: &Graph) -> Vec<OrderedPair> {
    let closed: Vec<FixedBitSet> = (0..g.vertex_count()).map(|v| g.closed_neighborhood(v)).collect();
    let mut pairs = Vec::new();
    for x in 0..g.vertex_count() {
        // N[x] ⊆ N[y] forces y ∈ N(x).
        for y in g.neighbors(x).ones() {
            if closed[x].is_subset(&closed[y]) {
                pairs.push(OrderedPair { first: x, second: y });
            }
        }
    }
    pairs
}

/// Both orientations of every edge, sorted.
pub fn adjacent_pairs(g: &Graph) -> Vec<OrderedPair> {
    let mut pairs: Vec<OrderedPair> = (0..g.vertex_count())
        .flat_map(|x| g.neighbors(x).ones().map(move |y| OrderedPair { first: x, second: y }))
        .collect();
    pairs.sort_unstable();
    pairs
}

fn partition(g: &Graph, relation: PairRelation, domain: Vec<OrderedPair>) -> PairClassPartition {
    let mut by_key: HashMap<(FixedBitSet, FixedBitSet), usize> = HashMap::new();
    let mut classes: Vec<Vec<OrderedPair>> = Vec::new();
    let mut class_of = HashMap::with_capacity(domain.len());
    // The domain is sorted, so classes come out ordered by least member.
    for pair in domain {
        let next = classes.len();
        let c = *by_key.entry(class_key(g, relation, pair)).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(pair);
        class_of.insert(pair, c);
    }
    PairClassPartition {
        relation,
        classes,
        class_of,
    }
}

/// Partition of the `2m` ordered adjacent pairs into matched-twin classes.
pub fn matched_twin_classes(g: &Graph) -> PairClassPartition {
    partition(g, PairRelation::Matched, adjacent_pairs(g))
}

/// Partition of the comparable pairs into nested-twin classes.
pub fn nested_twin_classes(g: &Graph) -> PairClassPartition {
    partition(g, PairRelation::Nested, comparable_pairs(g))
}

/// Direct check of the defining conditions, domain membership included.
pub fn related(g: &Graph, relation: PairRelation, a: OrderedPair, b: OrderedPair) -> bool {
    let in_domain = |p: OrderedPair| match relation {
        PairRelation::Matched => g.has_edge(p.first, p.second),
        PairRelation::Nested => g
            .closed_neighborhood(p.first)
            .is_subset(&g.closed_neighborhood(p.second)),
    };
    if a.first == a.second || b.first == b.second || !in_domain(a) || !in_domain(b) {
        return false;
    }
    class_key(g, relation, a) == class_key(g, relation, b)
}

/// Outcome of checking the structural properties shared by two distinct
/// related pairs `(x,y)` and `(z,w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairLemmaReport {
    /// `{x,y}` and `{z,w}` are disjoint.
    pub disjoint: bool,
    /// Neither `xw` nor `zy` is an edge.
    pub cross_non_edges: bool,
    /// `yw` is an edge.
    pub seconds_adjacent: bool,
    /// For matched twins `xz` is an edge; for nested twins it is not.
    pub firsts_as_expected: bool,
    /// Swapping `x↔z`, `y↔w` is an automorphism.
    pub swap_is_automorphism: bool,
}

impl PairLemmaReport {
    pub fn all_hold(&self) -> bool {
        self.disjoint
            && self.cross_non_edges
            && self.seconds_adjacent
            && self.firsts_as_expected
            && self.swap_is_automorphism
    }
}

pub fn verify_pair_lemma(
    g: &Graph,
    a: OrderedPair,
    b: OrderedPair,
    relation: PairRelation,
) -> Result<PairLemmaReport, PairError> {
    if a == b || !related(g, relation, a, b) {
        return Err(PairError::NotRelated(a.into(), b.into()));
    }
    let (x, y, z, w) = (a.first, a.second, b.first, b.second);
    let disjoint = x != z && x != w && y != z && y != w;
    let firsts_adjacent = g.has_edge(x, z);
    let firsts_as_expected = match relation {
        PairRelation::Matched => firsts_adjacent,
        PairRelation::Nested => !firsts_adjacent,
    };
    let swap_is_automorphism = disjoint && {
        let alpha = |v: usize| match v {
            _ if v == x => z,
            _ if v == z => x,
            _ if v == y => w,
            _ if v == w => y,
            _ => v,
        };
        g.edges().all(|(u, v)| g.has_edge(alpha(u), alpha(v)))
    };
    Ok(PairLemmaReport {
        disjoint,
        cross_non_edges: !g.has_edge(x, w) && !g.has_edge(z, y),
        seconds_adjacent: g.has_edge(y, w),
        firsts_as_expected,
        swap_is_automorphism,
    })
}
