//! Undirected simple graphs stored as bit rows, plus the square, true-twin
//! partition and prime-twin quotient.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::GraphError;

/// An undirected simple graph on the vertices `0..n`.
///
/// Each vertex owns a bit row of its neighbours, so squaring is a row-OR
/// over the neighbourhood.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Adds `uv`, reporting whether it was new.
    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        let fresh = !self.rows[u].contains(v);
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(fresh)
    }

    /// Adds `uv`. Panics on a loop or an out-of-range vertex.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn closed_neighborhood(&self, v: usize) -> FixedBitSet {
        let mut row = self.rows[v].clone();
        row.insert(v);
        row
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// The subgraph induced by `keep`, relabelled so that `keep[i]` becomes `i`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            position[v] = i;
        }
        let mut g = Graph::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for w in self.rows[v].ones() {
                let j = position[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Deletes `removed` and returns the remaining graph with the kept
    /// original ids in increasing order.
    pub fn without_vertices(&self, removed: &[usize]) -> (Graph, Vec<usize>) {
        let mut gone = FixedBitSet::with_capacity(self.vertex_count());
        for &v in removed {
            gone.insert(v);
        }
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&v| !gone.contains(v)).collect();
        (self.induced_subgraph(&keep), keep)
    }

    /// Disjoint union, with `other` shifted after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let mut g = Graph::new(shift + other.vertex_count());
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + shift, v + shift);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }

    /// Largest degree, zero for the empty graph.
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn square(&self) -> Graph {
        square(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.vertex_count())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// The square: same vertices, `uv` an edge iff `u` and `v` are at distance 1
/// or 2.
pub fn square(g: &Graph) -> Graph {
    let rows = (0..g.vertex_count())
        .map(|v| {
            let mut row = g.rows[v].clone();
            for u in g.rows[v].ones() {
                row.union_with(&g.rows[u]);
            }
            row.set(v, false);
            row
        })
        .collect();
    Graph { rows }
}

/// Whether `h` squares to exactly `g`.
pub fn is_square_root(h: &Graph, g: &Graph) -> Result<bool, GraphError> {
    if h.vertex_count() != g.vertex_count() {
        return Err(GraphError::OrderMismatch {
            left: h.vertex_count(),
            right: g.vertex_count(),
        });
    }
    Ok(square(h) == *g)
}

/// Partition of the vertices into classes of true twins (equal closed
/// neighbourhoods).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl TwinPartition {
    /// Classes ordered by their smallest member; members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn true_twin_partition(g: &Graph) -> TwinPartition {
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let next = classes.len();
        let c = *index.entry(g.closed_neighborhood(v)).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(v);
        class_of.push(c);
    }
    TwinPartition { classes, class_of }
}

/// Quotient of a graph by its true-twin classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTwinGraph {
    pub quotient: Graph,
    pub sizes: Vec<usize>,
}

impl PrimeTwinGraph {
    pub fn class_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.quotient.has_edge(a, b)
    }
}

pub fn prime_twin_graph(g: &Graph, twins: &TwinPartition) -> PrimeTwinGraph {
    let r = twins.len();
    let mut quotient = Graph::new(r);
    for (i, class) in twins.classes().iter().enumerate() {
        let rep = class[0];
        for w in g.neighbors(rep).ones() {
            let j = twins.class_of(w);
            if j != i {
                quotient.rows[i].insert(j);
                quotient.rows[j].insert(i);
            }
        }
    }
    PrimeTwinGraph {
        quotient,
        sizes: twins.classes().iter().map(Vec::len).collect(),
    }
}

/// Connected components ordered by smallest member; members ascending.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut components = Vec::new();
    for start in 0..n {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start);
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for w in g.neighbors(v).ones() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}
