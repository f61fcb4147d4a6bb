//! Exhaustive reference solvers, independent of the reduction rules and the
//! skeleton machinery.
//!
//! [`OracleMode::Pure`] tries every subset of the edges of `G` as a root, in
//! increasing bitmask order. [`OracleMode::Propagating`] walks the same
//! space depth-first but drops branches that can no longer square to `G` or
//! can no longer meet the modulator constraint; it reaches larger graphs and
//! is cross-checked against the pure mode in the tests.

use std::ops::ControlFlow;

use itertools::Itertools;

use crate::error::OracleError;
use crate::graph::{square, Graph};
use crate::instance::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootConstraint {
    /// `|S| = k` and `H - S` is `p` isolated vertices plus `q` disjoint edges.
    Pqk { p: usize, q: usize, k: usize },
    /// `|S| = k` and `H - S` is complete.
    Clique { k: usize },
    /// `|S| <= k` and `H - S` has no edges.
    VertexCover { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Pure,
    Propagating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest edge count the pure mode accepts.
    pub edge_cap: usize,
    pub mode: OracleMode,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            edge_cap: 20,
            mode: OracleMode::Pure,
        }
    }
}

fn modulator_fits(h: &Graph, s: &[usize], constraint: RootConstraint) -> bool {
    let n = h.vertex_count();
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !in_s[v]).collect();
    let outside_degree = |v: usize| h.neighbors(v).ones().filter(|&w| !in_s[w]).count();
    match constraint {
        RootConstraint::Pqk { p, q, .. } => {
            let mut isolated = 0;
            let mut ends = 0;
            for &v in &rest {
                match outside_degree(v) {
                    0 => isolated += 1,
                    1 => ends += 1,
                    _ => return false,
                }
            }
            isolated == p && ends == 2 * q
        }
        RootConstraint::Clique { .. } => rest.iter().tuple_combinations().all(|(&u, &v)| h.has_edge(u, v)),
        RootConstraint::VertexCover { .. } => rest.iter().all(|&v| outside_degree(v) == 0),
    }
}

/// The first modulator (in lexicographic order, smallest size first) that
/// makes `(h, S)` satisfy `constraint`.
pub fn find_modulator(h: &Graph, constraint: RootConstraint) -> Option<Vec<usize>> {
    let n = h.vertex_count();
    let sizes = match constraint {
        RootConstraint::Pqk { p, q, k } => {
            if p + 2 * q + k != n {
                return None;
            }
            k..=k
        }
        RootConstraint::Clique { k } => k..=k,
        RootConstraint::VertexCover { k } => 0..=k,
    };
    sizes
        .filter(|&size| size <= n)
        .flat_map(|size| (0..n).combinations(size))
        .find(|s| modulator_fits(h, s, constraint))
}

/// Every root of `g` in the pure enumeration order.
pub fn roots_pure(g: &Graph, edge_cap: usize) -> Result<Vec<Graph>, OracleError> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() > edge_cap || edges.len() >= 64 {
        return Err(OracleError::EdgeCapExceeded {
            edges: edges.len(),
            cap: edge_cap.min(63),
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..1u64 << edges.len() {
        let chosen = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let h = Graph::from_edges(g.vertex_count(), chosen).expect("edges of g");
        if square(&h) == *g {
            out.push(h);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Open,
    In,
    Out,
}

/// Depth-first enumeration of roots with propagation.
struct Propagator<'a> {
    g: &'a Graph,
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `index[u * n + v]` is the edge id of `uv` in `g`.
    index: Vec<Option<usize>>,
    constraint: Option<RootConstraint>,
}

impl<'a> Propagator<'a> {
    fn new(g: &'a Graph, constraint: Option<RootConstraint>) -> Self {
        let n = g.vertex_count();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut index = vec![None; n * n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            index[u * n + v] = Some(i);
            index[v * n + u] = Some(i);
        }
        Propagator {
            g,
            n,
            edges,
            index,
            constraint,
        }
    }

    fn id(&self, u: usize, v: usize) -> Option<usize> {
        self.index[u * self.n + v]
    }

    fn set(&self, cells: &mut [Cell], e: usize, value: Cell, changed: &mut bool) -> bool {
        match cells[e] {
            Cell::Open => {
                cells[e] = value;
                *changed = true;
                true
            }
            c => c == value,
        }
    }

    /// Returns false on a contradiction.
    fn propagate(&self, cells: &mut [Cell]) -> bool {
        let g = self.g;
        loop {
            let mut changed = false;
            for (e, &(u, x)) in self.edges.iter().enumerate() {
                if cells[e] != Cell::In {
                    continue;
                }
                // u and x share every H-neighbour, so each neighbour of one
                // must be a G-neighbour of the other.
                for (a, b) in [(u, x), (x, u)] {
                    for w in g.neighbors(b).ones() {
                        if w != a && !g.has_edge(a, w) {
                            let f = self.id(b, w).expect("edge of g");
                            if !self.set(cells, f, Cell::Out, &mut changed) {
                                return false;
                            }
                        }
                    }
                }
            }
            for (e, &(u, v)) in self.edges.iter().enumerate() {
                if cells[e] != Cell::Out {
                    continue;
                }
                let mut witness = None;
                let mut count = 0;
                for w in g.neighbors(u).ones() {
                    if w == v || !g.has_edge(v, w) {
                        continue;
                    }
                    let (a, b) = (self.id(u, w).expect("edge"), self.id(v, w).expect("edge"));
                    if cells[a] != Cell::Out && cells[b] != Cell::Out {
                        count += 1;
                        witness = Some((a, b));
                        if count > 1 {
                            break;
                        }
                    }
                }
                match (count, witness) {
                    (0, _) => return false,
                    (1, Some((a, b)))
                        if (!self.set(cells, a, Cell::In, &mut changed)
                            || !self.set(cells, b, Cell::In, &mut changed)) =>
                    {
                        return false;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Whether some modulator of the allowed size can still work.
    fn constraint_possible(&self, cells: &[Cell]) -> bool {
        let Some(constraint) = self.constraint else { return true };
        let n = self.n;
        let in_h = |u: usize, v: usize| self.id(u, v).is_some_and(|e| cells[e] == Cell::In);
        let out_h = |u: usize, v: usize| self.id(u, v).is_none_or(|e| cells[e] == Cell::Out);
        // Sets that S must hit, given as small vertex lists.
        let (k, obstacles): (usize, Vec<Vec<usize>>) = match constraint {
            RootConstraint::Pqk { k, .. } => {
                let mut paths = Vec::new();
                for x in 0..n {
                    let nb: Vec<usize> = (0..n).filter(|&w| w != x && in_h(x, w)).collect();
                    for (&a, &b) in nb.iter().tuple_combinations() {
                        paths.push(vec![a, x, b]);
                    }
                }
                (k, paths)
            }
            RootConstraint::Clique { k } => (
                k,
                (0..n)
                    .tuple_combinations()
                    .filter(|&(u, v)| out_h(u, v))
                    .map(|(u, v)| vec![u, v])
                    .collect(),
            ),
            RootConstraint::VertexCover { k } => (
                k,
                self.edges
                    .iter()
                    .enumerate()
                    .filter(|(e, _)| cells[*e] == Cell::In)
                    .map(|(_, &(u, v))| vec![u, v])
                    .collect(),
            ),
        };
        fn hit(obstacles: &[Vec<usize>], chosen: &mut Vec<usize>, budget: usize) -> bool {
            let Some(open) = obstacles.iter().find(|o| !o.iter().any(|v| chosen.contains(v))) else {
                return true;
            };
            if budget == 0 {
                return false;
            }
            for &v in open {
                chosen.push(v);
                let ok = hit(obstacles, chosen, budget - 1);
                chosen.pop();
                if ok {
                    return true;
                }
            }
            false
        }
        hit(&obstacles, &mut Vec::new(), k)
    }

    fn dfs(&self, cells: &mut [Cell], visit: &mut dyn FnMut(Graph) -> ControlFlow<()>) -> ControlFlow<()> {
        if !self.propagate(cells) || !self.constraint_possible(cells) {
            return ControlFlow::Continue(());
        }
        let Some(e) = cells.iter().position(|&c| c == Cell::Open) else {
            let chosen = self
                .edges
                .iter()
                .zip(cells.iter())
                .filter(|(_, &c)| c == Cell::In)
                .map(|(&e, _)| e);
            let h = Graph::from_edges(self.n, chosen).expect("edges of g");
            if square(&h) == *self.g {
                return visit(h);
            }
            return ControlFlow::Continue(());
        };
        for value in [Cell::In, Cell::Out] {
            let mut next = cells.to_vec();
            next[e] = value;
            self.dfs(&mut next, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn run(&self, visit: &mut dyn FnMut(Graph) -> ControlFlow<()>) {
        let mut cells = vec![Cell::Open; self.edges.len()];
        let _ = self.dfs(&mut cells, visit);
    }
}

/// Every root of `g`, found by the propagating search (ordered with edges
/// of lower index included first).
pub fn roots_propagating(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    Propagator::new(g, None).run(&mut |h| {
        out.push(h);
        ControlFlow::Continue(())
    });
    out
}

/// Every root `H` of `g` that admits a modulator satisfying `constraint`.
pub fn constrained_roots(g: &Graph, constraint: RootConstraint) -> Vec<Witness> {
    let mut out = Vec::new();
    Propagator::new(g, Some(constraint)).run(&mut |h| {
        if let Some(s) = find_modulator(&h, constraint) {
            out.push(Witness::new(h, s));
        }
        ControlFlow::Continue(())
    });
    out
}

/// A root of `g` with a modulator satisfying `constraint`, or `None`.
pub fn brute_force_root(
    g: &Graph,
    constraint: RootConstraint,
    config: OracleConfig,
) -> Result<Option<Witness>, OracleError> {
    match config.mode {
        OracleMode::Pure => {
            for h in roots_pure(g, config.edge_cap)? {
                if let Some(s) = find_modulator(&h, constraint) {
                    return Ok(Some(Witness::new(h, s)));
                }
            }
            Ok(None)
        }
        OracleMode::Propagating => {
            let mut found = None;
            Propagator::new(g, Some(constraint)).run(&mut |h| match find_modulator(&h, constraint) {
                Some(s) => {
                    found = Some(Witness::new(h, s));
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            });
            Ok(found)
        }
    }
}

/// Minimum number of bicliques covering the edges of a bipartite graph with
/// sides `left` and `right`. Meant for graphs with a handful of edges.
pub fn biclique_cover_min(b: &Graph, left: &[usize], right: &[usize]) -> Result<usize, OracleError> {
    let n = b.vertex_count();
    let mut side = vec![None; n];
    for &v in left {
        side[v] = Some(false);
    }
    for &v in right {
        if side[v].is_some() {
            return Err(OracleError::NotBipartite);
        }
        side[v] = Some(true);
    }
    let edges: Vec<(usize, usize)> = b.edges().collect();
    for &(u, v) in &edges {
        match (side[u], side[v]) {
            (Some(a), Some(c)) if a != c => {}
            _ => return Err(OracleError::NotBipartite),
        }
    }
    if edges.len() > 24 {
        return Err(OracleError::EdgeCapExceeded {
            edges: edges.len(),
            cap: 24,
        });
    }
    let edge_bit = |u: usize, v: usize| edges.iter().position(|&e| e == (u.min(v), u.max(v)));
    // Edge sets of all maximal bicliques.
    let mut bicliques: Vec<u32> = Vec::new();
    for l in (1..=left.len()).flat_map(|s| left.iter().copied().combinations(s)) {
        for r in (1..=right.len()).flat_map(|s| right.iter().copied().combinations(s)) {
            let mut mask = 0u32;
            let complete = l.iter().all(|&x| {
                r.iter().all(|&y| match edge_bit(x, y) {
                    Some(i) => {
                        mask |= 1 << i;
                        true
                    }
                    None => false,
                })
            });
            if complete {
                bicliques.push(mask);
            }
        }
    }
    let maximal: Vec<u32> = bicliques
        .iter()
        .copied()
        .filter(|&m| !bicliques.iter().any(|&o| o != m && o & m == m))
        .unique()
        .collect();
    let all = if edges.is_empty() {
        0
    } else {
        u32::MAX >> (32 - edges.len())
    };
    fn cover(maximal: &[u32], covered: u32, all: u32, budget: usize) -> bool {
        if covered == all {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let lowest = (!covered & all).trailing_zeros();
        maximal
            .iter()
            .filter(|&&m| m >> lowest & 1 == 1)
            .any(|&m| cover(maximal, covered | m, all, budget - 1))
    }
    Ok((0..=edges.len())
        .find(|&t| cover(&maximal, 0, all, t))
        .expect("single edges always cover"))
}
