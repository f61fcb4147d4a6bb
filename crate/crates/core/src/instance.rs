//! Problem instances and root witnesses.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::InstanceError;
use crate::graph::{square, Graph};

/// `(G, p, q, k)`: find a square root `H` of `G` and a `k`-set `S` with
/// `H - S` consisting of `p` isolated vertices and `q` disjoint edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub p: usize,
    pub q: usize,
    pub k: usize,
}

impl Instance {
    pub fn new(graph: Graph, p: usize, q: usize, k: usize) -> Result<Self, InstanceError> {
        let n = graph.vertex_count();
        if p + 2 * q + k != n {
            return Err(InstanceError::BudgetMismatch { p, q, k, n });
        }
        Ok(Instance { graph, p, q, k })
    }

    /// Every valid `(p, q, k)` split for `graph` with `k <= max_k`.
    pub fn splits(n: usize, max_k: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 0..=max_k.min(n) {
            for q in 0..=(n - k) / 2 {
                out.push((n - k - 2 * q, q, k));
            }
        }
        out
    }
}

/// A root `H` together with its modulator `S` (sorted, distinct).
#[derive(Clone, PartialEq, Eq)]
pub struct Witness {
    pub root: Graph,
    pub modulator: Vec<usize>,
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Witness")
            .field("root", &self.root)
            .field("modulator", &self.modulator)
            .finish()
    }
}

/// What is wrong with a proposed witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessDefect {
    OrderMismatch,
    NotARoot,
    BadModulator,
    ModulatorSize {
        expected: usize,
        found: usize,
    },
    ModulatorTooLarge {
        max: usize,
        found: usize,
    },
    DegreeTooLarge,
    Profile {
        expected: (usize, usize),
        found: (usize, usize),
    },
    NotAClique,
}

impl fmt::Display for WitnessDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDefect::OrderMismatch => write!(f, "root and graph differ in order"),
            WitnessDefect::NotARoot => write!(f, "root does not square to the graph"),
            WitnessDefect::BadModulator => write!(f, "modulator has repeated or out-of-range vertices"),
            WitnessDefect::ModulatorSize { expected, found } => {
                write!(f, "modulator has {found} vertices, expected {expected}")
            }
            WitnessDefect::ModulatorTooLarge { max, found } => {
                write!(f, "modulator has {found} vertices, at most {max} allowed")
            }
            WitnessDefect::DegreeTooLarge => {
                write!(f, "root minus modulator has a vertex of degree above one")
            }
            WitnessDefect::Profile { expected, found } => write!(
                f,
                "root minus modulator has (isolated, edges) = {found:?}, expected {expected:?}"
            ),
            WitnessDefect::NotAClique => write!(f, "root minus modulator is not complete"),
        }
    }
}

impl Witness {
    pub fn new(root: Graph, mut modulator: Vec<usize>) -> Self {
        modulator.sort_unstable();
        Witness { root, modulator }
    }

    fn modulator_set(&self) -> Option<FixedBitSet> {
        let n = self.root.vertex_count();
        let mut set = FixedBitSet::with_capacity(n);
        for &s in &self.modulator {
            if s >= n || set.contains(s) {
                return None;
            }
            set.insert(s);
        }
        Some(set)
    }

    /// `(isolated, edges)` of `H - S` when it has maximum degree at most one.
    pub fn matching_profile(&self) -> Option<(usize, usize)> {
        let set = self.modulator_set()?;
        let mut isolated = 0;
        let mut ends = 0;
        for v in 0..self.root.vertex_count() {
            if set.contains(v) {
                continue;
            }
            match self.root.neighbors(v).difference(&set).count() {
                0 => isolated += 1,
                1 => ends += 1,
                _ => return None,
            }
        }
        Some((isolated, ends / 2))
    }

    fn check_root(&self, g: &Graph, k: usize) -> Result<(), WitnessDefect> {
        if self.root.vertex_count() != g.vertex_count() {
            return Err(WitnessDefect::OrderMismatch);
        }
        if self.modulator_set().is_none() {
            return Err(WitnessDefect::BadModulator);
        }
        if self.modulator.len() != k {
            return Err(WitnessDefect::ModulatorSize {
                expected: k,
                found: self.modulator.len(),
            });
        }
        if square(&self.root) != *g {
            return Err(WitnessDefect::NotARoot);
        }
        Ok(())
    }

    /// Full check against `(G, p, q, k)`.
    pub fn verify(&self, inst: &Instance) -> Result<(), WitnessDefect> {
        self.check_root(&inst.graph, inst.k)?;
        let found = self.matching_profile().ok_or(WitnessDefect::DegreeTooLarge)?;
        if found != (inst.p, inst.q) {
            return Err(WitnessDefect::Profile {
                expected: (inst.p, inst.q),
                found,
            });
        }
        Ok(())
    }

    /// Full check for the clique variant: `H - S` complete, `|S| = k`.
    pub fn verify_clique(&self, g: &Graph, k: usize) -> Result<(), WitnessDefect> {
        self.check_root(g, k)?;
        let set = self.modulator_set().expect("checked");
        let rest: Vec<usize> = (0..g.vertex_count()).filter(|v| !set.contains(*v)).collect();
        for (i, &u) in rest.iter().enumerate() {
            for &v in &rest[i + 1..] {
                if !self.root.has_edge(u, v) {
                    return Err(WitnessDefect::NotAClique);
                }
            }
        }
        Ok(())
    }
}
