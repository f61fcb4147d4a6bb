//! One entry point per problem variant: solve, check a witness, or ask the
//! brute-force oracle.

use std::fmt;
use std::str::FromStr;

use crate::clique::solve_clique_root;
use crate::error::{OracleError, SolveError};
use crate::graph::Graph;
use crate::instance::{Instance, Witness, WitnessDefect};
use crate::oracle::{brute_force_root, find_modulator, roots_pure, OracleConfig, OracleMode, RootConstraint};
use crate::solver::{solve, solve_degree_one_root, solve_matching_root, solve_vc_root, Outcome, SolveOptions};

/// What `H - S` must look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `|S| = k`, `H - S` is `p` isolated vertices and `q` disjoint edges.
    Dpq { p: usize, q: usize, k: usize },
    /// `|S| <= k`, `H - S` edgeless.
    VertexCover { k: usize },
    /// `|S| = k`, `H - S` a perfect matching.
    Matching { k: usize },
    /// `|S| <= k`, `H - S` of maximum degree at most one.
    DegreeOne { k: usize },
    /// `|S| = k`, `H - S` complete.
    Clique { k: usize },
}

/// Variant names as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantKind {
    Dpq,
    VertexCover,
    Matching,
    DegreeOne,
    Clique,
}

impl VariantKind {
    pub const ALL: [VariantKind; 5] = [
        VariantKind::Dpq,
        VariantKind::VertexCover,
        VariantKind::Matching,
        VariantKind::DegreeOne,
        VariantKind::Clique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantKind::Dpq => "dpq",
            VariantKind::VertexCover => "vc",
            VariantKind::Matching => "matching",
            VariantKind::DegreeOne => "degree-one",
            VariantKind::Clique => "clique",
        }
    }

    /// `p` and `q` are only read for `Dpq`.
    pub fn with(self, p: usize, q: usize, k: usize) -> Variant {
        match self {
            VariantKind::Dpq => Variant::Dpq { p, q, k },
            VariantKind::VertexCover => Variant::VertexCover { k },
            VariantKind::Matching => Variant::Matching { k },
            VariantKind::DegreeOne => Variant::DegreeOne { k },
            VariantKind::Clique => Variant::Clique { k },
        }
    }
}

impl fmt::Display for VariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariantKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VariantKind::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant {s:?}"))
    }
}

impl Variant {
    pub fn k(self) -> usize {
        match self {
            Variant::Dpq { k, .. }
            | Variant::VertexCover { k }
            | Variant::Matching { k }
            | Variant::DegreeOne { k }
            | Variant::Clique { k } => k,
        }
    }

    pub fn solve(self, g: &Graph, options: SolveOptions) -> Result<Outcome, SolveError> {
        match self {
            Variant::Dpq { p, q, k } => solve(&Instance::new(g.clone(), p, q, k)?, options),
            Variant::VertexCover { k } => solve_vc_root(g, k, options),
            Variant::Matching { k } => solve_matching_root(g, k, options),
            Variant::DegreeOne { k } => solve_degree_one_root(g, k, options),
            Variant::Clique { k } => solve_clique_root(g, k, options),
        }
    }

    /// Checks that `w.root` squares to `g` and that `w.modulator` has the
    /// size and leaves the structure this variant asks for.
    pub fn verify(self, w: &Witness, g: &Graph) -> Result<(), WitnessDefect> {
        let n = g.vertex_count();
        let s = w.modulator.len();
        let at_most = |k: usize| {
            if s > k {
                Err(WitnessDefect::ModulatorTooLarge { max: k, found: s })
            } else {
                Ok(())
            }
        };
        let exact = |p: usize, q: usize, k: usize| match Instance::new(g.clone(), p, q, k) {
            Ok(inst) => w.verify(&inst),
            Err(_) => Err(WitnessDefect::ModulatorSize { expected: k, found: s }),
        };
        match self {
            Variant::Dpq { p, q, k } => {
                if p + 2 * q + k != n {
                    return Err(WitnessDefect::Profile {
                        expected: (p, q),
                        found: w.matching_profile().unwrap_or_default(),
                    });
                }
                exact(p, q, k)
            }
            Variant::VertexCover { k } => {
                at_most(k)?;
                exact(n.saturating_sub(s), 0, s)
            }
            Variant::Matching { k } => {
                if s != k {
                    return Err(WitnessDefect::ModulatorSize { expected: k, found: s });
                }
                exact(0, n.saturating_sub(k) / 2, k)
            }
            Variant::DegreeOne { k } => {
                at_most(k)?;
                let (p, q) = w.matching_profile().ok_or(WitnessDefect::DegreeTooLarge)?;
                exact(p, q, s)
            }
            Variant::Clique { k } => w.verify_clique(g, k),
        }
    }

    /// Oracle constraints whose union is this variant on an `n`-vertex graph.
    pub fn constraints(self, n: usize) -> Vec<RootConstraint> {
        match self {
            Variant::Dpq { p, q, k } => vec![RootConstraint::Pqk { p, q, k }],
            Variant::VertexCover { k } => vec![RootConstraint::VertexCover { k }],
            Variant::Matching { k } => {
                if k <= n && (n - k).is_multiple_of(2) {
                    vec![RootConstraint::Pqk {
                        p: 0,
                        q: (n - k) / 2,
                        k,
                    }]
                } else {
                    Vec::new()
                }
            }
            Variant::DegreeOne { k } => Instance::splits(n, k)
                .into_iter()
                .map(|(p, q, k)| RootConstraint::Pqk { p, q, k })
                .collect(),
            Variant::Clique { k } => vec![RootConstraint::Clique { k }],
        }
    }

    /// Brute-force answer, independent of the FPT search.
    pub fn oracle(self, g: &Graph, config: OracleConfig) -> Result<Option<Witness>, OracleError> {
        let constraints = self.constraints(g.vertex_count());
        if config.mode == OracleMode::Pure {
            for h in roots_pure(g, config.edge_cap)? {
                for &c in &constraints {
                    if let Some(s) = find_modulator(&h, c) {
                        return Ok(Some(Witness::new(h, s)));
                    }
                }
            }
            return Ok(None);
        }
        for c in constraints {
            if let Some(w) = brute_force_root(g, c, config)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}
