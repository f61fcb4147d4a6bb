//! Roots that are a clique plus `k` extra vertices.
//!
//! A graph with such a root has at most `2^k + k` true-twin classes, and a
//! class larger than `2^k + k` can lose a vertex without changing the
//! answer. Shrinking every class leaves a kernel of at most `(2^k + k)^2`
//! vertices, which is decided exactly.
//!
//! The exact decision enumerates the modulator `S` and the edges inside it.
//! Every other vertex `u` lies in the clique `C` and is described by
//! `σ(u) = N_H(u) ∩ S`. In the square, `u` sees exactly the modulator
//! vertices in `σ(u) ∪ N_S(σ(u))` plus those attached to some other clique
//! vertex, and two modulator vertices are adjacent iff they are adjacent in
//! `H`, share a modulator neighbour, or share a clique neighbour. Once it is
//! fixed which modulator vertices have one versus several clique
//! neighbours, each `u` can be checked on its own; a small counting DP then
//! picks one `σ(u)` per vertex.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;

use crate::bounds;
use crate::error::SolveError;
use crate::graph::{true_twin_partition, Graph};
use crate::instance::Witness;
use crate::search::{SearchLimits, SearchStats, MAX_MODULATOR};
use crate::solver::{Decision, Outcome, SolveOptions};

/// The shrunken graph. `kept[i]` is the input id of kernel vertex `i`;
/// `deleted` pairs each removed vertex with a kept true twin of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueKernel {
    pub graph: Graph,
    pub kept: Vec<usize>,
    pub deleted: Vec<(usize, usize)>,
}

/// `None` when `g` has more than `2^k + k` twin classes.
pub fn clique_kernel(g: &Graph, k: usize) -> Option<CliqueKernel> {
    let twins = true_twin_partition(g);
    let bound = bounds::clique_twin_bound(k);
    if twins.len() as u64 > bound {
        return None;
    }
    let bound = usize::try_from(bound).unwrap_or(usize::MAX);
    let mut kept = Vec::new();
    let mut deleted = Vec::new();
    for class in twins.classes() {
        for (i, &v) in class.iter().enumerate() {
            if i < bound {
                kept.push(v);
            } else {
                deleted.push((v, class[0]));
            }
        }
    }
    kept.sort_unstable();
    Some(CliqueKernel {
        graph: g.induced_subgraph(&kept),
        kept,
        deleted,
    })
}

type Mask = u32;

fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

/// Exact decision of the clique-plus-`k` root problem on `g`.
pub fn decide_clique(g: &Graph, k: usize, limits: SearchLimits) -> Result<(Option<Witness>, SearchStats), SolveError> {
    if k > MAX_MODULATOR {
        return Err(SolveError::ModulatorTooLarge(k));
    }
    let n = g.vertex_count();
    let mut stats = SearchStats::default();
    if k > n {
        return Ok((None, stats));
    }
    let deadline = limits.max_time.map(|d| Instant::now() + d);
    let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    for s in (0..n).combinations(k) {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::BudgetExhausted {
                reason: "time limit".into(),
                candidates: stats.candidates,
            });
        }
        let mut index = vec![None; n];
        for (i, &v) in s.iter().enumerate() {
            index[v] = Some(i);
        }
        let clique: Vec<usize> = (0..n).filter(|v| index[*v].is_none()).collect();
        if !clique.iter().tuple_combinations().all(|(&u, &v)| g.has_edge(u, v)) {
            continue;
        }
        // G-neighbourhood in S of each clique vertex.
        let seen: Vec<Mask> = clique
            .iter()
            .map(|&u| {
                s.iter()
                    .enumerate()
                    .filter(|(_, &t)| g.has_edge(u, t))
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
            .collect();
        for es in 0u64..1 << pairs.len() {
            stats.configurations += 1;
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| es >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if chosen.iter().any(|&(i, j)| !g.has_edge(s[i], s[j])) {
                continue;
            }
            let mut adj = vec![0 as Mask; k];
            for &(i, j) in &chosen {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            let nbr = |m: Mask| bits(m).fold(0, |acc, i| acc | adj[i]);
            // S-pairs adjacent in G but not yet in the square, and pairs that
            // must stay apart.
            let mut need: Vec<(usize, usize)> = Vec::new();
            let mut apart_pairs = Vec::new();
            let mut bad = false;
            for &(i, j) in &pairs {
                let base = adj[i] >> j & 1 == 1 || adj[i] & adj[j] != 0;
                match (base, g.has_edge(s[i], s[j])) {
                    (true, false) => bad = true,
                    (false, true) => need.push((i, j)),
                    (false, false) => apart_pairs.push((i, j)),
                    (true, true) => {}
                }
            }
            if bad {
                continue;
            }
            let full: Mask = if k == 0 { 0 } else { Mask::MAX >> (32 - k) };
            for d in 0..=full {
                // multi ⊆ d: vertices of D with at least two clique neighbours.
                let mut multi = d;
                loop {
                    stats.nodes += 1;
                    if let Some(w) = assign(k, &seen, d, multi, &need, &apart_pairs, &nbr) {
                        stats.candidates += 1;
                        let witness = build(n, &s, &clique, &adj, &w);
                        return Ok((Some(witness), stats));
                    }
                    if multi == 0 {
                        break;
                    }
                    multi = (multi - 1) & d;
                }
            }
        }
    }
    Ok((None, stats))
}

/// Picks `σ(u)` for every clique vertex so that every vertex of `d` has
/// exactly one clique neighbour (outside `multi`) or at least two (in
/// `multi`), every pair in `need` gets a common clique neighbour, and every
/// vertex sees the right modulator set in the square.
fn assign(
    k: usize,
    seen: &[Mask],
    d: Mask,
    multi: Mask,
    need: &[(usize, usize)],
    apart: &[(usize, usize)],
    nbr: &dyn Fn(Mask) -> Mask,
) -> Option<Vec<Mask>> {
    let single = d & !multi;
    // DP state: contributor count per vertex of d (capped at 2) and which
    // needed pairs are covered.
    type State = (Vec<u8>, u64);
    let start: State = (vec![0; k], 0);
    let mut layer: BTreeMap<State, Vec<Mask>> = BTreeMap::from([(start, Vec::new())]);
    for &row in seen {
        let options: Vec<Mask> = (0..=d)
            .filter(|&sigma| sigma & !d == 0)
            .filter(|&sigma| apart.iter().all(|&(i, j)| sigma >> i & 1 == 0 || sigma >> j & 1 == 0))
            .filter(|&sigma| {
                // Others' attachments as u sees them.
                let others = multi | (single & !sigma);
                sigma | nbr(sigma) | others == row
            })
            .collect();
        if options.is_empty() {
            return None;
        }
        let mut next: BTreeMap<State, Vec<Mask>> = BTreeMap::new();
        for ((counts, covered), chosen) in &layer {
            for &sigma in &options {
                let mut c = counts.clone();
                let mut ok = true;
                for i in bits(sigma) {
                    c[i] = (c[i] + 1).min(2);
                    if single >> i & 1 == 1 && c[i] > 1 {
                        ok = false;
                    }
                }
                if !ok {
                    continue;
                }
                let mut cov = *covered;
                for (b, &(i, j)) in need.iter().enumerate() {
                    if sigma >> i & 1 == 1 && sigma >> j & 1 == 1 {
                        cov |= 1 << b;
                    }
                }
                next.entry((c, cov)).or_insert_with(|| {
                    let mut v = chosen.clone();
                    v.push(sigma);
                    v
                });
            }
        }
        layer = next;
    }
    let all_needed: u64 = if need.is_empty() {
        0
    } else {
        u64::MAX >> (64 - need.len())
    };
    layer
        .into_iter()
        .find(|((counts, covered), _)| {
            *covered == all_needed
                && (0..k).all(|i| match (d >> i & 1 == 1, multi >> i & 1 == 1) {
                    (false, _) => counts[i] == 0,
                    (true, false) => counts[i] == 1,
                    (true, true) => counts[i] == 2,
                })
        })
        .map(|(_, chosen)| chosen)
}

fn build(n: usize, s: &[usize], clique: &[usize], adj: &[Mask], sigma: &[Mask]) -> Witness {
    let mut h = Graph::new(n);
    for (i, &a) in s.iter().enumerate() {
        for j in bits(adj[i]) {
            if i < j {
                h.add_edge(a, s[j]);
            }
        }
    }
    for (&u, &v) in clique.iter().tuple_combinations() {
        h.add_edge(u, v);
    }
    for (&u, &m) in clique.iter().zip(sigma) {
        for i in bits(m) {
            h.add_edge(u, s[i]);
        }
    }
    Witness::new(h, s.to_vec())
}

/// Decides whether `g` has a root `H` with `H - S` complete for some
/// `k`-set `S`. An empty `H - S` counts as complete.
pub fn solve_clique_root(g: &Graph, k: usize, options: SolveOptions) -> Result<Outcome, SolveError> {
    let no = |stats| Outcome {
        decision: Decision::No,
        witness: None,
        stats,
    };
    if k > g.vertex_count() {
        return Ok(no(SearchStats::default()));
    }
    let Some(kernel) = clique_kernel(g, k) else {
        return Ok(no(SearchStats::default()));
    };
    let (found, stats) = decide_clique(&kernel.graph, k, options.limits)?;
    let Some(w) = found else { return Ok(no(stats)) };
    let lifted = lift_clique_witness(g, &kernel, &w)?;
    Ok(Outcome {
        decision: Decision::Yes,
        witness: Some(lifted),
        stats,
    })
}

/// Re-inserts every deleted vertex as a true twin (in the root) of a kernel
/// vertex from its class that is not in the modulator.
pub fn lift_clique_witness(g: &Graph, kernel: &CliqueKernel, w: &Witness) -> Result<Witness, SolveError> {
    let n = g.vertex_count();
    let mut root = Graph::new(n);
    for (u, v) in w.root.edges() {
        root.add_edge(kernel.kept[u], kernel.kept[v]);
    }
    let modulator: Vec<usize> = w.modulator.iter().map(|&s| kernel.kept[s]).collect();
    let twins = true_twin_partition(g);
    let in_s = |v: usize| modulator.contains(&v);
    let mut present: Vec<bool> = vec![false; n];
    for &v in &kernel.kept {
        present[v] = true;
    }
    for &(v, rep) in &kernel.deleted {
        let class = &twins.classes()[twins.class_of(rep)];
        let Some(&u) = class.iter().find(|&&u| present[u] && !in_s(u)) else {
            return Err(SolveError::Internal(format!("no modulator-free twin for vertex {v}")));
        };
        let nb: Vec<usize> = root.neighbors(u).ones().collect();
        root.add_edge(v, u);
        for x in nb {
            root.add_edge(v, x);
        }
        present[v] = true;
    }
    let lifted = Witness::new(root, modulator);
    lifted
        .verify_clique(g, w.modulator.len())
        .map_err(|d| SolveError::Internal(format!("lifted clique witness rejected: {d}")))?;
    Ok(lifted)
}
