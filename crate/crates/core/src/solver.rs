//! Deciding `(G, p, q, k)` and the problem variants built on it.
//!
//! Connected instances go through the pair rules, then the candidate search;
//! every feasible candidate is expanded into a root and checked before it is
//! accepted. Disconnected instances split the budget across components.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::{InstanceError, SolveError};
use crate::feasibility::build_system;
use crate::graph::{connected_components, prime_twin_graph, true_twin_partition, Graph, TwinPartition};
use crate::instance::{Instance, Witness};
use crate::reduction::{lift_witness, reduce, ReductionOutcomeError};
use crate::search::{Budget, Candidate, CandidateSearch, SearchLimits, SearchStats};
use crate::skeleton::Role;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub decision: Decision,
    /// Present exactly when the decision is `Yes`; always verified.
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

impl Outcome {
    fn no(stats: SearchStats) -> Self {
        Outcome {
            decision: Decision::No,
            witness: None,
            stats,
        }
    }

    fn yes(witness: Witness, stats: SearchStats) -> Self {
        Outcome {
            decision: Decision::Yes,
            witness: Some(witness),
            stats,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: SearchLimits,
    /// Threads used for the candidate search; 0 and 1 both mean sequential.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limits: SearchLimits::default(),
            workers: 1,
        }
    }
}

/// Builds the root described by `candidate` with multiplicities `x`, using
/// the lowest unused vertices of each twin class.
pub fn expand(candidate: &Candidate, x: &[usize], twins: &TwinPartition) -> Witness {
    let sk = &candidate.skeleton;
    let phi = &candidate.phi.phi;
    let n: usize = twins.classes().iter().map(Vec::len).sum();
    let mut next = vec![0usize; twins.len()];
    let mut take = |c: usize| {
        let v = twins.classes()[c][next[c]];
        next[c] += 1;
        v
    };
    // copies[v] lists the root vertices standing for skeleton vertex v.
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); sk.vertex_count()];
    for v in 0..sk.vertex_count() {
        if matches!(sk.roles[v], Role::Match3B) {
            continue;
        }
        for _ in 0..x[v] {
            copies[v].push(take(phi[v]));
        }
    }
    let mut root = Graph::new(n);
    for e in &sk.matching {
        if e.edge_type == crate::skeleton::EdgeType::Three {
            for _ in 0..x[e.b] {
                copies[e.b].push(take(phi[e.b]));
            }
        }
        for (&u, &w) in copies[e.a].iter().zip(&copies[e.b]) {
            root.add_edge(u, w);
        }
    }
    let modulator: Vec<usize> = sk.modulator.iter().map(|&s| copies[s][0]).collect();
    for (u, w) in sk.graph.edges() {
        let (su, sw) = (sk.roles[u] == Role::Modulator, sk.roles[w] == Role::Modulator);
        if !su && !sw {
            continue;
        }
        for &cu in &copies[u] {
            for &cw in &copies[w] {
                root.add_edge(cu, cw);
            }
        }
    }
    Witness::new(root, modulator)
}

/// Enumerates small roots directly: used for graphs on at most two vertices.
fn solve_tiny(inst: &Instance) -> Option<Witness> {
    let n = inst.graph.vertex_count();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == inst.k)
        .map(|m| Witness::new(inst.graph.clone(), (0..n).filter(|v| m >> v & 1 == 1).collect()))
        .find(|w| w.verify(inst).is_ok())
}

fn search_reduced(
    inst: &Instance,
    budget: &Budget,
    workers: usize,
    stats: &mut SearchStats,
) -> Result<Option<Witness>, SolveError> {
    let twins = true_twin_partition(&inst.graph);
    let pt = prime_twin_graph(&inst.graph, &twins);
    let search = CandidateSearch::new(inst, &pt)?;
    let try_candidate = |c: &Candidate| -> Result<Option<Witness>, SolveError> {
        let system = build_system(&c.skeleton, &c.phi, inst.p, inst.q, &pt.sizes);
        let Some(x) = system.solve() else { return Ok(None) };
        let w = expand(c, &x, &twins);
        w.verify(inst)
            .map_err(|d| SolveError::Internal(format!("expanded candidate is not a witness: {d}")))?;
        Ok(Some(w))
    };
    let run_one = |i: u64, stats: &mut SearchStats, stop_above: &AtomicU64| {
        let mut found = None;
        let mut failure = None;
        let (_, s) = search.run(i, budget, &mut |c| {
            if stop_above.load(Ordering::Relaxed) < i {
                return ControlFlow::Break(());
            }
            match try_candidate(c) {
                Ok(None) => ControlFlow::Continue(()),
                Ok(Some(w)) => {
                    found = Some(w);
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        stats.merge(&s);
        match failure {
            Some(e) => Err(e),
            None => Ok(found),
        }
    };
    let count = search.configuration_count();
    let best = AtomicU64::new(u64::MAX);
    if workers <= 1 {
        for i in 0..count {
            if let Some(w) = run_one(i, stats, &best)? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    // Parallel: the witness from the lowest configuration index wins, which
    // matches the sequential answer whenever no budget runs out.
    let next = AtomicU64::new(0);
    type Shared = (Option<(u64, Witness)>, Option<SolveError>, SearchStats);
    let result: Mutex<Shared> = Mutex::new((None, None, SearchStats::default()));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local = SearchStats::default();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= count || i > best.load(Ordering::Relaxed) {
                        break;
                    }
                    match run_one(i, &mut local, &best) {
                        Ok(None) => {}
                        Ok(Some(w)) => {
                            best.fetch_min(i, Ordering::Relaxed);
                            let mut guard = result.lock().expect("no poisoning");
                            if guard.0.as_ref().is_none_or(|(j, _)| i < *j) {
                                guard.0 = Some((i, w));
                            }
                            break;
                        }
                        Err(e) => {
                            let mut guard = result.lock().expect("no poisoning");
                            guard.1.get_or_insert(e);
                            break;
                        }
                    }
                }
                result.lock().expect("no poisoning").2.merge(&local);
            });
        }
    });
    let (found, error, s) = result.into_inner().expect("no poisoning");
    stats.merge(&s);
    match (found, error) {
        (Some((_, w)), _) => Ok(Some(w)),
        (None, Some(e)) => Err(e),
        (None, None) => Ok(None),
    }
}

fn solve_connected_with(inst: &Instance, budget: &Budget, workers: usize) -> Result<Outcome, SolveError> {
    let g = &inst.graph;
    let mut stats = SearchStats::default();
    if !g.is_connected() {
        return Err(InstanceError::Precondition("graph is not connected".into()).into());
    }
    if g.vertex_count() <= 2 {
        return Ok(match solve_tiny(inst) {
            Some(w) => Outcome::yes(w, stats),
            None => Outcome::no(stats),
        });
    }
    if inst.k == 0 {
        // A connected graph on three or more vertices has a vertex of
        // degree two in every root.
        return Ok(Outcome::no(stats));
    }
    let reduced = match reduce(inst) {
        Ok(r) => r,
        Err(ReductionOutcomeError::Rejected(_)) => return Ok(Outcome::no(stats)),
        Err(ReductionOutcomeError::Precondition(e)) => return Err(e.into()),
    };
    let Some(w) = search_reduced(&reduced.instance, budget, workers, &mut stats)? else {
        return Ok(Outcome::no(stats));
    };
    let lifted = lift_witness(inst, &reduced, &w)?;
    lifted
        .verify(inst)
        .map_err(|d| SolveError::Internal(format!("lifted witness rejected: {d}")))?;
    Ok(Outcome::yes(lifted, stats))
}

/// Decides a connected instance.
pub fn solve_connected(inst: &Instance, options: SolveOptions) -> Result<Outcome, SolveError> {
    solve_connected_with(inst, &Budget::new(options.limits), options.workers)
}

#[derive(Clone, Debug)]
enum Tri {
    Yes(Witness),
    No,
    Unknown(SolveError),
}

struct ComponentDp<'a> {
    components: Vec<(Graph, Vec<usize>)>,
    budget: &'a Budget,
    workers: usize,
    stats: SearchStats,
    solved: HashMap<(usize, usize, usize, usize), Tri>,
    memo: HashMap<(usize, usize, usize, usize), Tri>,
}

impl ComponentDp<'_> {
    fn component(&mut self, i: usize, p: usize, q: usize, k: usize) -> Result<Tri, SolveError> {
        if let Some(t) = self.solved.get(&(i, p, q, k)) {
            return Ok(t.clone());
        }
        let g = self.components[i].0.clone();
        let inst = Instance::new(g, p, q, k)?;
        let t = match solve_connected_with(&inst, self.budget, self.workers) {
            Ok(out) => {
                self.stats.merge(&out.stats);
                match out.witness {
                    Some(w) => Tri::Yes(w),
                    None => Tri::No,
                }
            }
            Err(e) if e.is_inconclusive() => Tri::Unknown(e),
            Err(e) => return Err(e),
        };
        self.solved.insert((i, p, q, k), t.clone());
        Ok(t)
    }

    /// Components `i..` with exactly `(p, q, k)` left. Yes-witnesses are in
    /// the local numbering of each component, listed in order.
    fn rest(&mut self, i: usize, p: usize, q: usize, k: usize) -> Result<(Tri, Vec<Witness>), SolveError> {
        if i == self.components.len() {
            return Ok(if p == 0 && q == 0 && k == 0 {
                (Tri::Yes(Witness::new(Graph::new(0), vec![])), vec![])
            } else {
                (Tri::No, vec![])
            });
        }
        let n = self.components[i].0.vertex_count();
        let mut unknown = None;
        for kc in 0..=k.min(n) {
            if kc == 0 && n >= 3 {
                continue;
            }
            for qc in (0..=q.min((n - kc) / 2)).rev() {
                let pc = n - kc - 2 * qc;
                if pc > p {
                    continue;
                }
                let key = (i + 1, p - pc, q - qc, k - kc);
                let (tail, tail_witnesses) = match self.memo.get(&key) {
                    Some(Tri::No) => (Tri::No, vec![]),
                    _ => self.rest(i + 1, p - pc, q - qc, k - kc)?,
                };
                if let Tri::No = tail {
                    self.memo.insert(key, Tri::No);
                    continue;
                }
                match self.component(i, pc, qc, kc)? {
                    Tri::No => {}
                    Tri::Unknown(e) => {
                        unknown.get_or_insert(e);
                    }
                    Tri::Yes(w) => match tail {
                        Tri::Yes(_) => {
                            let mut all = vec![w];
                            all.extend(tail_witnesses);
                            return Ok((Tri::Yes(Witness::new(Graph::new(0), vec![])), all));
                        }
                        Tri::Unknown(e) => {
                            unknown.get_or_insert(e);
                        }
                        Tri::No => unreachable!(),
                    },
                }
            }
        }
        Ok(match unknown {
            Some(e) => (Tri::Unknown(e), vec![]),
            None => (Tri::No, vec![]),
        })
    }
}

fn solve_with(inst: &Instance, budget: &Budget, workers: usize) -> Result<Outcome, SolveError> {
    let g = &inst.graph;
    if g.vertex_count() == 0 {
        return Ok(Outcome::yes(
            Witness::new(Graph::new(0), vec![]),
            SearchStats::default(),
        ));
    }
    let parts = connected_components(g);
    if parts.len() == 1 {
        return solve_connected_with(inst, budget, workers);
    }
    let mut dp = ComponentDp {
        components: parts.into_iter().map(|c| (g.induced_subgraph(&c), c)).collect(),
        budget,
        workers,
        stats: SearchStats::default(),
        solved: HashMap::new(),
        memo: HashMap::new(),
    };
    let (tri, pieces) = dp.rest(0, inst.p, inst.q, inst.k)?;
    match tri {
        Tri::No => Ok(Outcome::no(dp.stats)),
        Tri::Unknown(e) => Err(e),
        Tri::Yes(_) => {
            let mut root = Graph::new(g.vertex_count());
            let mut modulator = Vec::new();
            for ((_, ids), w) in dp.components.iter().zip(&pieces) {
                for (u, v) in w.root.edges() {
                    root.add_edge(ids[u], ids[v]);
                }
                modulator.extend(w.modulator.iter().map(|&s| ids[s]));
            }
            let w = Witness::new(root, modulator);
            w.verify(inst)
                .map_err(|d| SolveError::Internal(format!("combined witness rejected: {d}")))?;
            Ok(Outcome::yes(w, dp.stats))
        }
    }
}

/// Decides `(G, p, q, k)` for any graph.
pub fn solve(inst: &Instance, options: SolveOptions) -> Result<Outcome, SolveError> {
    solve_with(inst, &Budget::new(options.limits), options.workers)
}

/// Tries each budget in order; the first `Yes` wins, any inconclusive
/// budget without a later `Yes` makes the answer inconclusive.
fn sweep(
    g: &Graph,
    budgets: impl IntoIterator<Item = (usize, usize, usize)>,
    options: SolveOptions,
) -> Result<Outcome, SolveError> {
    let budget = Budget::new(options.limits);
    let mut stats = SearchStats::default();
    let mut pending = None;
    for (p, q, k) in budgets {
        let inst = Instance::new(g.clone(), p, q, k)?;
        match solve_with(&inst, &budget, options.workers) {
            Ok(out) => {
                stats.merge(&out.stats);
                if let Some(w) = out.witness {
                    return Ok(Outcome::yes(w, stats));
                }
            }
            Err(e) if e.is_inconclusive() => {
                pending.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    match pending {
        Some(e) => Err(e),
        None => Ok(Outcome::no(stats)),
    }
}

/// A root `H` and at most `k` vertices whose removal leaves `H` edgeless.
/// The witness uses the smallest modulator size that works.
pub fn solve_vc_root(g: &Graph, k: usize, options: SolveOptions) -> Result<Outcome, SolveError> {
    let n = g.vertex_count();
    sweep(g, (0..=k.min(n)).map(|kk| (n - kk, 0, kk)), options)
}

/// A root `H` and exactly `k` vertices whose removal leaves a perfect
/// matching.
pub fn solve_matching_root(g: &Graph, k: usize, options: SolveOptions) -> Result<Outcome, SolveError> {
    let n = g.vertex_count();
    if k > n || (n - k) % 2 == 1 {
        return Ok(Outcome::no(SearchStats::default()));
    }
    sweep(g, [(0, (n - k) / 2, k)], options)
}

/// A root `H` and at most `k` vertices whose removal leaves maximum degree
/// at most one.
pub fn solve_degree_one_root(g: &Graph, k: usize, options: SolveOptions) -> Result<Outcome, SolveError> {
    let n = g.vertex_count();
    let budgets = (0..=k.min(n)).flat_map(move |kk| (0..=(n - kk) / 2).rev().map(move |q| (n - kk - 2 * q, q, kk)));
    sweep(g, budgets, options)
}
