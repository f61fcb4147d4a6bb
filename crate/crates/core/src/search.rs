//! Enumeration of candidate skeletons with compatible surjections onto the
//! true-twin classes of a reduced connected instance.
//!
//! A *configuration* fixes the twin class of every modulator vertex and the
//! edges inside the modulator. Given a configuration, the remaining skeleton
//! vertices are described purely by their modulator neighbourhood (a
//! bitmask, its *signature*) and, for matching edges, the signature of the
//! partner. That is enough to know every adjacency of the skeleton's square:
//!
//! * a vertex with signature `A` and partner signature `B` sees exactly the
//!   modulator vertices in `A ∪ N_S(A) ∪ B`;
//! * two non-modulator vertices that are not partners are adjacent in the
//!   square iff their signatures intersect.
//!
//! Items (an isolated vertex, or a matching edge together with the classes
//! of its ends) are generated up front and filtered against the quotient
//! graph. The search then picks a class, branches over the items that could
//! cover it, and closes classes once covered. Each item set is produced once:
//! siblings tried earlier are excluded from later branches.
//!
//! The search trusts that the instance is reduced: it never emits more than
//! `2k + 4^k + 1` type-1/type-2 edges per signature pair.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::bounds;
use crate::error::SolveError;
use crate::graph::{Graph, PrimeTwinGraph};
use crate::instance::Instance;
use crate::skeleton::{Skeleton, SurjectionAssignment};

type Mask = u32;

/// Largest modulator the bitmask representation supports.
pub const MAX_MODULATOR: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_candidates: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub configurations: u64,
    pub nodes: u64,
    pub candidates: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.configurations += other.configurations;
        self.nodes += other.nodes;
        self.candidates += other.candidates;
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub skeleton: Skeleton,
    pub phi: SurjectionAssignment,
}

/// Shared limits for one or more concurrent searches.
#[derive(Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    max_candidates: Option<u64>,
    candidates: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    pub fn new(limits: SearchLimits) -> Self {
        Budget {
            deadline: limits.max_time.map(|d| Instant::now() + d),
            max_candidates: limits.max_candidates,
            candidates: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        }
    }

    /// Asks every search sharing this budget to stop early.
    pub fn cancel(&self) {
        self.stop.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    pub fn candidates(&self) -> u64 {
        self.candidates.load(Ordering::Relaxed)
    }

    fn exhausted(&self, reason: &str) -> SolveError {
        SolveError::BudgetExhausted {
            reason: reason.to_string(),
            candidates: self.candidates(),
        }
    }

    fn check_time(&self) -> Result<(), SolveError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(self.exhausted("time limit")),
            _ => Ok(()),
        }
    }

    fn count_candidate(&self) -> Result<(), SolveError> {
        let seen = self.candidates.fetch_add(1, Ordering::Relaxed) + 1;
        match self.max_candidates {
            Some(max) if seen > max => Err(self.exhausted("candidate limit")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Isolated,
    One,
    Two,
    Three,
}

/// For edges, `a` is the lexicographically smaller `(signature, class)`
/// end, except for type 1 where `a` is the end with the empty signature.
#[derive(Clone, Copy, Debug)]
struct Item {
    kind: Kind,
    a: Mask,
    ca: usize,
    b: Mask,
    cb: usize,
}

fn ends(item: &Item) -> ([(Mask, usize); 2], usize) {
    let arr = [(item.a, item.ca), (item.b, item.cb)];
    (arr, if item.kind == Kind::Isolated { 1 } else { 2 })
}

fn sig_pair(item: &Item) -> (Mask, Mask) {
    (item.a.min(item.b), item.a.max(item.b))
}

fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// A class tuple for `S` with the `S`-`S` pairs that may be edges (those
/// whose classes are equal or adjacent). Its configurations are the subsets
/// of `pairs`, numbered from `offset`.
struct Tuple {
    classes: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    offset: u64,
}

/// The search over a reduced connected instance.
pub struct CandidateSearch<'a> {
    pt: &'a PrimeTwinGraph,
    k: usize,
    p: usize,
    q: usize,
    tuples: Vec<Tuple>,
    total: u64,
}

impl<'a> CandidateSearch<'a> {
    pub fn new(inst: &Instance, pt: &'a PrimeTwinGraph) -> Result<Self, SolveError> {
        let k = inst.k;
        if k > MAX_MODULATOR {
            return Err(SolveError::ModulatorTooLarge(k));
        }
        let r = pt.class_count();
        let mut tuples = Vec::new();
        let mut total = 0u64;
        let mut tuple = vec![0usize; k];
        loop {
            let mut load = vec![0usize; r];
            for &c in &tuple {
                load[c] += 1;
            }
            if r > 0 && load.iter().zip(&pt.sizes).all(|(l, s)| l <= s) {
                let pairs: Vec<(usize, usize)> = (0..k)
                    .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                    .filter(|&(i, j)| tuple[i] == tuple[j] || pt.adjacent(tuple[i], tuple[j]))
                    .collect();
                let offset = total;
                total += 1 << pairs.len();
                tuples.push(Tuple {
                    classes: tuple.clone(),
                    pairs,
                    offset,
                });
            }
            // Next non-decreasing tuple over 0..r.
            let Some(i) = (0..k).rev().find(|&i| tuple[i] + 1 < r) else {
                break;
            };
            let v = tuple[i] + 1;
            for t in &mut tuple[i..] {
                *t = v;
            }
        }
        Ok(CandidateSearch {
            pt,
            k,
            p: inst.p,
            q: inst.q,
            tuples,
            total,
        })
    }

    pub fn configuration_count(&self) -> u64 {
        self.total
    }

    /// Searches configuration `index`, calling `visit` on every candidate.
    pub fn run(
        &self,
        index: u64,
        budget: &Budget,
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> Result<(ControlFlow<()>, SearchStats), SolveError> {
        budget.check_time()?;
        let t = &self.tuples[self.tuples.partition_point(|t| t.offset <= index) - 1];
        let mask = index - t.offset;
        let edges: Vec<(usize, usize)> = t
            .pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut stats = SearchStats {
            configurations: 1,
            ..SearchStats::default()
        };
        let Some(layout) = Layout::build(self, &t.classes, &edges) else {
            return Ok((ControlFlow::Continue(()), stats));
        };
        let mut state = State::new(&layout);
        let flow = layout.dfs(&mut state, budget, &mut stats, visit)?;
        Ok((flow, stats))
    }
}

/// Runs every configuration in order until `visit` breaks.
pub fn enumerate_candidates(
    inst: &Instance,
    pt: &PrimeTwinGraph,
    limits: SearchLimits,
    visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
) -> Result<SearchStats, SolveError> {
    let search = CandidateSearch::new(inst, pt)?;
    let budget = Budget::new(limits);
    let mut total = SearchStats::default();
    for i in 0..search.configuration_count() {
        let (flow, stats) = search.run(i, &budget, visit)?;
        total.merge(&stats);
        if flow.is_break() {
            break;
        }
    }
    Ok(total)
}

struct Layout<'a> {
    pt: &'a PrimeTwinGraph,
    k: usize,
    p: usize,
    q: usize,
    cap: u64,
    s_class: Vec<usize>,
    s_adj: Vec<Mask>,
    required: Vec<(usize, usize)>,
    s_load: Vec<usize>,
    items: Vec<Item>,
    by_class: Vec<Vec<usize>>,
}

impl<'a> Layout<'a> {
    fn build(search: &CandidateSearch<'a>, classes: &[usize], edges: &[(usize, usize)]) -> Option<Self> {
        let pt = search.pt;
        let k = search.k;
        let r = pt.class_count();
        let adjacent = |c: usize, d: usize| c == d || pt.adjacent(c, d);
        let mut s_adj = vec![0 as Mask; k];
        for &(i, j) in edges {
            s_adj[i] |= 1 << j;
            s_adj[j] |= 1 << i;
        }
        let nbr: Vec<Mask> = (0..1usize << k)
            .map(|a| (0..k).filter(|i| a >> i & 1 == 1).fold(0, |m, i| m | s_adj[i]))
            .collect();
        let mut must_not = vec![0 as Mask; k];
        let mut required = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let base = s_adj[i] >> j & 1 == 1 || s_adj[i] & s_adj[j] != 0;
                let want = adjacent(classes[i], classes[j]);
                match (base, want) {
                    (true, false) => return None,
                    (false, true) => required.push((i, j)),
                    (false, false) => {
                        must_not[i] |= 1 << j;
                        must_not[j] |= 1 << i;
                    }
                    (true, true) => {}
                }
            }
        }
        let sig_ok = |a: Mask| (0..k).all(|i| a >> i & 1 == 0 || a & must_not[i] == 0);
        let req: Vec<Mask> = (0..r)
            .map(|c| (0..k).filter(|&i| adjacent(c, classes[i])).fold(0, |m, i| m | 1 << i))
            .collect();
        let mut s_load = vec![0usize; r];
        for &c in classes {
            s_load[c] += 1;
        }
        let mut by_req: HashMap<Mask, Vec<usize>> = HashMap::new();
        for (c, &m) in req.iter().enumerate() {
            by_req.entry(m).or_default().push(c);
        }
        let room = |c: usize| pt.sizes[c] - s_load[c];
        let mut items = Vec::new();
        for (c, &full) in req.iter().enumerate().take(r) {
            for a in submasks(full) {
                if !sig_ok(a) {
                    continue;
                }
                let base = a | nbr[a as usize];
                if base & !full != 0 {
                    continue;
                }
                if a != 0 && base == full && search.p > 0 && room(c) >= 1 {
                    items.push(Item {
                        kind: Kind::Isolated,
                        a,
                        ca: c,
                        b: 0,
                        cb: c,
                    });
                }
                if search.q == 0 {
                    continue;
                }
                let need = full & !base;
                for extra in submasks(full & !need) {
                    let b = need | extra;
                    if (a == 0 && b == 0) || !sig_ok(b) || a > b {
                        continue;
                    }
                    let target = b | nbr[b as usize] | a;
                    let Some(partners) = by_req.get(&target) else { continue };
                    for &d in partners {
                        if (a, c) > (b, d) || !adjacent(c, d) {
                            continue;
                        }
                        let fits = if c == d {
                            room(c) >= 2
                        } else {
                            room(c) >= 1 && room(d) >= 1
                        };
                        if !fits {
                            continue;
                        }
                        let item = if a == 0 {
                            Item {
                                kind: Kind::One,
                                a,
                                ca: c,
                                b,
                                cb: d,
                            }
                        } else if b == 0 {
                            Item {
                                kind: Kind::One,
                                a: b,
                                ca: d,
                                b: a,
                                cb: c,
                            }
                        } else if a & b == 0 {
                            Item {
                                kind: Kind::Two,
                                a,
                                ca: c,
                                b,
                                cb: d,
                            }
                        } else {
                            Item {
                                kind: Kind::Three,
                                a,
                                ca: c,
                                b,
                                cb: d,
                            }
                        };
                        items.push(item);
                    }
                }
            }
        }
        for &(i, j) in &required {
            let both: Mask = 1 << i | 1 << j;
            if !items.iter().any(|it| {
                let (e, len) = ends(it);
                e[..len].iter().any(|&(s, _)| s & both == both)
            }) {
                return None;
            }
        }
        let mut by_class = vec![Vec::new(); r];
        for (id, it) in items.iter().enumerate() {
            by_class[it.ca].push(id);
            if it.kind != Kind::Isolated && it.cb != it.ca {
                by_class[it.cb].push(id);
            }
        }
        if (0..r).any(|c| s_load[c] == 0 && by_class[c].is_empty()) {
            return None;
        }
        Some(Layout {
            pt,
            k,
            p: search.p,
            q: search.q,
            cap: bounds::signature_edge_cap(k),
            s_class: classes.to_vec(),
            s_adj,
            required,
            s_load,
            items,
            by_class,
        })
    }

    fn compatible(&self, x: &Item, y: &Item) -> bool {
        let (ex, lx) = ends(x);
        let (ey, ly) = ends(y);
        ex[..lx].iter().all(|&(sx, cx)| {
            ey[..ly].iter().all(|&(sy, cy)| {
                let adj = sx & sy != 0;
                if cx == cy {
                    adj
                } else {
                    adj == self.pt.adjacent(cx, cy)
                }
            })
        })
    }

    /// Items that can still be added and touch class `c`.
    fn available(&self, st: &State, c: usize) -> Vec<usize> {
        self.by_class[c]
            .iter()
            .copied()
            .filter(|&id| {
                let it = &self.items[id];
                if st.excluded[id] || st.closed[it.ca] || st.closed[it.cb] {
                    return false;
                }
                let budget_ok = match it.kind {
                    Kind::Isolated => st.isolated < self.p && !st.iso_used.contains(&it.a),
                    Kind::Three => st.edges < self.q && !st.type3_used.contains(&sig_pair(it)),
                    Kind::One | Kind::Two => {
                        st.edges < self.q && st.type12.get(&sig_pair(it)).copied().unwrap_or(0) < self.cap
                    }
                };
                if !budget_ok {
                    return false;
                }
                let fits = if it.kind == Kind::Isolated {
                    st.min_load[it.ca] < self.pt.sizes[it.ca]
                } else if it.ca == it.cb {
                    st.min_load[it.ca] + 2 <= self.pt.sizes[it.ca]
                } else {
                    st.min_load[it.ca] < self.pt.sizes[it.ca] && st.min_load[it.cb] < self.pt.sizes[it.cb]
                };
                fits && st.selected.iter().all(|&o| self.compatible(it, &self.items[o]))
            })
            .collect()
    }

    fn push(&self, st: &mut State, id: usize) {
        let it = self.items[id];
        st.selected.push(id);
        let (e, len) = ends(&it);
        for &(_, c) in &e[..len] {
            st.min_load[c] += 1;
            if matches!(it.kind, Kind::Isolated | Kind::Three) {
                st.variable[c] += 1;
            }
        }
        match it.kind {
            Kind::Isolated => {
                st.isolated += 1;
                st.iso_used.insert(it.a);
            }
            Kind::Three => {
                st.edges += 1;
                st.type3_used.insert(sig_pair(&it));
            }
            Kind::One | Kind::Two => {
                st.edges += 1;
                *st.type12.entry(sig_pair(&it)).or_default() += 1;
            }
        }
    }

    fn pop(&self, st: &mut State) {
        let id = st.selected.pop().expect("non-empty");
        let it = self.items[id];
        let (e, len) = ends(&it);
        for &(_, c) in &e[..len] {
            st.min_load[c] -= 1;
            if matches!(it.kind, Kind::Isolated | Kind::Three) {
                st.variable[c] -= 1;
            }
        }
        match it.kind {
            Kind::Isolated => {
                st.isolated -= 1;
                st.iso_used.remove(&it.a);
            }
            Kind::Three => {
                st.edges -= 1;
                st.type3_used.remove(&sig_pair(&it));
            }
            Kind::One | Kind::Two => {
                st.edges -= 1;
                *st.type12.get_mut(&sig_pair(&it)).expect("counted") -= 1;
            }
        }
    }

    fn branch(
        &self,
        st: &mut State,
        options: Vec<usize>,
        budget: &Budget,
        stats: &mut SearchStats,
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, SolveError> {
        let mark = st.exclusions.len();
        let mut flow = ControlFlow::Continue(());
        for &id in &options {
            self.push(st, id);
            flow = self.dfs(st, budget, stats, visit)?;
            self.pop(st);
            if flow.is_break() {
                break;
            }
            st.excluded[id] = true;
            st.exclusions.push(id);
        }
        for id in st.exclusions.drain(mark..) {
            st.excluded[id] = false;
        }
        Ok(flow)
    }

    fn dfs(
        &self,
        st: &mut State,
        budget: &Budget,
        stats: &mut SearchStats,
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, SolveError> {
        stats.nodes += 1;
        if stats.nodes.is_multiple_of(1024) {
            budget.check_time()?;
            if budget.is_cancelled() {
                return Ok(ControlFlow::Break(()));
            }
        }
        let r = self.pt.class_count();
        // Uncovered class with the fewest options first.
        let mut best: Option<Vec<usize>> = None;
        for c in 0..r {
            if st.min_load[c] > 0 {
                continue;
            }
            let options = self.available(st, c);
            if options.is_empty() {
                return Ok(ControlFlow::Continue(()));
            }
            if best.as_ref().is_none_or(|b| options.len() < b.len()) {
                let single = options.len() == 1;
                best = Some(options);
                if single {
                    break;
                }
            }
        }
        if let Some(options) = best {
            return self.branch(st, options, budget, stats, visit);
        }
        let Some(c) = (0..r).find(|&c| !st.closed[c]) else {
            return self.leaf(st, budget, stats, visit);
        };
        if st.variable[c] > 0 || st.min_load[c] == self.pt.sizes[c] {
            st.closed[c] = true;
            let flow = self.dfs(st, budget, stats, visit)?;
            st.closed[c] = false;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        let options = self.available(st, c);
        self.branch(st, options, budget, stats, visit)
    }

    fn leaf(
        &self,
        st: &State,
        budget: &Budget,
        stats: &mut SearchStats,
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, SolveError> {
        if (self.p > 0 && st.isolated == 0) || (self.q > 0 && st.edges == 0) {
            return Ok(ControlFlow::Continue(()));
        }
        for &(i, j) in &self.required {
            let both: Mask = 1 << i | 1 << j;
            let covered = st.selected.iter().any(|&id| {
                let (e, len) = ends(&self.items[id]);
                e[..len].iter().any(|&(s, _)| s & both == both)
            });
            if !covered {
                return Ok(ControlFlow::Continue(()));
            }
        }
        budget.count_candidate()?;
        stats.candidates += 1;
        Ok(visit(&self.candidate(&st.selected)))
    }

    fn candidate(&self, selected: &[usize]) -> Candidate {
        let k = self.k;
        let mut phi = self.s_class.clone();
        let mut endpoints: Vec<(Mask, Option<usize>)> = Vec::new();
        for &id in selected {
            let it = &self.items[id];
            let (e, len) = ends(it);
            let first = k + endpoints.len();
            for (j, &(sig, c)) in e[..len].iter().enumerate() {
                phi.push(c);
                let partner = (len == 2).then_some(first + 1 - j);
                endpoints.push((sig, partner));
            }
        }
        let mut graph = Graph::new(phi.len());
        for i in 0..k {
            for j in i + 1..k {
                if self.s_adj[i] >> j & 1 == 1 {
                    graph.add_edge(i, j);
                }
            }
        }
        for (off, &(sig, partner)) in endpoints.iter().enumerate() {
            let v = k + off;
            for s in 0..k {
                if sig >> s & 1 == 1 {
                    graph.add_edge(v, s);
                }
            }
            if let Some(w) = partner {
                graph.add_edge(v, w);
            }
        }
        let skeleton = Skeleton::from_parts(graph, (0..k).collect()).expect("generated skeletons are well formed");
        Candidate {
            skeleton,
            phi: SurjectionAssignment {
                phi,
                class_count: self.pt.class_count(),
            },
        }
    }
}

struct State {
    selected: Vec<usize>,
    min_load: Vec<usize>,
    variable: Vec<usize>,
    closed: Vec<bool>,
    excluded: Vec<bool>,
    exclusions: Vec<usize>,
    isolated: usize,
    edges: usize,
    iso_used: HashSet<Mask>,
    type3_used: HashSet<(Mask, Mask)>,
    type12: HashMap<(Mask, Mask), u64>,
}

impl State {
    fn new(layout: &Layout<'_>) -> Self {
        State {
            selected: Vec::new(),
            min_load: layout.s_load.clone(),
            variable: vec![0; layout.s_load.len()],
            closed: vec![false; layout.s_load.len()],
            excluded: vec![false; layout.items.len()],
            exclusions: Vec::new(),
            isolated: 0,
            edges: 0,
            iso_used: HashSet::new(),
            type3_used: HashSet::new(),
            type12: HashMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{prime_twin_graph, true_twin_partition};
    use crate::skeleton::is_compatible;

    fn candidates(inst: &Instance) -> Vec<Candidate> {
        let twins = true_twin_partition(&inst.graph);
        let pt = prime_twin_graph(&inst.graph, &twins);
        let mut out = Vec::new();
        enumerate_candidates(inst, &pt, SearchLimits::default(), &mut |c| {
            out.push(c.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        out
    }

    #[test]
    fn k5_has_the_edge_skeleton() {
        let inst = Instance::new(Graph::complete(5), 4, 0, 1).unwrap();
        let found = candidates(&inst);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].skeleton.graph, Graph::complete(2));
    }

    #[test]
    fn every_candidate_is_compatible() {
        // Square of a star with a pendant path: 0 centre, leaves 1..4, 4-5.
        let h = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)]).unwrap();
        let g = h.square();
        let twins = true_twin_partition(&g);
        let pt = prime_twin_graph(&g, &twins);
        let inst = Instance::new(g, 3, 1, 1).unwrap();
        let found = candidates(&inst);
        assert!(!found.is_empty());
        for c in &found {
            assert!(is_compatible(&c.skeleton, &c.phi, &pt));
            assert!(c.skeleton.check_conditions().is_ok());
        }
    }
}
