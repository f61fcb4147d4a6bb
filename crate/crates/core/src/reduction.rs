//! Pair-class deletion rules and the twin-class count check for connected
//! instances, with a trace that lets a witness of the reduced instance be
//! lifted back.
//!
//! A nested-twin class (rule 1) or matched-twin class (rule 2) with at least
//! `2k + 4^k + 2` pairs means every solution has two type-1 (resp. type-2)
//! matching edges among the pairs of the class, so one pair can be deleted
//! together with one unit of `q`.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::bounds;
use crate::error::ReductionError;
use crate::graph::{square, true_twin_partition, Graph};
use crate::instance::{Instance, Witness};
use crate::twin_relations::{matched_twin_classes, nested_twin_classes, OrderedPair, PairClassPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Large nested-twin class; the deleted pair lifts back as a type-1 edge.
    NestedTwins,
    /// Large matched-twin class; the deleted pair lifts back as a type-2 edge.
    MatchedTwins,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::NestedTwins => 1,
            Rule::MatchedTwins => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub deleted: OrderedPair,
    /// The whole class at deletion time, deleted pair included.
    pub class: Vec<OrderedPair>,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rule {}: deleted ({}, {}) from a class of {} pairs",
            self.rule.number(),
            self.deleted.first,
            self.deleted.second,
            self.class.len()
        )
    }
}

/// Steps in application order, vertex ids in the original graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Why an instance was answered NO during reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// A rule fired with `q = 0`: the class forces matching edges that the
    /// budget does not allow.
    MatchingBudget,
    /// More true-twin classes than any yes-instance can have.
    TooManyTwinClasses { classes: usize, bound: u64 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::MatchingBudget => write!(f, "a pair rule fired with q = 0"),
            Rejection::TooManyTwinClasses { classes, bound } => {
                write!(f, "{classes} true-twin classes, above the bound {bound}")
            }
        }
    }
}

/// One rule application. Step ids refer to the input graph; `kept[i]` is the
/// input id of vertex `i` of the new graph.
#[derive(Clone, Debug)]
pub struct RuleApplication {
    pub instance: Instance,
    pub step: ReductionStep,
    pub kept: Vec<usize>,
}

fn check_preconditions(inst: &Instance) -> Result<(), ReductionError> {
    if inst.graph.vertex_count() < 3 {
        return Err(ReductionError::TooSmall);
    }
    if inst.k == 0 {
        return Err(ReductionError::ZeroModulator);
    }
    if !inst.graph.is_connected() {
        return Err(ReductionError::NotConnected);
    }
    Ok(())
}

fn apply_rule(inst: &Instance, rule: Rule, classes: PairClassPartition) -> Result<Option<RuleApplication>, Rejection> {
    let threshold = bounds::pair_class_threshold(inst.k);
    let Some(class) = classes.classes().iter().find(|c| c.len() as u64 >= threshold) else {
        return Ok(None);
    };
    if inst.q == 0 {
        return Err(Rejection::MatchingBudget);
    }
    let deleted = class[0];
    let (graph, kept) = inst.graph.without_vertices(&[deleted.first, deleted.second]);
    let instance = Instance {
        graph,
        p: inst.p,
        q: inst.q - 1,
        k: inst.k,
    };
    Ok(Some(RuleApplication {
        instance,
        step: ReductionStep {
            rule,
            deleted,
            class: class.clone(),
        },
        kept,
    }))
}

/// Deletes the least pair of the least nested-twin class at or above the
/// threshold, if there is one.
pub fn apply_rule1_once(inst: &Instance) -> Result<Option<RuleApplication>, ReductionOutcomeError> {
    check_preconditions(inst)?;
    Ok(apply_rule(inst, Rule::NestedTwins, nested_twin_classes(&inst.graph))?)
}

/// As [`apply_rule1_once`] for matched-twin classes.
pub fn apply_rule2_once(inst: &Instance) -> Result<Option<RuleApplication>, ReductionOutcomeError> {
    check_preconditions(inst)?;
    Ok(apply_rule(inst, Rule::MatchedTwins, matched_twin_classes(&inst.graph))?)
}

/// `Some(rejection)` when the instance has too many true-twin classes.
pub fn rule3_check(inst: &Instance) -> Option<Rejection> {
    let classes = true_twin_partition(&inst.graph).len();
    let bound = bounds::twin_class_bound(inst.k);
    (classes as u64 > bound).then_some(Rejection::TooManyTwinClasses { classes, bound })
}

/// Either an instance could not be reduced at all, or it was answered NO.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionOutcomeError {
    Precondition(ReductionError),
    Rejected(Rejection),
}

impl From<ReductionError> for ReductionOutcomeError {
    fn from(e: ReductionError) -> Self {
        ReductionOutcomeError::Precondition(e)
    }
}

impl From<Rejection> for ReductionOutcomeError {
    fn from(r: Rejection) -> Self {
        ReductionOutcomeError::Rejected(r)
    }
}

/// A fully reduced instance. `original_ids[i]` is the id in the input graph
/// of reduced vertex `i`.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub instance: Instance,
    pub original_ids: Vec<usize>,
    pub trace: ReductionTrace,
}

/// Applies both pair rules until neither fires (recomputing classes after
/// every deletion), then the twin-class count check.
pub fn reduce(inst: &Instance) -> Result<ReducedInstance, ReductionOutcomeError> {
    check_preconditions(inst)?;
    let mut current = inst.clone();
    let mut original_ids: Vec<usize> = (0..inst.graph.vertex_count()).collect();
    let mut trace = ReductionTrace::default();
    loop {
        let fired = match apply_rule(&current, Rule::NestedTwins, nested_twin_classes(&current.graph))? {
            Some(app) => Some(app),
            None => apply_rule(&current, Rule::MatchedTwins, matched_twin_classes(&current.graph))?,
        };
        let Some(app) = fired else { break };
        let to_original = |p: OrderedPair| OrderedPair {
            first: original_ids[p.first],
            second: original_ids[p.second],
        };
        trace.steps.push(ReductionStep {
            rule: app.step.rule,
            deleted: to_original(app.step.deleted),
            class: app.step.class.iter().map(|&p| to_original(p)).collect(),
        });
        original_ids = app.kept.iter().map(|&i| original_ids[i]).collect();
        current = app.instance;
    }
    if let Some(r) = rule3_check(&current) {
        return Err(r.into());
    }
    Ok(ReducedInstance {
        instance: current,
        original_ids,
        trace,
    })
}

/// Lifts a witness of `reduced.instance` to a witness of `original`.
///
/// Steps are undone in reverse. For each one, a pair of the step's class
/// that is a matching edge of the right type in the current root is copied:
/// the re-inserted pair gets the same modulator attachments.
pub fn lift_witness(
    original: &Instance,
    reduced: &ReducedInstance,
    witness: &Witness,
) -> Result<Witness, ReductionError> {
    let n = original.graph.vertex_count();
    let mut root = Graph::new(n);
    for (u, v) in witness.root.edges() {
        root.add_edge(reduced.original_ids[u], reduced.original_ids[v]);
    }
    let modulator: Vec<usize> = witness.modulator.iter().map(|&s| reduced.original_ids[s]).collect();
    let mut in_s = FixedBitSet::with_capacity(n);
    for &s in &modulator {
        in_s.insert(s);
    }
    let mut present = FixedBitSet::with_capacity(n);
    for &v in &reduced.original_ids {
        present.insert(v);
    }

    for (index, step) in reduced.trace.steps.iter().enumerate().rev() {
        let (x, y) = (step.deleted.first, step.deleted.second);
        present.insert(x);
        present.insert(y);
        let keep: Vec<usize> = present.ones().collect();
        let target = original.graph.induced_subgraph(&keep);
        let mut lifted = None;
        for rep in step.class.iter().filter(|&&p| p != step.deleted) {
            let Some((sx, sy)) = matching_edge_signatures(&root, &in_s, *rep) else {
                continue;
            };
            let fits = match step.rule {
                Rule::NestedTwins => sx.is_clear() && !sy.is_clear(),
                Rule::MatchedTwins => !sx.is_clear() && !sy.is_clear() && sx.intersection(&sy).next().is_none(),
            };
            if !fits {
                continue;
            }
            let mut candidate = root.clone();
            candidate.add_edge(x, y);
            for s in sx.ones() {
                candidate.add_edge(x, s);
            }
            for s in sy.ones() {
                candidate.add_edge(y, s);
            }
            if square(&candidate.induced_subgraph(&keep)) == target {
                lifted = Some(candidate);
                break;
            }
        }
        root = lifted.ok_or(ReductionError::NoRepresentative { step: index })?;
    }

    let lifted = Witness::new(root, modulator);
    lifted.verify(original).map_err(|_| ReductionError::LiftVerification)?;
    Ok(lifted)
}

/// Modulator neighbourhoods of both ends when `pair` is an edge of the root
/// whose ends lie outside `S` and have no other neighbour outside `S`.
fn matching_edge_signatures(root: &Graph, in_s: &FixedBitSet, pair: OrderedPair) -> Option<(FixedBitSet, FixedBitSet)> {
    let (a, b) = (pair.first, pair.second);
    if in_s.contains(a) || in_s.contains(b) || !root.has_edge(a, b) {
        return None;
    }
    let outside = |v: usize| root.neighbors(v).difference(in_s).count();
    if outside(a) != 1 || outside(b) != 1 {
        return None;
    }
    let sig = |v: usize| {
        let mut s = root.neighbors(v).clone();
        s.intersect_with(in_s);
        s
    };
    Some((sig(a), sig(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Star centre 0 with branches b_i = 2i-1 carrying pendants a_i = 2i.
    fn branched_star(branches: usize) -> Graph {
        let mut h = Graph::new(2 * branches + 1);
        for i in 1..=branches {
            h.add_edge(0, 2 * i - 1);
            h.add_edge(2 * i - 1, 2 * i);
        }
        h
    }

    #[test]
    fn rule1_fires_on_eight_branches() {
        let h = branched_star(8);
        let inst = Instance::new(h.square(), 0, 8, 1).unwrap();
        let nt = nested_twin_classes(&inst.graph);
        assert_eq!(nt.classes().iter().map(Vec::len).max(), Some(8));

        let app = apply_rule1_once(&inst).unwrap().expect("rule fires");
        assert_eq!(app.instance.q, 7);
        assert_eq!(app.instance.graph.vertex_count(), 15);
        assert!(app.instance.graph.is_connected());
        assert!(apply_rule1_once(&app.instance).unwrap().is_none());
    }

    #[test]
    fn rules_quiet_on_small_graphs() {
        let k3 = Instance::new(Graph::complete(3), 2, 0, 1).unwrap();
        assert!(apply_rule1_once(&k3).unwrap().is_none());
        let k5 = Instance::new(Graph::complete(5), 4, 0, 1).unwrap();
        assert!(apply_rule2_once(&k5).unwrap().is_none());
        let c4 = Instance::new(Graph::cycle(4), 0, 1, 2).unwrap();
        assert!(apply_rule2_once(&c4).unwrap().is_none());
    }

    #[test]
    fn rule2_fires_on_type2_edges() {
        // s1 = 0, s2 = 1, edges a_i b_i with a_i ~ s1, b_i ~ s2.
        let mut h = Graph::new(2 + 44);
        h.add_edge(0, 1);
        for i in 0..22 {
            let (a, b) = (2 + 2 * i, 3 + 2 * i);
            h.add_edge(a, b);
            h.add_edge(a, 0);
            h.add_edge(b, 1);
        }
        let inst = Instance::new(h.square(), 0, 22, 2).unwrap();
        let app = apply_rule2_once(&inst).unwrap().expect("rule fires");
        assert_eq!(app.step.class.len(), 22);
        assert_eq!(app.instance.q, 21);
    }

    #[test]
    fn zero_budget_rejects() {
        let h = branched_star(8);
        // Same graph, but all budget moved to the modulator and isolated part.
        let inst = Instance::new(h.square(), 15, 0, 2).unwrap();
        // The k = 2 threshold is 22.
        assert!(apply_rule1_once(&inst).unwrap().is_none());
        let inst = Instance::new(h.square(), 16, 0, 1).unwrap();
        assert_eq!(
            apply_rule1_once(&inst).unwrap_err(),
            ReductionOutcomeError::Rejected(Rejection::MatchingBudget)
        );
    }

    #[test]
    fn rule3_counts_twin_classes() {
        let p100 = Instance::new(Graph::path(100), 99, 0, 1).unwrap();
        assert_eq!(
            rule3_check(&p100),
            Some(Rejection::TooManyTwinClasses {
                classes: 100,
                bound: 95
            })
        );
        let k5 = Instance::new(Graph::complete(5), 4, 0, 1).unwrap();
        assert_eq!(rule3_check(&k5), None);
        let p4 = Instance::new(Graph::path(4), 4, 0, 0).unwrap();
        assert_eq!(rule3_check(&p4), None);
        assert!(matches!(
            reduce(&p100),
            Err(ReductionOutcomeError::Rejected(Rejection::TooManyTwinClasses { .. }))
        ));
    }

    #[test]
    fn reduce_and_lift_branched_star() {
        let h = branched_star(8);
        let inst = Instance::new(h.square(), 0, 8, 1).unwrap();
        let reduced = reduce(&inst).unwrap();
        assert_eq!(reduced.trace.steps.len(), 1);
        assert_eq!(reduced.instance.q, 7);

        // The induced root on the kept vertices solves the reduced instance.
        let sub = h.induced_subgraph(&reduced.original_ids);
        let centre = reduced.original_ids.iter().position(|&v| v == 0).unwrap();
        let w = Witness::new(sub, vec![centre]);
        assert_eq!(w.verify(&reduced.instance), Ok(()));

        let lifted = lift_witness(&inst, &reduced, &w).unwrap();
        assert_eq!(lifted.verify(&inst), Ok(()));
    }

    #[test]
    fn empty_trace_lifts_to_identity() {
        let inst = Instance::new(Graph::complete(3), 2, 0, 1).unwrap();
        let reduced = reduce(&inst).unwrap();
        assert!(reduced.trace.steps.is_empty());
        let w = Witness::new(Graph::path(3), vec![1]);
        assert_eq!(lift_witness(&inst, &reduced, &w).unwrap(), w);
        let bad = Witness::new(Graph::path(3), vec![0]);
        assert_eq!(
            lift_witness(&inst, &reduced, &bad),
            Err(ReductionError::LiftVerification)
        );
    }
}
