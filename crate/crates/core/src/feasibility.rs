//! The integer system deciding whether a skeleton with a compatible
//! surjection can be expanded to a full root.
//!
//! One variable per skeleton vertex counts how many copies of it the root
//! uses. Modulator vertices and type-1/type-2 endpoints are used exactly
//! once; isolated vertices and type-3 endpoints at least once, with the two
//! ends of a type-3 edge used equally often. The copies must add up to `p`
//! isolated vertices, `2q` matching endpoints and, per twin class, the class
//! size.

use std::collections::BTreeMap;
use std::fmt;

use crate::skeleton::{EdgeType, Role, Skeleton, SurjectionAssignment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilitySystem {
    pub variable_count: usize,
    /// Variables equal to 1.
    pub fixed: Vec<usize>,
    /// Variables at least 1.
    pub lower_bounded: Vec<usize>,
    /// Pairs of variables that must be equal.
    pub couplings: Vec<(usize, usize)>,
    pub isolated_vars: Vec<usize>,
    pub budget_p: usize,
    pub matching_vars: Vec<usize>,
    pub budget_q2: usize,
    /// `(variables, total)` per twin class.
    pub class_rows: Vec<(Vec<usize>, usize)>,
}

pub fn build_system(
    skeleton: &Skeleton,
    phi: &SurjectionAssignment,
    p: usize,
    q: usize,
    class_sizes: &[usize],
) -> FeasibilitySystem {
    let n = skeleton.vertex_count();
    let mut fixed = Vec::new();
    let mut lower_bounded = Vec::new();
    let mut isolated_vars = Vec::new();
    let mut matching_vars = Vec::new();
    for (v, role) in skeleton.roles.iter().enumerate() {
        match role {
            Role::Modulator => fixed.push(v),
            Role::Isolated => {
                lower_bounded.push(v);
                isolated_vars.push(v);
            }
            Role::Match3A | Role::Match3B => {
                lower_bounded.push(v);
                matching_vars.push(v);
            }
            _ => {
                fixed.push(v);
                matching_vars.push(v);
            }
        }
    }
    let couplings = skeleton
        .matching
        .iter()
        .filter(|e| e.edge_type == EdgeType::Three)
        .map(|e| (e.a, e.b))
        .collect();
    let class_rows = class_sizes
        .iter()
        .enumerate()
        .map(|(c, &size)| (phi.preimage(c).collect(), size))
        .collect();
    FeasibilitySystem {
        variable_count: n,
        fixed,
        lower_bounded,
        couplings,
        isolated_vars,
        budget_p: p,
        matching_vars,
        budget_q2: 2 * q,
        class_rows,
    }
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut root = v;
    while parent[root] != root {
        root = parent[root];
    }
    let mut v = v;
    while parent[v] != root {
        let next = parent[v];
        parent[v] = root;
        v = next;
    }
    root
}

/// Aggregated unknown: the total over a set of interchangeable groups.
struct Aggregate {
    groups: Vec<Vec<usize>>,
    /// `(row, coefficient per unit of the total)`.
    rows: Vec<(usize, usize)>,
}

struct Solver {
    aggregates: Vec<Aggregate>,
    rhs: Vec<usize>,
    /// Aggregates appearing in each row, with coefficients.
    row_members: Vec<Vec<(usize, usize)>>,
    value: Vec<Option<usize>>,
}

impl Solver {
    /// `[lo, hi]` for an unassigned aggregate, or `None` if empty.
    fn interval(&self, j: usize, assigned: &[usize]) -> Option<(usize, usize)> {
        let mut lo = self.aggregates[j].groups.len();
        let mut hi = usize::MAX;
        for &(r, coef) in &self.aggregates[j].rows {
            let mut other_min = 0;
            let mut alone = true;
            for &(i, c) in &self.row_members[r] {
                if i != j && self.value[i].is_none() {
                    other_min += c * self.aggregates[i].groups.len();
                    alone = false;
                }
            }
            let room = self.rhs[r].checked_sub(assigned[r] + other_min)?;
            if alone {
                // The last unknown of a row is forced.
                if room % coef != 0 {
                    return None;
                }
                lo = lo.max(room / coef);
            }
            hi = hi.min(room / coef);
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn search(&mut self, assigned: &mut Vec<usize>) -> bool {
        let mut best: Option<(usize, usize, usize)> = None;
        for j in 0..self.aggregates.len() {
            if self.value[j].is_some() {
                continue;
            }
            let Some((lo, hi)) = self.interval(j, assigned) else {
                return false;
            };
            if best.is_none_or(|(_, blo, bhi)| hi - lo < bhi - blo) {
                best = Some((j, lo, hi));
            }
        }
        let Some((j, lo, hi)) = best else {
            return assigned.iter().zip(&self.rhs).all(|(a, r)| a == r);
        };
        for v in lo..=hi {
            for &(r, c) in &self.aggregates[j].rows {
                assigned[r] += c * v;
            }
            self.value[j] = Some(v);
            if self.search(assigned) {
                return true;
            }
            self.value[j] = None;
            for &(r, c) in &self.aggregates[j].rows {
                assigned[r] -= c * v;
            }
        }
        false
    }
}

impl FeasibilitySystem {
    /// All rows: the isolated budget, the matching budget, then class rows.
    fn rows(&self) -> Vec<(&[usize], usize)> {
        let mut rows = vec![
            (self.isolated_vars.as_slice(), self.budget_p),
            (self.matching_vars.as_slice(), self.budget_q2),
        ];
        rows.extend(self.class_rows.iter().map(|(v, t)| (v.as_slice(), *t)));
        rows
    }

    /// A non-negative integer solution, if one exists.
    pub fn solve(&self) -> Option<Vec<usize>> {
        let n = self.variable_count;
        let mut parent: Vec<usize> = (0..n).collect();
        for &(a, b) in &self.couplings {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut is_fixed = vec![false; n];
        for &v in &self.fixed {
            is_fixed[find(&mut parent, v)] = true;
        }
        let rows = self.rows();
        let mut rhs: Vec<usize> = rows.iter().map(|r| r.1).collect();
        // Coefficient vector of each coupling group.
        let mut group_rows: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            members.entry(find(&mut parent, v)).or_default().push(v);
        }
        for (r, (vars, _)) in rows.iter().enumerate() {
            for &v in *vars {
                *group_rows
                    .entry(find(&mut parent, v))
                    .or_default()
                    .entry(r)
                    .or_default() += 1;
            }
        }
        // Fixed groups are constants; the rest aggregate by coefficient
        // pattern since groups with equal patterns are interchangeable.
        let mut by_pattern: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
        for &g in members.keys() {
            let pattern: Vec<(usize, usize)> = group_rows
                .get(&g)
                .map(|m| m.iter().map(|(&r, &c)| (r, c)).collect())
                .unwrap_or_default();
            if is_fixed[g] {
                for (r, c) in pattern {
                    rhs[r] = rhs[r].checked_sub(c)?;
                }
            } else {
                by_pattern.entry(pattern).or_default().push(g);
            }
        }
        let mut aggregates = Vec::new();
        let mut row_members = vec![Vec::new(); rows.len()];
        for (pattern, groups) in by_pattern {
            if pattern.is_empty() {
                // Unconstrained groups take value 1.
                aggregates.push(Aggregate {
                    groups: groups.iter().map(|g| members[g].clone()).collect(),
                    rows: pattern,
                });
                continue;
            }
            let j = aggregates.len();
            for &(r, c) in &pattern {
                row_members[r].push((j, c));
            }
            aggregates.push(Aggregate {
                groups: groups.iter().map(|g| members[g].clone()).collect(),
                rows: pattern,
            });
        }
        let mut solver = Solver {
            value: aggregates
                .iter()
                .map(|a| a.rows.is_empty().then_some(a.groups.len()))
                .collect(),
            aggregates,
            rhs,
            row_members,
        };
        let mut assigned = vec![0; rows.len()];
        if !solver.search(&mut assigned) {
            return None;
        }
        let mut x = vec![1; n];
        for (agg, value) in solver.aggregates.iter().zip(&solver.value) {
            let extra = value.expect("all assigned") - agg.groups.len();
            for &v in &agg.groups[0] {
                x[v] += extra;
            }
        }
        debug_assert!(self.check(&x));
        Some(x)
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// Whether `x` satisfies every constraint.
    pub fn check(&self, x: &[usize]) -> bool {
        x.len() == self.variable_count
            && self.fixed.iter().all(|&v| x[v] == 1)
            && self.lower_bounded.iter().all(|&v| x[v] >= 1)
            && self.couplings.iter().all(|&(a, b)| x[a] == x[b])
            && self
                .rows()
                .iter()
                .all(|(vars, total)| vars.iter().map(|&v| x[v]).sum::<usize>() == *total)
    }
}

impl fmt::Display for FeasibilitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sum = |vars: &[usize]| {
            if vars.is_empty() {
                "0".to_string()
            } else {
                vars.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join(" + ")
            }
        };
        writeln!(f, "variables: {}", self.variable_count)?;
        for v in &self.fixed {
            writeln!(f, "x{v} = 1")?;
        }
        for v in &self.lower_bounded {
            writeln!(f, "x{v} >= 1")?;
        }
        for (a, b) in &self.couplings {
            writeln!(f, "x{a} = x{b}")?;
        }
        writeln!(f, "{} = {}", sum(&self.isolated_vars), self.budget_p)?;
        writeln!(f, "{} = {}", sum(&self.matching_vars), self.budget_q2)?;
        for (c, (vars, total)) in self.class_rows.iter().enumerate() {
            writeln!(f, "{} = {}  # class {c}", sum(vars), total)?;
        }
        Ok(())
    }
}
