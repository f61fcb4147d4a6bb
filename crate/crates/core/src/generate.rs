//! Instance construction: the biclique-cover reduction and random planted
//! roots.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::GenerateError;
use crate::graph::{square, Graph};
use crate::instance::{Instance, Witness};

/// A bipartite graph with sides `left` and `right`, and a cover budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueCoverInstance {
    pub graph: Graph,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub k: usize,
}

impl BicliqueCoverInstance {
    pub fn new(graph: Graph, left: Vec<usize>, right: Vec<usize>, k: usize) -> Result<Self, GenerateError> {
        let n = graph.vertex_count();
        let mut side = vec![None; n];
        let sides = left.iter().map(|&v| (v, false)).chain(right.iter().map(|&v| (v, true)));
        for (v, s) in sides {
            if v >= n || side[v].is_some() {
                return Err(GenerateError::InfeasibleShape(format!(
                    "vertex {v} is out of range or on both sides"
                )));
            }
            side[v] = Some(s);
        }
        if side.iter().any(Option::is_none) {
            return Err(GenerateError::InfeasibleShape("sides do not cover every vertex".into()));
        }
        if graph.edges().any(|(u, v)| side[u] == side[v]) {
            return Err(GenerateError::InfeasibleShape(
                "an edge joins two vertices on the same side".into(),
            ));
        }
        Ok(BicliqueCoverInstance { graph, left, right, k })
    }
}

/// Where each part of the reduced graph lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub u2: usize,
    pub v2: usize,
    pub w2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueReduction {
    pub graph: Graph,
    /// Vertex-cover budget of the produced instance: `k + 4`.
    pub parameter: usize,
    pub layout: ReductionLayout,
}

fn add_clique(g: &mut Graph, vertices: &[usize]) {
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            g.add_edge(a, b);
        }
    }
}

/// Builds a graph that has a root with vertex cover at most `k + 4` exactly
/// when the edges of `B` can be covered by `k` bicliques.
///
/// Numbering: `X` (left side, in the given order), `Y`, `Z` (`k` vertices),
/// then `u, v, w, u', v', w'`. Cliques: `X ∪ Z ∪ {u}`, `X ∪ {v}`,
/// `{u, v, w}`, `Y ∪ Z ∪ {u'}`, `Y ∪ {v'}`, `{u', v', w'}`; plus `x_i y_j`
/// for every edge of `B`.
pub fn reduce_biclique_cover(bc: &BicliqueCoverInstance) -> BicliqueReduction {
    let (nx, ny, k) = (bc.left.len(), bc.right.len(), bc.k);
    let x: Vec<usize> = (0..nx).collect();
    let y: Vec<usize> = (nx..nx + ny).collect();
    let z: Vec<usize> = (nx + ny..nx + ny + k).collect();
    let base = nx + ny + k;
    let layout = ReductionLayout {
        x,
        y,
        z,
        u: base,
        v: base + 1,
        w: base + 2,
        u2: base + 3,
        v2: base + 4,
        w2: base + 5,
    };
    let mut g = Graph::new(base + 6);
    let l = &layout;
    add_clique(&mut g, &[l.x.as_slice(), l.z.as_slice(), &[l.u]].concat());
    add_clique(&mut g, &[l.x.as_slice(), &[l.v]].concat());
    add_clique(&mut g, &[l.u, l.v, l.w]);
    add_clique(&mut g, &[l.y.as_slice(), l.z.as_slice(), &[l.u2]].concat());
    add_clique(&mut g, &[l.y.as_slice(), &[l.v2]].concat());
    add_clique(&mut g, &[l.u2, l.v2, l.w2]);
    let pos = |v: usize, side: &[usize]| side.iter().position(|&s| s == v);
    for (a, b) in bc.graph.edges() {
        let (i, j) = match (pos(a, &bc.left), pos(b, &bc.right)) {
            (Some(i), Some(j)) => (i, j),
            _ => (
                pos(b, &bc.left).expect("validated"),
                pos(a, &bc.right).expect("validated"),
            ),
        };
        g.add_edge(layout.x[i], layout.y[j]);
    }
    BicliqueReduction {
        graph: g,
        parameter: k + 4,
        layout,
    }
}

fn default_true() -> bool {
    true
}

/// What a planted root should look like. Parsed from TOML, e.g.
///
/// ```toml
/// k = 1
/// isolated = 2
/// type1 = 8
/// shared_signature = true
/// ```
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shape {
    pub k: usize,
    #[serde(default)]
    pub isolated: usize,
    #[serde(default)]
    pub type1: usize,
    #[serde(default)]
    pub type2: usize,
    #[serde(default)]
    pub type3: usize,
    /// Probability of each edge inside the modulator.
    #[serde(default)]
    pub modulator_density: f64,
    /// Give all isolated vertices one signature, and likewise all edges of
    /// each type one signature pair.
    #[serde(default)]
    pub shared_signature: bool,
    #[serde(default = "default_true")]
    pub connected: bool,
}

impl Shape {
    pub fn parse(text: &str) -> Result<Self, GenerateError> {
        toml::from_str(text).map_err(|e| GenerateError::ShapeSyntax(e.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.k + self.isolated + 2 * (self.type1 + self.type2 + self.type3)
    }

    fn check(&self) -> Result<(), GenerateError> {
        let bad = |m: &str| Err(GenerateError::InfeasibleShape(m.to_string()));
        if self.type2 > 0 && self.k < 2 {
            return bad("type-2 edges need k >= 2");
        }
        if self.k == 0 && self.type1 + self.type3 > 0 {
            return bad("type-1 and type-3 edges need k >= 1");
        }
        if self.k == 0 && self.connected && self.vertex_count() > 1 {
            return bad("a connected root with k = 0 has at most one vertex");
        }
        if !(0.0..=1.0).contains(&self.modulator_density) {
            return bad("modulator_density must lie in [0, 1]");
        }
        if self.vertex_count() == 0 {
            return bad("empty shape");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub instance: Instance,
    pub witness: Witness,
    pub seed: u64,
    pub type_counts: [usize; 3],
}

impl PlantedInstance {
    /// `key=value` metadata describing the instance.
    pub fn metadata(&self) -> BTreeMap<&'static str, String> {
        let inst = &self.instance;
        let s: Vec<String> = self.witness.modulator.iter().map(ToString::to_string).collect();
        BTreeMap::from([
            ("n", inst.graph.vertex_count().to_string()),
            ("m", inst.graph.edge_count().to_string()),
            ("p", inst.p.to_string()),
            ("q", inst.q.to_string()),
            ("k", inst.k.to_string()),
            ("seed", self.seed.to_string()),
            ("type1", self.type_counts[0].to_string()),
            ("type2", self.type_counts[1].to_string()),
            ("type3", self.type_counts[2].to_string()),
            ("modulator", s.join(" ")),
        ])
    }
}

const ATTEMPTS: usize = 200;

fn nonempty(rng: &mut ChaCha8Rng, k: usize) -> u32 {
    rng.gen_range(1..1u32 << k)
}

fn disjoint_pair(rng: &mut ChaCha8Rng, k: usize) -> (u32, u32) {
    loop {
        let a = nonempty(rng, k);
        let b = nonempty(rng, k);
        if a & b == 0 {
            return (a, b);
        }
    }
}

fn meeting_pair(rng: &mut ChaCha8Rng, k: usize) -> (u32, u32) {
    loop {
        let a = nonempty(rng, k);
        let b = nonempty(rng, k);
        if a & b != 0 {
            return (a, b);
        }
    }
}

fn attempt(shape: &Shape, rng: &mut ChaCha8Rng) -> (Graph, Vec<usize>) {
    let k = shape.k;
    let n = shape.vertex_count();
    let mut h = Graph::new(n);
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(shape.modulator_density) {
                h.add_edge(i, j);
            }
        }
    }
    let attach = |h: &mut Graph, v: usize, sig: u32| {
        for s in 0..k {
            if sig >> s & 1 == 1 {
                h.add_edge(v, s);
            }
        }
    };
    let mut next = k;
    let shared_iso = if k > 0 { nonempty(rng, k) } else { 0 };
    for _ in 0..shape.isolated {
        let sig = match (k, shape.shared_signature) {
            (0, _) => 0,
            (_, true) => shared_iso,
            _ => nonempty(rng, k),
        };
        attach(&mut h, next, sig);
        next += 1;
    }
    let shared1 = if k > 0 { (0, nonempty(rng, k)) } else { (0, 0) };
    let shared2 = if k >= 2 { disjoint_pair(rng, k) } else { (0, 0) };
    let shared3 = if k > 0 { meeting_pair(rng, k) } else { (0, 0) };
    let kinds = [(shape.type1, 1), (shape.type2, 2), (shape.type3, 3)];
    for (count, kind) in kinds {
        for _ in 0..count {
            let (a, b) = match (kind, shape.shared_signature) {
                (1, true) => shared1,
                (1, false) => (0, nonempty(rng, k)),
                (2, true) => shared2,
                (2, false) => disjoint_pair(rng, k),
                (_, true) => shared3,
                (_, false) => meeting_pair(rng, k),
            };
            h.add_edge(next, next + 1);
            attach(&mut h, next, a);
            attach(&mut h, next + 1, b);
            next += 2;
        }
    }
    // Hide the layout behind a random relabelling.
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let relabelled = Graph::from_edges(n, h.edges().map(|(u, v)| (perm[u], perm[v]))).expect("permuted edges");
    (relabelled, perm[..k].to_vec())
}

/// A random root with the declared profile, its square, and a witness.
pub fn plant_root(shape: &Shape, seed: u64) -> Result<PlantedInstance, GenerateError> {
    shape.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let (h, s) = attempt(shape, &mut rng);
        if shape.connected && !h.is_connected() {
            continue;
        }
        let g = square(&h);
        let q = shape.type1 + shape.type2 + shape.type3;
        let instance =
            Instance::new(g, shape.isolated, q, shape.k).map_err(|e| GenerateError::InfeasibleShape(e.to_string()))?;
        let witness = Witness::new(h, s);
        debug_assert_eq!(witness.verify(&instance), Ok(()));
        return Ok(PlantedInstance {
            instance,
            witness,
            seed,
            type_counts: [shape.type1, shape.type2, shape.type3],
        });
    }
    Err(GenerateError::RetriesExhausted(ATTEMPTS))
}
