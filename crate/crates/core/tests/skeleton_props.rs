use std::collections::BTreeSet;

use proptest::prelude::*;
use sqroot::bounds::skeleton_order_bound;
use sqroot::generate::{plant_root, Shape};
use sqroot::graph::{prime_twin_graph, true_twin_partition, Graph};
use sqroot::skeleton::{classify_edge_type, is_compatible, skeleton_of, EdgeClass, SurjectionAssignment};

fn arb_shape() -> impl Strategy<Value = Shape> {
    (
        1usize..=3,
        0usize..=5,
        0usize..=4,
        0usize..=4,
        0usize..=4,
        prop_oneof![Just(0.0), Just(0.5), Just(1.0)],
        any::<bool>(),
    )
        .prop_map(
            |(k, isolated, type1, type2, type3, modulator_density, shared_signature)| Shape {
                k,
                isolated,
                type1,
                type2: if k >= 2 { type2 } else { 0 },
                type3,
                modulator_density,
                shared_signature,
                connected: true,
            },
        )
}

/// Vertices a skeleton keeps: the first isolated vertex per signature, the
/// first type-3 edge per signature pair, everything else.
fn kept(h: &Graph, s: &[usize]) -> Vec<usize> {
    let n = h.vertex_count();
    let sig = |v: usize| -> BTreeSet<usize> { s.iter().copied().filter(|&x| h.has_edge(v, x)).collect() };
    let outside = |v: usize| {
        (0..n)
            .filter(|&w| !s.contains(&w) && h.has_edge(v, w))
            .collect::<Vec<_>>()
    };
    let mut seen_iso = BTreeSet::new();
    let mut seen_pair = BTreeSet::new();
    let mut drop = BTreeSet::new();
    for v in (0..n).filter(|v| !s.contains(v)) {
        match outside(v)[..] {
            [] => {
                if !seen_iso.insert(sig(v)) {
                    drop.insert(v);
                }
            }
            [w] if v < w => {
                let (a, b) = (sig(v), sig(w));
                if !a.is_disjoint(&b) {
                    let key = if a <= b { (a, b) } else { (b, a) };
                    if !seen_pair.insert(key) {
                        drop.insert(v);
                        drop.insert(w);
                    }
                }
            }
            _ => {}
        }
    }
    (0..n).filter(|v| !drop.contains(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn skeletons_of_planted_roots(shape in arb_shape(), seed in any::<u64>()) {
        let planted = plant_root(&shape, seed);
        prop_assume!(planted.is_ok());
        let planted = planted.unwrap();
        let (h, s) = (&planted.witness.root, &planted.witness.modulator);
        let g = &planted.instance.graph;

        let mut counts = [0usize; 3];
        for (a, b) in h.edges().filter(|(a, b)| !s.contains(a) && !s.contains(b)) {
            match classify_edge_type(h, s, (a, b)).unwrap() {
                EdgeClass::Typed(t) => counts[usize::from(t.number()) - 1] += 1,
                EdgeClass::Detached => prop_assert!(false, "detached edge in a connected root"),
            }
        }
        prop_assert_eq!(counts, planted.type_counts);

        let sk = skeleton_of(h, s).unwrap();
        prop_assert_eq!(sk.check_conditions(), Ok(()));
        prop_assert!(sk.vertex_count() as u64 <= skeleton_order_bound(shape.k));
        let keep = kept(h, s);
        prop_assert_eq!(&sk.graph, &h.induced_subgraph(&keep));

        let twins = true_twin_partition(g);
        let pt = prime_twin_graph(g, &twins);
        let phi = SurjectionAssignment {
            phi: keep.iter().map(|&v| twins.class_of(v)).collect(),
            class_count: twins.len(),
        };
        prop_assert!(is_compatible(&sk, &phi, &pt));
    }
}
