//! Property-based invariants across the public API.

use proptest::prelude::*;

use tcf_core::detector::{find_tight_cycle, DetectOptions};
use tcf_core::edge_list::{
    parse_bipartite, parse_hypergraph, serialize_bipartite, serialize_hypergraph,
};
use tcf_core::girth::{has_cycle_at_most, shortest_cycle_length};
use tcf_core::packing::{pack, random_copy};
use tcf_core::{BipartiteGraph, Hypergraph, RngSeed};

fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..=4, 0usize..=10).prop_flat_map(|(r, n)| {
        if n < r {
            return Just(Hypergraph::new(r, n, Vec::new()).unwrap()).boxed();
        }
        let vertices: Vec<u32> = (0..n as u32).collect();
        proptest::collection::vec(proptest::sample::subsequence(vertices, r), 0..30)
            .prop_map(move |edges| Hypergraph::new(r, n, edges).unwrap())
            .boxed()
    })
}

fn arb_bipartite() -> impl Strategy<Value = BipartiteGraph> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(l, rr)| {
        proptest::collection::vec((0..l as u32, 0..rr as u32), 0..40)
            .prop_map(move |edges| BipartiteGraph::new(l, rr, edges).unwrap())
    })
}

proptest! {
    /// parse is the left inverse of serialize on canonical form.
    #[test]
    fn hypergraph_round_trip(h in arb_hypergraph()) {
        let text = serialize_hypergraph(&h);
        let back = parse_hypergraph(&text).unwrap();
        prop_assert_eq!(&back, &h);
        // and serialize is a pure function of the canonical form
        prop_assert_eq!(serialize_hypergraph(&back), text);
    }

    #[test]
    fn bipartite_round_trip(g in arb_bipartite()) {
        let text = serialize_bipartite(&g);
        prop_assert_eq!(parse_bipartite(&text).unwrap(), g);
    }

    /// Any witness the search returns survives every rotation and the
    /// reversal, and loses one of its window edges only at the cost of
    /// validity.
    #[test]
    fn witnesses_are_cyclic_and_minimal(h in arb_hypergraph()) {
        if let Some(w) = find_tight_cycle(&h, &DetectOptions::default()).unwrap() {
            prop_assert!(h.verify_witness(&w));
            for i in 0..w.len() {
                prop_assert!(h.verify_witness(&w.rotate(i)));
                prop_assert!(h.verify_witness(&w.rotate(i).reverse()));
            }
            // drop each window edge in turn
            let r = h.r();
            let vs = w.vertices();
            for i in 0..w.len() {
                let mut window: Vec<u32> =
                    (0..r).map(|j| vs[(i + j) % w.len()]).collect();
                window.sort_unstable();
                let rest: Vec<Vec<u32>> = h
                    .edges()
                    .iter()
                    .filter(|e| *e != &window)
                    .cloned()
                    .collect();
                let smaller = Hypergraph::new(r, h.n_vertices(), rest).unwrap();
                prop_assert!(!smaller.verify_witness(&w));
            }
        }
    }

    /// A length-filtered query never strays outside its window, and the
    /// full-range query is the unfiltered one.
    #[test]
    fn length_filters_are_respected(h in arb_hypergraph(), lo in 0usize..6, width in 0usize..6) {
        let r = h.r();
        let min = r + 1 + lo;
        let max = min + width;
        let opt = DetectOptions::length_range(min, max);
        if let Some(w) = find_tight_cycle(&h, &opt).unwrap() {
            prop_assert!(w.len() >= min && w.len() <= max);
        }
        let full = find_tight_cycle(
            &h,
            &DetectOptions::length_range(r + 1, h.n_vertices()),
        )
        .unwrap();
        let plain = find_tight_cycle(&h, &DetectOptions::default()).unwrap();
        prop_assert_eq!(full.is_some(), plain.is_some());
    }

    /// Copies are isomorphic images: same size, same girth.
    #[test]
    fn random_copies_preserve_structure(seed in any::<u64>()) {
        let g = BipartiteGraph::new(
            6,
            6,
            (0..6u32).flat_map(|i| [(i, i), (i, (i + 1) % 6)]),
        )
        .unwrap();
        let c = random_copy(&g, RngSeed(seed));
        prop_assert_eq!(c.edge_count(), g.edge_count());
        prop_assert_eq!(shortest_cycle_length(&c), shortest_cycle_length(&g));
    }

    /// Packing keeps members disjoint and short-cycle-free for any seed.
    #[test]
    fn packing_invariants(seed in any::<u64>(), t in 1usize..=3) {
        let template = BipartiteGraph::new(6, 6, (0..6u32).map(|i| (i, i))).unwrap();
        let fam = pack(&template, t, 2, RngSeed(seed)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for m in fam.members() {
            prop_assert!(!has_cycle_at_most(m, 4));
            for e in m.edges() {
                prop_assert!(seen.insert(*e), "duplicate edge across members");
            }
        }
        prop_assert_eq!(fam.edge_sum(), seen.len());
    }
}
