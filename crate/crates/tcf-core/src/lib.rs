//! Construction and exact certification of tight-cycle-free uniform
//! hypergraphs.
//!
//! A tight cycle of length `l > r` in an `r`-uniform hypergraph is a
//! sequence of `l` distinct vertices in which every `r` cyclically
//! consecutive vertices form an edge. This crate builds dense hypergraphs
//! that provably avoid them and certifies the results exactly:
//!
//! * [`girth`] — bipartite graphs with no short cycles, by seeded random
//!   sampling plus deletion (or greedy insertion);
//! * [`packing`] — edge-disjoint packings of random template copies into
//!   `K_{n,n}`, with exact coverage accounting;
//! * [`constructions`] — the tripartite lifting of a packed family, its
//!   sum-product generalization, the uniformity-raising cone lift, the star
//!   and complete-partite baselines, and the end-to-end pipeline;
//! * [`detector`] — exact tight-cycle search (any length or a length range)
//!   with an independent brute-force oracle and a fast part-aligned check
//!   for transversal tripartite inputs;
//! * [`extremal`] — exact maximum edge counts on tiny vertex sets by
//!   branch-and-bound, and a density comparison harness.
//!
//! Everything randomized is deterministic given its [`seed::RngSeed`];
//! serialized artifacts are byte-stable across runs.

pub mod bipartite;
pub mod constructions;
pub mod detector;
pub mod edge_list;
pub mod extremal;
pub mod girth;
pub mod hypergraph;
pub mod packing;
pub mod report;
pub mod seed;

pub use bipartite::BipartiteGraph;
pub use hypergraph::{CoreError, Density, Hypergraph, TightCycleWitness};
pub use seed::RngSeed;
