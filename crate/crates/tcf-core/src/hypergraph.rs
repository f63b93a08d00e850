//! Core domain types: uniform hypergraphs and tight-cycle witnesses.
//!
//! A `Hypergraph` is immutable after construction: vertices are dense
//! `0..n_vertices` indices, edges are strictly sorted `r`-tuples held in
//! lexicographic order (the canonical form used by serialization and by all
//! determinism contracts). An optional partition records disjoint vertex
//! ranges for partite constructions; detection never requires it.

use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("uniformity must be at least 1, got {0}")]
    InvalidUniformity(usize),
    #[error("edge {edge:?} has a repeated vertex")]
    RepeatedVertex { edge: Vec<u32> },
    #[error("edge {edge:?}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { edge: Vec<u32>, vertex: u32, n: usize },
    #[error("edge {edge:?} has {got} vertices, expected {expected}")]
    WrongArity {
        edge: Vec<u32>,
        got: usize,
        expected: usize,
    },
    #[error("partition ranges must be disjoint and within 0..{n}")]
    BadPartition { n: usize },
    #[error("edge {edge:?} meets partition part {part} more than once")]
    EdgeNotTransversal { edge: Vec<u32>, part: usize },
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("bipartite edge ({x}, {y}) out of range ({n_left} x {n_right})")]
    BipartiteOutOfRange {
        x: u32,
        y: u32,
        n_left: usize,
        n_right: usize,
    },
}

/// An exact ratio together with its floating approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub exact: BigRational,
    pub approx: f64,
}

impl Density {
    pub fn new(numer: u64, denom: u128) -> Density {
        let exact = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Density {
            approx: ratio_to_f64(&exact),
            exact,
        }
    }

    pub fn from_ratio(exact: BigRational) -> Density {
        Density {
            approx: ratio_to_f64(&exact),
            exact,
        }
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.exact, self.approx)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.numer()
        .to_f64()
        .map(|n| n / r.denom().to_f64().unwrap_or(f64::INFINITY))
        .unwrap_or(f64::NAN)
}

/// An `r`-uniform hypergraph on vertices `0..n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    n_vertices: usize,
    edges: Vec<Vec<u32>>,
    partition: Option<Vec<Range<u32>>>,
}

impl Hypergraph {
    /// Build a hypergraph, validating every edge. Edges are deduplicated and
    /// brought to canonical form (sorted within, lexicographic across).
    pub fn new(
        r: usize,
        n_vertices: usize,
        edges: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Hypergraph, CoreError> {
        if r < 1 {
            return Err(CoreError::InvalidUniformity(r));
        }
        let mut canon: Vec<Vec<u32>> = Vec::new();
        for raw in edges {
            let mut e = raw.clone();
            if e.len() != r {
                return Err(CoreError::WrongArity {
                    got: e.len(),
                    expected: r,
                    edge: raw,
                });
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(CoreError::RepeatedVertex { edge: raw });
            }
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n_vertices) {
                return Err(CoreError::VertexOutOfRange {
                    vertex: v,
                    n: n_vertices,
                    edge: raw,
                });
            }
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Hypergraph {
            r,
            n_vertices,
            edges: canon,
            partition: None,
        })
    }

    /// Attach partition metadata. Ranges must be disjoint, lie within the
    /// vertex range, and every edge may meet each part at most once.
    pub fn with_partition(mut self, parts: Vec<Range<u32>>) -> Result<Hypergraph, CoreError> {
        let n = self.n_vertices;
        let mut sorted: Vec<&Range<u32>> = parts.iter().collect();
        sorted.sort_by_key(|p| p.start);
        for w in sorted.windows(2) {
            if w[1].start < w[0].end {
                return Err(CoreError::BadPartition { n });
            }
        }
        if sorted.iter().any(|p| p.start > p.end || p.end as usize > n) {
            return Err(CoreError::BadPartition { n });
        }
        for e in &self.edges {
            for (part, range) in parts.iter().enumerate() {
                if e.iter().filter(|&&v| range.contains(&v)).count() > 1 {
                    return Err(CoreError::EdgeNotTransversal {
                        edge: e.clone(),
                        part,
                    });
                }
            }
        }
        self.partition = Some(parts);
        Ok(self)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn partition(&self) -> Option<&[Range<u32>]> {
        self.partition.as_deref()
    }

    /// Membership test; `edge` must be sorted ascending.
    pub fn contains_edge(&self, edge: &[u32]) -> bool {
        debug_assert!(edge.windows(2).all(|w| w[0] < w[1]));
        self.edges
            .binary_search_by(|e| e.as_slice().cmp(edge))
            .is_ok()
    }

    /// `|E| / n^(r-1)`, exact and approximate.
    pub fn density_ratio(&self) -> Result<Density, CoreError> {
        if self.n_vertices == 0 {
            return Err(CoreError::EmptyVertexSet);
        }
        let denom = BigInt::from(self.n_vertices).pow(self.r as u32 - 1);
        Ok(Density::from_ratio(BigRational::new(
            BigInt::from(self.edge_count()),
            denom,
        )))
    }

    /// True iff `w` certifies a tight cycle of this hypergraph: more than `r`
    /// pairwise-distinct vertices whose every cyclic window of `r` consecutive
    /// entries is an edge.
    pub fn verify_witness(&self, w: &TightCycleWitness) -> bool {
        let l = w.len();
        if l <= self.r {
            return false;
        }
        let vs = w.vertices();
        let mut seen = std::collections::HashSet::with_capacity(l);
        if !vs.iter().all(|v| seen.insert(*v)) {
            return false;
        }
        let mut window = vec![0u32; self.r];
        for i in 0..l {
            for (j, slot) in window.iter_mut().enumerate() {
                *slot = vs[(i + j) % l];
            }
            window.sort_unstable();
            if !self.contains_edge(&window) {
                return false;
            }
        }
        true
    }
}

/// A cyclic vertex sequence proposed as a tight cycle. Checkable against any
/// hypergraph with [`Hypergraph::verify_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCycleWitness {
    vertices: Vec<u32>,
}

impl TightCycleWitness {
    pub fn new(vertices: Vec<u32>) -> TightCycleWitness {
        TightCycleWitness { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// The same cycle read from position `i`.
    pub fn rotate(&self, i: usize) -> TightCycleWitness {
        let l = self.vertices.len();
        TightCycleWitness::new((0..l).map(|j| self.vertices[(i + j) % l]).collect())
    }

    /// The same cycle traversed backwards.
    pub fn reverse(&self) -> TightCycleWitness {
        let mut v = self.vertices.clone();
        v.reverse();
        TightCycleWitness::new(v)
    }
}

impl std::fmt::Display for TightCycleWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cycle {}:", self.len())?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}
