//! Hypergraph-building procedures: the tripartite lifting of a packed
//! family, its sum-product generalization, the cone lift that raises
//! uniformity, the star and complete-partite baselines, and the end-to-end
//! pipeline.

use itertools::Itertools;
use thiserror::Error;

use crate::detector::{self, DetectOptions, DetectorError, SearchResult};
use crate::girth::{generate_high_girth, GirthError, GirthGenConfig};
use crate::hypergraph::{CoreError, Density, Hypergraph};
use crate::packing::{pack, PackingError, PackingFamily};
use crate::report::{ConstructionReport, Verification};
use crate::seed::RngSeed;

/// State budget for verifying tight-cycle preconditions inside constructors.
pub const PRECONDITION_VERIFY_BUDGET: u64 = 200_000;
/// State budget for verifying pipeline outputs before reporting a verdict.
pub const OUTPUT_VERIFY_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Girth(#[from] GirthError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error("apex class size must be at least 1")]
    ZeroApex,
    #[error("n must be at least {min}, got {n}")]
    NTooSmall { n: usize, min: usize },
    #[error("uniformity must be at least {min}, got {r}")]
    UniformityTooSmall { r: usize, min: usize },
    #[error("need n >= r, got n = {n}, r = {r}")]
    TooFewVertices { n: usize, r: usize },
    #[error("expected {r} part sizes, got {got}")]
    WrongPartCount { r: usize, got: usize },
    #[error("part sizes must be at least 1")]
    EmptyPart,
    #[error("factor lists differ in length: {gs} vs {hs}")]
    LengthMismatch { gs: usize, hs: usize },
    #[error("{family} member {index} is on {got} vertices, expected the shared {expected}")]
    VertexSetMismatch {
        family: &'static str,
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("{family} member {index} has uniformity {got}, expected {expected}")]
    UniformityMismatch {
        family: &'static str,
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("{family} members are not edge-disjoint: edge {edge:?} of member {index} repeats")]
    NotEdgeDisjoint {
        family: &'static str,
        index: usize,
        edge: Vec<u32>,
    },
    #[error("{family} member {index} violates its tight-cycle precondition (witness length {len})")]
    PreconditionFailed {
        family: &'static str,
        index: usize,
        len: usize,
    },
    #[error("input hypergraph contains a tight cycle of length {len}")]
    InputHasTightCycle { len: usize },
    #[error("constructed output contains a tight cycle of length {len}")]
    OutputHasTightCycle { len: usize },
}

/// Whether expensive tight-cycle preconditions were actually verified or
/// skipped on budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionCheck {
    Verified,
    SkippedBudget,
}

/// Parameters of the end-to-end pipeline.
///
/// The working `k` is `k_override` if present, else
/// `max(1, floor(alpha * ln n / ln ln n))` (clamped to 1 while
/// `ln ln n <= 0`); `t` is always `floor(n / k)`.
#[derive(Debug, Clone)]
pub struct PipelineParams {
    pub n: usize,
    pub alpha: f64,
    pub k_override: Option<usize>,
    pub seed: RngSeed,
    pub girth_cfg: GirthGenConfig,
    pub target_uniformity: usize,
}

impl PipelineParams {
    pub fn new(n: usize, target_uniformity: usize, seed: RngSeed) -> PipelineParams {
        PipelineParams {
            n,
            alpha: 0.3,
            k_override: None,
            seed,
            girth_cfg: GirthGenConfig::default(),
            target_uniformity,
        }
    }

    pub fn with_k(mut self, k: usize) -> PipelineParams {
        self.k_override = Some(k);
        self
    }

    pub fn derived_k(&self) -> usize {
        if let Some(k) = self.k_override {
            return k;
        }
        let ln_n = (self.n as f64).ln();
        let ln_ln_n = ln_n.ln();
        if ln_ln_n <= 0.0 {
            return 1;
        }
        ((self.alpha * ln_n / ln_ln_n).floor() as usize).max(1)
    }

    pub fn derived_t(&self) -> usize {
        self.n / self.derived_k()
    }
}

/// All `C(n-1, r-1)` edges through vertex 0.
pub fn star(r: usize, n: usize) -> Result<Hypergraph, ConstructError> {
    if r < 2 {
        return Err(ConstructError::UniformityTooSmall { r, min: 2 });
    }
    if n < r {
        return Err(ConstructError::TooFewVertices { n, r });
    }
    let edges = (1..n as u32).combinations(r - 1).map(|mut rest| {
        rest.insert(0, 0);
        rest
    });
    Ok(Hypergraph::new(r, n, edges)?)
}

/// All transversal edges over consecutive parts of the given sizes.
pub fn complete_r_partite(r: usize, part_sizes: &[usize]) -> Result<Hypergraph, ConstructError> {
    if part_sizes.len() != r {
        return Err(ConstructError::WrongPartCount {
            r,
            got: part_sizes.len(),
        });
    }
    if part_sizes.contains(&0) {
        return Err(ConstructError::EmptyPart);
    }
    let mut parts = Vec::with_capacity(r);
    let mut offset = 0u32;
    for &s in part_sizes {
        parts.push(offset..offset + s as u32);
        offset += s as u32;
    }
    let edges = parts
        .iter()
        .map(|p| p.clone().collect::<Vec<u32>>())
        .multi_cartesian_product();
    let h = Hypergraph::new(r, offset as usize, edges)?;
    Ok(h.with_partition(parts)?)
}

/// The tripartite lifting: replace each edge `{x, y}` of member `i` by the
/// `k` hyperedges `{x, n + y, z}` over that member's `k` dedicated
/// third-class vertices. Vertex `(i, s)` of class Z sits at index
/// `2n + i*k + s` (members and slots counted from 0).
pub fn tripartite_from_family(fam: &PackingFamily) -> Hypergraph {
    let n = fam.n() as u32;
    let k = fam.k() as u32;
    let t = fam.t() as u32;
    let mut edges = Vec::with_capacity(fam.k() * fam.edge_sum());
    for (i, g) in fam.members().iter().enumerate() {
        let block = 2 * n + i as u32 * k;
        for &(x, y) in g.edges() {
            for s in 0..k {
                edges.push(vec![x, n + y, block + s]);
            }
        }
    }
    let expected = fam.k() * fam.edge_sum();
    let h = Hypergraph::new(3, (2 * n + k * t) as usize, edges)
        .expect("lifted edges are valid and distinct")
        .with_partition(vec![0..n, n..2 * n, 2 * n..2 * n + k * t])
        .expect("classes are disjoint and edges transversal");
    assert_eq!(h.edge_count(), expected, "lifted edge count mismatch");
    h
}

/// The `(r + r')`-uniform sum-product of two edge-disjoint families: all
/// unions `e ∪ f` with `e` in the i-th left factor and `f` in the i-th right
/// factor. Left factors must carry no tight cycle of length at most `r * k`,
/// right factors none of length more than `r' * k`; both conditions are
/// verified with a search budgeted at [`PRECONDITION_VERIFY_BUDGET`] states
/// (instances past the budget are accepted and flagged).
pub fn sum_product(
    gs: &[Hypergraph],
    hs: &[Hypergraph],
    k: usize,
) -> Result<(Hypergraph, PreconditionCheck), ConstructError> {
    sum_product_with_budget(gs, hs, k, PRECONDITION_VERIFY_BUDGET)
}

/// [`sum_product`] with an explicit verification budget.
pub fn sum_product_with_budget(
    gs: &[Hypergraph],
    hs: &[Hypergraph],
    k: usize,
    verify_budget: u64,
) -> Result<(Hypergraph, PreconditionCheck), ConstructError> {
    if gs.len() != hs.len() || gs.is_empty() {
        return Err(ConstructError::LengthMismatch {
            gs: gs.len(),
            hs: hs.len(),
        });
    }
    let r = check_family_shape("left", gs)?;
    let r_prime = check_family_shape("right", hs)?;
    let n_g = gs[0].n_vertices();
    let n_h = hs[0].n_vertices();

    let mut check = PreconditionCheck::Verified;
    for (index, g) in gs.iter().enumerate() {
        // no tight cycle of length <= r * k
        match bounded_find(g, r + 1, r * k, verify_budget)? {
            BoundedOutcome::Witness(len) => {
                return Err(ConstructError::PreconditionFailed {
                    family: "left",
                    index,
                    len,
                })
            }
            BoundedOutcome::Free => {}
            BoundedOutcome::Aborted => check = PreconditionCheck::SkippedBudget,
        }
    }
    for (index, h) in hs.iter().enumerate() {
        // no tight cycle of length > r' * k
        match bounded_find(h, (r_prime * k + 1).max(r_prime + 1), h.n_vertices(), verify_budget)? {
            BoundedOutcome::Witness(len) => {
                return Err(ConstructError::PreconditionFailed {
                    family: "right",
                    index,
                    len,
                })
            }
            BoundedOutcome::Free => {}
            BoundedOutcome::Aborted => check = PreconditionCheck::SkippedBudget,
        }
    }

    let offset = n_g as u32;
    let mut edges = Vec::new();
    for (g, h) in gs.iter().zip(hs) {
        for e in g.edges() {
            for f in h.edges() {
                let mut edge = e.clone();
                edge.extend(f.iter().map(|&v| v + offset));
                edges.push(edge);
            }
        }
    }
    let expected: usize = gs
        .iter()
        .zip(hs)
        .map(|(g, h)| g.edge_count() * h.edge_count())
        .sum();
    let out = Hypergraph::new(r + r_prime, n_g + n_h, edges)?;
    assert_eq!(out.edge_count(), expected, "sum-product edge count mismatch");
    Ok((out, check))
}

/// A packed family in sum-product form: the members as 2-uniform hypergraphs
/// on the shared `X + Y` vertex set, paired with the `k` singleton edges of
/// each member's Z-block. The product reproduces
/// [`tripartite_from_family`]'s edge set exactly.
pub fn family_sum_product(
    fam: &PackingFamily,
) -> Result<(Hypergraph, PreconditionCheck), ConstructError> {
    let n = fam.n();
    let k = fam.k();
    let t = fam.t();
    let gs: Vec<Hypergraph> = fam
        .members()
        .iter()
        .map(|g| {
            let edges = g.edges().iter().map(|&(x, y)| vec![x, n as u32 + y]);
            Hypergraph::new(2, 2 * n, edges).expect("member edges are valid")
        })
        .collect();
    let hs: Vec<Hypergraph> = (0..t)
        .map(|i| {
            let edges = (0..k).map(|s| vec![(i * k + s) as u32]);
            Hypergraph::new(1, k * t, edges).expect("singleton edges are valid")
        })
        .collect();
    sum_product(&gs, &hs, k)
}

enum BoundedOutcome {
    Witness(usize),
    Free,
    Aborted,
}

fn bounded_find(
    h: &Hypergraph,
    min: usize,
    max: usize,
    budget: u64,
) -> Result<BoundedOutcome, ConstructError> {
    let out = detector::search(
        h,
        &DetectOptions {
            min_length: Some(min),
            max_length: Some(max),
            state_budget: Some(budget),
            parallel_roots: false,
        },
    );
    Ok(match out.result {
        SearchResult::Found(w) => BoundedOutcome::Witness(w.len()),
        SearchResult::Free => BoundedOutcome::Free,
        SearchResult::Aborted => BoundedOutcome::Aborted,
    })
}

fn check_family_shape(
    family: &'static str,
    members: &[Hypergraph],
) -> Result<usize, ConstructError> {
    let r = members[0].r();
    let n = members[0].n_vertices();
    let mut seen: std::collections::HashSet<&[u32]> = std::collections::HashSet::new();
    for (index, m) in members.iter().enumerate() {
        if m.r() != r {
            return Err(ConstructError::UniformityMismatch {
                family,
                index,
                got: m.r(),
                expected: r,
            });
        }
        if m.n_vertices() != n {
            return Err(ConstructError::VertexSetMismatch {
                family,
                index,
                got: m.n_vertices(),
                expected: n,
            });
        }
        for e in m.edges() {
            if !seen.insert(e.as_slice()) {
                return Err(ConstructError::NotEdgeDisjoint {
                    family,
                    index,
                    edge: e.clone(),
                });
            }
        }
    }
    Ok(r)
}

/// Extend every edge of `h` by each of `m` fresh apex vertices, raising the
/// uniformity by one. Preserves tight-cycle-freeness of the input; the input
/// is checked with a budgeted exact search and rejected if a cycle is found.
pub fn cone_lift(h: &Hypergraph, m: usize) -> Result<Hypergraph, ConstructError> {
    if m == 0 {
        return Err(ConstructError::ZeroApex);
    }
    if let BoundedOutcome::Witness(len) =
        bounded_find(h, h.r() + 1, h.n_vertices(), PRECONDITION_VERIFY_BUDGET)?
    {
        return Err(ConstructError::InputHasTightCycle { len });
    }
    let base = h.n_vertices() as u32;
    let mut edges = Vec::with_capacity(h.edge_count() * m);
    for e in h.edges() {
        for a in 0..m as u32 {
            let mut edge = e.clone();
            edge.push(base + a);
            edges.push(edge);
        }
    }
    let out = Hypergraph::new(h.r() + 1, h.n_vertices() + m, edges)?;
    assert_eq!(out.edge_count(), m * h.edge_count());
    let out = match h.partition() {
        Some(parts) => {
            let mut parts = parts.to_vec();
            parts.push(base..base + m as u32);
            out.with_partition(parts)?
        }
        None => out,
    };
    Ok(out)
}

/// The 3-uniform pipeline: generate a short-cycle-free template, pack `t`
/// copies, lift the family. Deterministic given the parameters; the returned
/// report carries exact counts and is marked structurally guaranteed (run
/// [`construct_r_uniform`] for a verified verdict).
pub fn tripartite_pipeline(
    p: &PipelineParams,
) -> Result<(Hypergraph, ConstructionReport), ConstructError> {
    if p.n < 4 {
        return Err(ConstructError::NTooSmall { n: p.n, min: 4 });
    }
    let k = p.derived_k();
    let t = p.derived_t();
    let template = generate_high_girth(p.n, k, &p.girth_cfg, p.seed.child(0))?;
    let fam = pack(&template, t, k, p.seed.child(1))?;
    let h = tripartite_from_family(&fam);
    let edge_sum = fam.edge_sum();
    let report = ConstructionReport {
        r: 3,
        n: p.n,
        k,
        t,
        alpha: p.alpha,
        seed: p.seed.0,
        template_edges: template.edge_count(),
        family_edge_sum: edge_sum,
        union_coverage_ratio: Density::new(edge_sum as u64, (p.n * p.n) as u128),
        hyperedge_count: h.edge_count(),
        total_vertices: h.n_vertices(),
        density_ratio: h.density_ratio()?,
        verification: Verification::StructuralOnly,
    };
    Ok((h, report))
}

/// Build an `r`-uniform tight-cycle-free hypergraph: the 3-uniform pipeline
/// followed by `r - 3` cone lifts, each adding an apex class of the current
/// vertex count. The output is verified (within budget) and the verdict
/// recorded in the report.
pub fn construct_r_uniform(
    p: &PipelineParams,
) -> Result<(Hypergraph, ConstructionReport), ConstructError> {
    let r = p.target_uniformity;
    if r < 3 {
        return Err(ConstructError::UniformityTooSmall { r, min: 3 });
    }
    let (mut h, mut report) = tripartite_pipeline(p)?;
    for _ in 3..r {
        h = cone_lift(&h, h.n_vertices())?;
    }
    report.r = r;
    report.hyperedge_count = h.edge_count();
    report.total_vertices = h.n_vertices();
    report.density_ratio = h.density_ratio()?;
    report.verification = verify_output(&h)?;
    Ok((h, report))
}

/// Budgeted output verification: the fast tripartite check where it applies,
/// then the exact search under [`OUTPUT_VERIFY_BUDGET`].
pub fn verify_output(h: &Hypergraph) -> Result<Verification, ConstructError> {
    let mut fast_passed = false;
    if h.r() == 3 && h.partition().is_some_and(|p| p.len() == 3) {
        match detector::tripartite_find_cycle(h) {
            Ok(Some(w)) => {
                return Err(ConstructError::OutputHasTightCycle { len: w.len() });
            }
            Ok(None) => fast_passed = true,
            Err(DetectorError::NotTripartiteTransversal(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let out = detector::search(h, &DetectOptions::budget(OUTPUT_VERIFY_BUDGET));
    match out.result {
        SearchResult::Found(w) => Err(ConstructError::OutputHasTightCycle { len: w.len() }),
        SearchResult::Free => Ok(Verification::VerifiedFree),
        SearchResult::Aborted if fast_passed => Ok(Verification::FastCheckOnly),
        SearchResult::Aborted => Ok(Verification::StructuralOnly),
    }
}
