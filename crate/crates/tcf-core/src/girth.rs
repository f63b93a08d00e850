//! Exact shortest-cycle computation on bipartite graphs, and generation of
//! dense bipartite subgraphs of `K_{n,n}` with no cycle of length at most
//! `2k` (the template that the packing stage copies around).

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::bipartite::BipartiteGraph;

pub use crate::seed::RngSeed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GirthError {
    #[error("n must be at least 2, got {0}")]
    NTooSmall(usize),
    #[error("k must be at least 1")]
    KZero,
    #[error("k = {k} exceeds the validity bound ceil(log2 n) = {bound} for n = {n}")]
    KTooLarge { k: usize, n: usize, bound: usize },
    #[error("girth target infeasible: {retries} attempts retained fewer than {min_edges} edges")]
    Infeasible { retries: usize, min_edges: usize },
    #[error("invalid generator config: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalStrategy {
    /// Sample a `p`-random subgraph of `K_{n,n}`, then repeatedly find a
    /// cycle of length at most `2k` and delete one uniformly random edge of
    /// it until none remains.
    DeleteRandomEdgePerShortCycle,
    /// Insert the pairs of `K_{n,n}` in random order, skipping any pair whose
    /// insertion would close a cycle of length at most `2k`. The result is
    /// maximal.
    GreedyInsertion,
}

/// Generator configuration. The target edge count is `n^(1 + c/k)` scaled by
/// `initial_edge_probability_scale`; `c` is `density_exponent_c`.
#[derive(Debug, Clone)]
pub struct GirthGenConfig {
    pub density_exponent_c: f64,
    pub initial_edge_probability_scale: f64,
    pub removal_strategy: RemovalStrategy,
    pub max_retries: usize,
}

impl Default for GirthGenConfig {
    fn default() -> Self {
        GirthGenConfig {
            density_exponent_c: 1.0,
            initial_edge_probability_scale: 0.25,
            removal_strategy: RemovalStrategy::DeleteRandomEdgePerShortCycle,
            max_retries: 256,
        }
    }
}

impl GirthGenConfig {
    fn validate(&self) -> Result<(), GirthError> {
        if !(self.density_exponent_c > 0.0 && self.density_exponent_c <= 1.0) {
            return Err(GirthError::BadConfig(format!(
                "density_exponent_c must be in (0, 1], got {}",
                self.density_exponent_c
            )));
        }
        if self.initial_edge_probability_scale <= 0.0 {
            return Err(GirthError::BadConfig(
                "initial_edge_probability_scale must be positive".into(),
            ));
        }
        if self.max_retries < 1 {
            return Err(GirthError::BadConfig("max_retries must be at least 1".into()));
        }
        Ok(())
    }
}

/// The girth of `g`, or `None` for a forest. Always even and at least 4.
pub fn shortest_cycle_length(g: &BipartiteGraph) -> Option<usize> {
    let adj = g.adjacency();
    let n = adj.len();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        dist.fill(usize::MAX);
        queue.clear();
        dist[s] = 0;
        parent[s] = u32::MAX;
        queue.push_back(s as u32);
        while let Some(u) = queue.pop_front() {
            // nothing beyond half the current best can improve it
            if let Some(b) = best {
                if dist[u as usize] >= b / 2 {
                    break;
                }
            }
            for &w in &adj[u as usize] {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                } else if w != parent[u as usize] {
                    let len = dist[u as usize] + dist[w as usize] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
    }
    best
}

/// True iff `g` has a cycle of length at most `l`; bounded breadth-first
/// searches with early exit.
pub fn has_cycle_at_most(g: &BipartiteGraph, l: usize) -> bool {
    let adj = g.adjacency();
    (0..adj.len()).any(|s| short_cycle_from(&adj, s, l / 2).is_some())
}

/// Bounded BFS from `s`: scan vertices at depth below `half`, and report the
/// first cycle of length at most `2 * half` as an edge list.
fn short_cycle_from(adj: &[Vec<u32>], s: usize, half: usize) -> Option<Vec<(u32, u32)>> {
    if half == 0 {
        return None;
    }
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[s] = 0;
    queue.push_back(s as u32);
    while let Some(u) = queue.pop_front() {
        if dist[u as usize] >= half {
            break;
        }
        for &w in &adj[u as usize] {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                parent[w as usize] = u;
                queue.push_back(w);
            } else if w != parent[u as usize] {
                return Some(cycle_edges(&dist, &parent, u, w));
            }
        }
    }
    None
}

/// Reconstruct the cycle closed by the non-tree edge `(u, w)` from the BFS
/// tree: both root paths up to their deepest common vertex, plus the edge.
fn cycle_edges(dist: &[usize], parent: &[u32], u: u32, w: u32) -> Vec<(u32, u32)> {
    let path_to_root = |mut v: u32| {
        let mut path = vec![v];
        while parent[v as usize] != u32::MAX {
            v = parent[v as usize];
            path.push(v);
        }
        path
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    let on_pu: std::collections::HashSet<u32> = pu.iter().copied().collect();
    let lca = *pw.iter().find(|v| on_pu.contains(v)).expect("shared root");
    let mut edges = vec![(u, w)];
    for p in [&pu, &pw] {
        for pair in p.iter().take_while(|&&v| v != lca).zip(p.iter().skip(1)) {
            edges.push((*pair.0, *pair.1));
        }
    }
    debug_assert_eq!(edges.len(), dist[u as usize] + dist[w as usize] + 1 - 2 * dist[lca as usize]);
    edges
}

/// Generate a subgraph of `K_{n,n}` with no cycle of length at most `2k`.
///
/// Deterministic given `(n, k, cfg, seed)`. The output is re-validated with
/// the exact girth computation before being returned. Fails with
/// [`GirthError::Infeasible`] when no attempt within the retry budget keeps
/// at least `n` edges.
pub fn generate_high_girth(
    n: usize,
    k: usize,
    cfg: &GirthGenConfig,
    seed: RngSeed,
) -> Result<BipartiteGraph, GirthError> {
    if n < 2 {
        return Err(GirthError::NTooSmall(n));
    }
    if k < 1 {
        return Err(GirthError::KZero);
    }
    cfg.validate()?;
    let bound = (n as f64).log2().ceil() as usize;
    if k > bound {
        return Err(GirthError::KTooLarge { k, n, bound });
    }
    if k == 1 {
        // no simple graph has a cycle of length 2: take everything
        return Ok(BipartiteGraph::complete(n, n));
    }

    let exponent = -1.0 + cfg.density_exponent_c / k as f64;
    let p = (cfg.initial_edge_probability_scale * (n as f64).powf(exponent)).min(1.0);

    for attempt in 0..cfg.max_retries {
        let mut rng = seed.child(attempt as u64).rng();
        let edges = match cfg.removal_strategy {
            RemovalStrategy::DeleteRandomEdgePerShortCycle => {
                sample_then_delete(n, k, p, &mut rng)
            }
            RemovalStrategy::GreedyInsertion => greedy_insert(n, k, &mut rng),
        };
        if edges.len() >= n {
            let g = BipartiteGraph::new(n, n, edges).expect("generator stays in range");
            let girth = shortest_cycle_length(&g);
            assert!(
                girth.is_none_or(|c| c > 2 * k),
                "generator post-condition violated: girth {girth:?} with k = {k}"
            );
            return Ok(g);
        }
    }
    Err(GirthError::Infeasible {
        retries: cfg.max_retries,
        min_edges: n,
    })
}

fn sample_then_delete(n: usize, k: usize, p: f64, rng: &mut impl Rng) -> Vec<(u32, u32)> {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); 2 * n];
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            if rng.gen_bool(p) {
                adj[x as usize].push(n as u32 + y);
                adj[(n as u32 + y) as usize].push(x);
            }
        }
    }
    // Deleting edges never creates cycles, so vertices certified short-
    // cycle-free stay certified: sweep once, re-scanning only the current
    // vertex after each deletion.
    let mut s = 0;
    while s < 2 * n {
        match short_cycle_from(&adj, s, k) {
            Some(cycle) => {
                let &(a, b) = &cycle[rng.gen_range(0..cycle.len())];
                adj[a as usize].retain(|&v| v != b);
                adj[b as usize].retain(|&v| v != a);
            }
            None => s += 1,
        }
    }
    collect_edges(&adj, n)
}

fn greedy_insert(n: usize, k: usize, rng: &mut impl Rng) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|x| (0..n as u32).map(move |y| (x, y)))
        .collect();
    pairs.shuffle(rng);
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); 2 * n];
    for (x, y) in pairs {
        let u = x;
        let w = n as u32 + y;
        if !within_distance(&adj, u, w, 2 * k - 1) {
            adj[u as usize].push(w);
            adj[w as usize].push(u);
        }
    }
    collect_edges(&adj, n)
}

fn within_distance(adj: &[Vec<u32>], from: u32, to: u32, limit: usize) -> bool {
    if from == to {
        return true;
    }
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[from as usize] = 0;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        if dist[u as usize] >= limit {
            break;
        }
        for &w in &adj[u as usize] {
            if dist[w as usize] == usize::MAX {
                if w == to {
                    return true;
                }
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    false
}

fn collect_edges(adj: &[Vec<u32>], n: usize) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for (x, neighbors) in adj.iter().take(n).enumerate() {
        for &w in neighbors {
            edges.push((x as u32, w - n as u32));
        }
    }
    edges
}
