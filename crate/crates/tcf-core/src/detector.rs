//! Exact tight-cycle detection.
//!
//! The main search extends ordered tight paths depth-first: a state is the
//! ordered start window plus the ordered last `r-1` vertices and the visited
//! set; a vertex `u` extends a path iff the last `r-1` vertices together with
//! `u` form an edge; a path of length `l > r` closes into a cycle iff the
//! `r-1` wrap-around windows are all edges. Duplicate discoveries are cut by
//! fixing the smallest vertex of the cycle first and orienting so that the
//! second vertex does not exceed the last.
//!
//! Results are tri-state: found / exhausted-none / budget-aborted. Freeness
//! is never claimed on an aborted search.
//!
//! [`brute_force_find`] is an independent oracle over explicit vertex
//! subsets and cyclic orders, for cross-validation on tiny instances.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, TightCycleWitness};

/// Vertex cap of the brute-force oracle.
pub const BRUTE_FORCE_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error("budget exhausted after {states_explored} search states")]
    BudgetExhausted { states_explored: u64 },
    #[error("brute force cap exceeded: {n} vertices, cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("not tripartite-transversal: {0}")]
    NotTripartiteTransversal(String),
}

/// Options for a detection query.
///
/// `min_length` defaults to `r + 1` (and is clamped up to it: shorter
/// sequences are not tight cycles); `max_length` defaults to the vertex
/// count. `state_budget` bounds explored search states; exceeding it aborts
/// the query rather than reporting freeness.
#[derive(Debug, Clone, Default)]
pub struct DetectOptions {
    pub min_length: Option<usize>,
    pub max_length: Option<usize>,
    pub state_budget: Option<u64>,
    pub parallel_roots: bool,
}

impl DetectOptions {
    pub fn length_range(min: usize, max: usize) -> DetectOptions {
        DetectOptions {
            min_length: Some(min),
            max_length: Some(max),
            ..DetectOptions::default()
        }
    }

    pub fn budget(budget: u64) -> DetectOptions {
        DetectOptions {
            state_budget: Some(budget),
            ..DetectOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found(TightCycleWitness),
    Free,
    Aborted,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub result: SearchResult,
    pub states_explored: u64,
}

/// Find a tight cycle with length in the configured range, or certify there
/// is none. Exhaustive whenever the state budget is not hit.
pub fn find_tight_cycle(
    h: &Hypergraph,
    opt: &DetectOptions,
) -> Result<Option<TightCycleWitness>, DetectorError> {
    let out = search(h, opt);
    match out.result {
        SearchResult::Found(w) => Ok(Some(w)),
        SearchResult::Free => Ok(None),
        SearchResult::Aborted => Err(DetectorError::BudgetExhausted {
            states_explored: out.states_explored,
        }),
    }
}

/// True iff the hypergraph contains no tight cycle of any length.
pub fn is_tight_cycle_free(h: &Hypergraph) -> Result<bool, DetectorError> {
    Ok(find_tight_cycle(h, &DetectOptions::default())?.is_none())
}

/// Run the tight-path search, reporting the tri-state outcome and the number
/// of explored states.
pub fn search(h: &Hypergraph, opt: &DetectOptions) -> SearchOutcome {
    let r = h.r();
    let n = h.n_vertices();
    let min_len = opt.min_length.unwrap_or(r + 1).max(r + 1);
    let max_len = opt.max_length.unwrap_or(n).min(n);
    let states = AtomicU64::new(0);
    if min_len > max_len || h.edge_count() == 0 {
        return SearchOutcome {
            result: SearchResult::Free,
            states_explored: 0,
        };
    }

    let index = SubsetIndex::build(h);
    let aborted = AtomicBool::new(false);
    let found: Mutex<Option<TightCycleWitness>> = Mutex::new(None);
    let stop = AtomicBool::new(false);

    let run_edge = |edge: &Vec<u32>| {
        let mut dfs = Dfs {
            h,
            index: &index,
            min_len,
            max_len,
            budget: opt.state_budget,
            states: &states,
            aborted: &aborted,
            stop: &stop,
            path: Vec::with_capacity(max_len),
            visited: vec![false; n],
        };
        // the first vertex of a canonical cycle is its minimum, hence the
        // minimum of its first window; edges are sorted, so edge[0] leads
        for perm in edge[1..].iter().copied().permutations(r - 1) {
            if stop.load(Ordering::Relaxed) {
                return;
            }
            dfs.path.clear();
            dfs.path.push(edge[0]);
            dfs.path.extend_from_slice(&perm);
            for &v in &dfs.path {
                dfs.visited[v as usize] = true;
            }
            let hit = dfs.explore();
            for &v in &dfs.path {
                dfs.visited[v as usize] = false;
            }
            if let Some(w) = hit {
                let witness = TightCycleWitness::new(w);
                assert!(h.verify_witness(&witness), "unsound witness produced");
                *found.lock().unwrap() = Some(witness);
                stop.store(true, Ordering::Relaxed);
                return;
            }
        }
    };

    if opt.parallel_roots {
        use rayon::prelude::*;
        h.edges().par_iter().for_each(run_edge);
    } else {
        for e in h.edges() {
            if stop.load(Ordering::Relaxed) {
                break;
            }
            run_edge(e);
        }
    }

    let states_explored = states.load(Ordering::Relaxed);
    let result = match found.into_inner().unwrap() {
        Some(w) => SearchResult::Found(w),
        None if aborted.load(Ordering::Relaxed) => SearchResult::Aborted,
        None => SearchResult::Free,
    };
    SearchOutcome {
        result,
        states_explored,
    }
}

/// Edges indexed by their (r-1)-subsets: `index[s]` lists the vertices `u`
/// with `s + u` an edge. Keys are sorted.
struct SubsetIndex {
    map: HashMap<Vec<u32>, Vec<u32>>,
}

impl SubsetIndex {
    fn build(h: &Hypergraph) -> SubsetIndex {
        let mut map: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for e in h.edges() {
            for drop in 0..e.len() {
                let mut key = Vec::with_capacity(e.len() - 1);
                key.extend(e.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, v)| *v));
                map.entry(key).or_default().push(e[drop]);
            }
        }
        SubsetIndex { map }
    }

    fn completions(&self, key: &[u32]) -> &[u32] {
        self.map.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

struct Dfs<'a> {
    h: &'a Hypergraph,
    index: &'a SubsetIndex,
    min_len: usize,
    max_len: usize,
    budget: Option<u64>,
    states: &'a AtomicU64,
    aborted: &'a AtomicBool,
    stop: &'a AtomicBool,
    path: Vec<u32>,
    visited: Vec<bool>,
}

impl Dfs<'_> {
    /// Explore extensions of the current path. Returns a closed cycle if one
    /// is found. Every call site holds `path.len() >= r` with all forward
    /// windows already certified.
    fn explore(&mut self) -> Option<Vec<u32>> {
        let count = self.states.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = self.budget {
            if count > b {
                self.aborted.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
                return None;
            }
        }
        let m = self.path.len();
        if m >= self.min_len && self.closes_cycle() {
            return Some(self.path.clone());
        }
        if m >= self.max_len || self.stop.load(Ordering::Relaxed) {
            return None;
        }
        let r = self.h.r();
        let mut key: Vec<u32> = self.path[m + 1 - r..].to_vec();
        key.sort_unstable();
        // the candidate list is shared; clone keeps the borrow checker out
        // of the recursion (lists are short)
        let candidates = self.index.completions(&key).to_vec();
        for u in candidates {
            if u <= self.path[0] || self.visited[u as usize] {
                continue; // path[0] is the cycle minimum by convention
            }
            self.path.push(u);
            self.visited[u as usize] = true;
            let hit = self.explore();
            self.visited[u as usize] = false;
            self.path.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    /// Check the `r-1` wrap-around windows and the orientation convention.
    fn closes_cycle(&self) -> bool {
        let m = self.path.len();
        let r = self.h.r();
        if self.path[1] > self.path[m - 1] {
            return false; // mirror image is canonical
        }
        let mut window = vec![0u32; r];
        for i in 1..r {
            for (j, slot) in window.iter_mut().enumerate() {
                let pos = m - r + i + j;
                *slot = self.path[if pos >= m { pos - m } else { pos }];
            }
            window.sort_unstable();
            if !self.h.contains_edge(&window) {
                return false;
            }
        }
        true
    }
}

/// Independent oracle: enumerate every vertex subset of admissible size and
/// every cyclic order up to rotation and reflection, testing all windows
/// directly. Only for tiny instances.
pub fn brute_force_find(
    h: &Hypergraph,
    opt: &DetectOptions,
) -> Result<Option<TightCycleWitness>, DetectorError> {
    let n = h.n_vertices();
    if n > BRUTE_FORCE_CAP {
        return Err(DetectorError::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let r = h.r();
    let min_len = opt.min_length.unwrap_or(r + 1).max(r + 1);
    let max_len = opt.max_length.unwrap_or(n).min(n);
    let edge_set: std::collections::HashSet<&[u32]> =
        h.edges().iter().map(Vec::as_slice).collect();
    let vertices: Vec<u32> = (0..n as u32).collect();
    for len in min_len..=max_len {
        for subset in vertices.iter().copied().combinations(len) {
            for perm in subset[1..].iter().copied().permutations(len - 1) {
                if perm[0] > perm[len - 2] {
                    continue; // reflection representative
                }
                let mut seq = Vec::with_capacity(len);
                seq.push(subset[0]);
                seq.extend_from_slice(&perm);
                let mut all = true;
                let mut window = vec![0u32; r];
                for i in 0..len {
                    for (j, slot) in window.iter_mut().enumerate() {
                        *slot = seq[(i + j) % len];
                    }
                    window.sort_unstable();
                    if !edge_set.contains(window.as_slice()) {
                        all = false;
                        break;
                    }
                }
                if all {
                    let w = TightCycleWitness::new(seq);
                    assert!(h.verify_witness(&w), "unsound brute-force witness");
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Freeness check specialized to transversal 3-partite 3-uniform inputs.
///
/// Any tight cycle of such a hypergraph reads, up to rotation and
/// reflection, `x1 y1 z1 x2 y2 z2 ...` with the parts visited in a fixed
/// rotation, so only part-aligned sequences (lengths divisible by 3) are
/// searched.
pub fn tripartite_fast_check(h: &Hypergraph) -> Result<bool, DetectorError> {
    Ok(tripartite_find_cycle(h)?.is_none())
}

/// Witness-producing form of [`tripartite_fast_check`].
pub fn tripartite_find_cycle(
    h: &Hypergraph,
) -> Result<Option<TightCycleWitness>, DetectorError> {
    let parts = h
        .partition()
        .ok_or_else(|| DetectorError::NotTripartiteTransversal("partition absent".into()))?;
    if parts.len() != 3 || h.r() != 3 {
        return Err(DetectorError::NotTripartiteTransversal(format!(
            "need 3 parts and r = 3, got {} parts and r = {}",
            parts.len(),
            h.r()
        )));
    }
    for e in h.edges() {
        for (i, p) in parts.iter().enumerate() {
            if e.iter().filter(|&&v| p.contains(&v)).count() != 1 {
                return Err(DetectorError::NotTripartiteTransversal(format!(
                    "edge {e:?} does not meet part {i} exactly once"
                )));
            }
        }
    }

    let index = SubsetIndex::build(h);
    let in_part = |v: u32, i: usize| parts[i].contains(&v);
    let mut visited = vec![false; h.n_vertices()];

    for e in h.edges() {
        // order the root edge (x, y, z) by part
        let x = *e.iter().find(|&&v| in_part(v, 0)).unwrap();
        let y = *e.iter().find(|&&v| in_part(v, 1)).unwrap();
        let z = *e.iter().find(|&&v| in_part(v, 2)).unwrap();
        let mut path = vec![x, y, z];
        for &v in &path {
            visited[v as usize] = true;
        }
        let hit = extend_triples(h, &index, &mut path, &mut visited);
        for &v in &[x, y, z] {
            visited[v as usize] = false;
        }
        if let Some(seq) = hit {
            let w = TightCycleWitness::new(seq);
            assert!(h.verify_witness(&w), "unsound tripartite witness");
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Append one `x, y, z` triple at a time; closing back to the start needs
/// the two wrap windows `{y_l, z_l, x_1}` and `{z_l, x_1, y_1}`.
fn extend_triples(
    h: &Hypergraph,
    index: &SubsetIndex,
    path: &mut Vec<u32>,
    visited: &mut [bool],
) -> Option<Vec<u32>> {
    let m = path.len();
    let (y_prev, z_prev) = (path[m - 2], path[m - 1]);
    let key = sorted_pair(y_prev, z_prev);
    for &x in index.completions(&key).to_vec().iter() {
        if x == path[0] && m >= 6 {
            // {y_prev, z_prev, x1} is an edge by the lookup; the last wrap
            // window is {z_prev, x1, y1}
            let mut wrap = [z_prev, path[0], path[1]];
            wrap.sort_unstable();
            if h.contains_edge(&wrap) {
                return Some(path.clone());
            }
        }
        if x < path[0] || visited[x as usize] {
            continue; // the first x is the smallest x on the cycle
        }
        for &y in index.completions(&sorted_pair(z_prev, x)).to_vec().iter() {
            if visited[y as usize] {
                continue;
            }
            for &z in index.completions(&sorted_pair(x, y)).to_vec().iter() {
                if visited[z as usize] {
                    continue;
                }
                path.extend_from_slice(&[x, y, z]);
                visited[x as usize] = true;
                visited[y as usize] = true;
                visited[z as usize] = true;
                let hit = extend_triples(h, index, path, visited);
                visited[x as usize] = false;
                visited[y as usize] = false;
                visited[z as usize] = false;
                path.truncate(m);
                if hit.is_some() {
                    return hit;
                }
            }
        }
    }
    None
}

fn sorted_pair(a: u32, b: u32) -> [u32; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}
