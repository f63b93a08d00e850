//! Edge-disjoint packing of random template copies into `K_{n,n}`.
//!
//! `pack` places `t` independent uniformly random copies of a template `H`
//! and peels them: the i-th member keeps only the edges not seen in any
//! earlier copy. Members are pairwise edge-disjoint by construction and
//! inherit the template's short-cycle freeness; the sum of member sizes
//! equals the size of the union of the copies, an identity asserted on every
//! run.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::bipartite::BipartiteGraph;
use crate::edge_list::{parse_bipartite_at, serialize_bipartite, Cursor, ParseError};
use crate::girth::has_cycle_at_most;
use crate::hypergraph::Density;
use crate::seed::RngSeed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("precondition kt > n: k = {k}, t = {t}, n = {n}")]
    KtExceedsN { k: usize, t: usize, n: usize },
    #[error("template has short cycle (some cycle length <= {limit})")]
    TemplateShortCycle { limit: usize },
    #[error("template sides differ: {n_left} vs {n_right}")]
    UnequalSides { n_left: usize, n_right: usize },
    #[error("t must be at least 1")]
    ZeroCopies,
    #[error("member {index}: {what}")]
    MemberInvariant { index: usize, what: String },
}

/// Edge-disjoint subgraphs `G_1..G_t` of `K_{n,n}` with their provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingFamily {
    n: usize,
    k: usize,
    t: usize,
    members: Vec<BipartiteGraph>,
    template_edge_count: usize,
    seed: RngSeed,
}

impl PackingFamily {
    /// Assemble a family from explicit members, validating every invariant:
    /// equal sides of size `n`, pairwise edge-disjointness, no member cycle
    /// of length at most `2k`, and `k * t <= n`.
    pub fn from_members(
        n: usize,
        k: usize,
        members: Vec<BipartiteGraph>,
        template_edge_count: usize,
        seed: RngSeed,
    ) -> Result<PackingFamily, PackingError> {
        let t = members.len();
        if t == 0 {
            return Err(PackingError::ZeroCopies);
        }
        if k.checked_mul(t).is_none_or(|kt| kt > n) {
            return Err(PackingError::KtExceedsN { k, t, n });
        }
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        for (index, g) in members.iter().enumerate() {
            if g.n_left() != n || g.n_right() != n {
                return Err(PackingError::MemberInvariant {
                    index,
                    what: format!("sides {}x{} differ from n = {n}", g.n_left(), g.n_right()),
                });
            }
            if has_cycle_at_most(g, 2 * k) {
                return Err(PackingError::MemberInvariant {
                    index,
                    what: format!("contains a cycle of length at most {}", 2 * k),
                });
            }
            for e in g.edges() {
                if !seen.insert(*e) {
                    return Err(PackingError::MemberInvariant {
                        index,
                        what: format!("edge {e:?} already appears in an earlier member"),
                    });
                }
            }
        }
        Ok(PackingFamily {
            n,
            k,
            t,
            members,
            template_edge_count,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn members(&self) -> &[BipartiteGraph] {
        &self.members
    }

    pub fn template_edge_count(&self) -> usize {
        self.template_edge_count
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    /// `sum of |E(G_i)|` over the members.
    pub fn edge_sum(&self) -> usize {
        self.members.iter().map(BipartiteGraph::edge_count).sum()
    }
}

/// The image of `H` under independent uniformly random permutations of side
/// X and side Y. Isomorphic to `H`; deterministic given the seed.
pub fn random_copy(h: &BipartiteGraph, seed: RngSeed) -> BipartiteGraph {
    assert_eq!(
        h.n_left(),
        h.n_right(),
        "random_copy expects equal sides"
    );
    let n = h.n_left();
    let mut rng = seed.rng();
    let mut perm_x: Vec<u32> = (0..n as u32).collect();
    let mut perm_y: Vec<u32> = (0..n as u32).collect();
    perm_x.shuffle(&mut rng);
    perm_y.shuffle(&mut rng);
    let edges = h
        .edges()
        .iter()
        .map(|&(x, y)| (perm_x[x as usize], perm_y[y as usize]));
    BipartiteGraph::new(n, n, edges).expect("permutation stays in range")
}

/// Pack `t` random copies of `h` and peel them into edge-disjoint members.
/// Member `i` is sampled with child seed `i`; fully eclipsed copies are
/// retained as empty members so downstream index arithmetic stays aligned.
pub fn pack(
    h: &BipartiteGraph,
    t: usize,
    k: usize,
    seed: RngSeed,
) -> Result<PackingFamily, PackingError> {
    if t == 0 {
        return Err(PackingError::ZeroCopies);
    }
    if h.n_left() != h.n_right() {
        return Err(PackingError::UnequalSides {
            n_left: h.n_left(),
            n_right: h.n_right(),
        });
    }
    let n = h.n_left();
    if k.checked_mul(t).is_none_or(|kt| kt > n) {
        return Err(PackingError::KtExceedsN { k, t, n });
    }
    if has_cycle_at_most(h, 2 * k) {
        return Err(PackingError::TemplateShortCycle { limit: 2 * k });
    }

    let mut union: HashSet<(u32, u32)> = HashSet::new();
    let mut members = Vec::with_capacity(t);
    let mut copies = Vec::with_capacity(t);
    for i in 0..t {
        let copy = random_copy(h, seed.child(i as u64));
        let fresh: Vec<(u32, u32)> = copy
            .edges()
            .iter()
            .copied()
            .filter(|e| !union.contains(e))
            .collect();
        union.extend(fresh.iter().copied());
        members.push(BipartiteGraph::new(n, n, fresh).expect("subset of a valid graph"));
        copies.push(copy);
    }

    let fam = PackingFamily {
        n,
        k,
        t,
        members,
        template_edge_count: h.edge_count(),
        seed,
    };
    // the peeling identity, recomputed from scratch on both sides
    let independent_union: HashSet<(u32, u32)> = copies
        .iter()
        .flat_map(|c| c.edges().iter().copied())
        .collect();
    assert_eq!(
        fam.edge_sum(),
        independent_union.len(),
        "peeling identity violated"
    );
    Ok(fam)
}

/// Coverage accounting for a family.
#[derive(Debug, Clone)]
pub struct CoverageStats {
    pub edge_sum: usize,
    pub coverage_ratio: Density,
    /// `exp(-|E(H)| * t / n^2)`: the mean-field per-edge upper bound on the
    /// probability of staying uncovered. Reported for comparison, not
    /// asserted per run.
    pub predicted_missing_fraction: f64,
}

pub fn coverage_stats(fam: &PackingFamily) -> CoverageStats {
    let n2 = (fam.n as u128) * (fam.n as u128);
    let edge_sum = fam.edge_sum();
    let exponent =
        -((fam.template_edge_count * fam.t) as f64) / (fam.n as f64 * fam.n as f64);
    CoverageStats {
        edge_sum,
        coverage_ratio: Density::new(edge_sum as u64, n2),
        predicted_missing_fraction: exponent.exp(),
    }
}

/// Serialize a family as a manifest comment followed by the members'
/// edge-list documents, concatenated.
pub fn serialize_family(fam: &PackingFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# family {} {} {} {} {}",
        fam.n,
        fam.k,
        fam.t,
        fam.seed.0,
        fam.edge_sum()
    );
    let _ = writeln!(out, "# template {}", fam.template_edge_count);
    for m in &fam.members {
        out.push_str(&serialize_bipartite(m));
    }
    out
}

pub fn parse_family(text: &str) -> Result<PackingFamily, ParseError> {
    let mut cursor = Cursor::new(text);
    let manifest = cursor
        .take_leading_comment("family")
        .ok_or(ParseError::MissingHeader)?;
    let toks: Vec<&str> = manifest.split_whitespace().collect();
    if toks.len() != 5 {
        return Err(ParseError::Malformed {
            line: 1,
            msg: "family manifest needs \"n k t seed edge_sum\"".into(),
        });
    }
    let parse = |i: usize| -> Result<usize, ParseError> {
        toks[i].parse().map_err(|_| ParseError::Malformed {
            line: 1,
            msg: format!("bad manifest field {:?}", toks[i]),
        })
    };
    let (n, k, t) = (parse(0)?, parse(1)?, parse(2)?);
    let seed: u64 = toks[3].parse().map_err(|_| ParseError::Malformed {
        line: 1,
        msg: "bad seed".into(),
    })?;
    let declared_sum = parse(4)?;
    let template_edge_count = cursor
        .take_leading_comment("template")
        .map(|s| {
            s.trim().parse().map_err(|_| ParseError::Malformed {
                line: 2,
                msg: "bad template edge count".into(),
            })
        })
        .transpose()?
        .unwrap_or(0);
    let mut members = Vec::with_capacity(t);
    for _ in 0..t {
        members.push(parse_bipartite_at(&mut cursor)?);
    }
    cursor.expect_end()?;
    let fam = PackingFamily::from_members(n, k, members, template_edge_count, RngSeed(seed))
        .map_err(|e| ParseError::Malformed {
            line: 1,
            msg: e.to_string(),
        })?;
    if fam.edge_sum() != declared_sum {
        return Err(ParseError::Malformed {
            line: 1,
            msg: format!(
                "manifest edge_sum {declared_sum} disagrees with members ({})",
                fam.edge_sum()
            ),
        });
    }
    Ok(fam)
}
