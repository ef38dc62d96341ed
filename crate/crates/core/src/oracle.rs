//! Brute-force ground truth built on a separate capacity-matrix max-flow.

use crate::digraph::{CutSet, Digraph, VertexId};
use crate::dsu::DisjointSets;
use crate::local_search::MSetResult;
use crate::partition::Partition;
use thiserror::Error;

/// Largest vertex table the dense oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 4096;
/// Largest live vertex count for subset enumeration.
pub const ENUM_MAX_VERTICES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} vertex slots, oracle limit is {ORACLE_MAX_VERTICES}")]
    TooLarge(usize),
    #[error("enumeration needs at most {ENUM_MAX_VERTICES} live vertices, got {0}")]
    TooManyToEnumerate(usize),
    #[error("λ({v},{s}) = {lambda} is below {c}; the minimal {c}-out set is undefined")]
    BelowLevel {
        v: VertexId,
        s: VertexId,
        lambda: usize,
        c: usize,
    },
}

/// Dense residual network over the vertex slots of a graph.
#[derive(Clone, Debug)]
struct Network {
    n: usize,
    res: Vec<i32>,
    nbrs: Vec<Vec<usize>>,
}

impl Network {
    fn new(g: &Digraph) -> Result<Self, OracleError> {
        let n = g.vertex_bound();
        if n > ORACLE_MAX_VERTICES {
            return Err(OracleError::TooLarge(n));
        }
        let mut res = vec![0i32; n * n];
        let mut nbrs = vec![Vec::new(); n];
        for e in g.edges() {
            let (u, v) = (g.tail(e), g.head(e));
            if res[u * n + v] == 0 && res[v * n + u] == 0 {
                nbrs[u].push(v);
                nbrs[v].push(u);
            }
            res[u * n + v] += 1;
        }
        Ok(Self { n, res, nbrs })
    }

    /// One augmenting path by DFS; true if found.
    fn push(&mut self, s: usize, t: usize) -> bool {
        let n = self.n;
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if x == t {
                break;
            }
            for &y in &self.nbrs[x] {
                if parent[y] == usize::MAX && self.res[x * n + y] > 0 {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        if parent[t] == usize::MAX {
            return false;
        }
        let mut y = t;
        while y != s {
            let x = parent[y];
            self.res[x * n + y] -= 1;
            self.res[y * n + x] += 1;
            y = x;
        }
        true
    }

    fn flow(&mut self, s: usize, t: usize, cap: usize) -> usize {
        let mut f = 0;
        while f < cap && self.push(s, t) {
            f += 1;
        }
        f
    }

    fn reachable(&self, from: usize, forward: bool) -> Vec<bool> {
        let n = self.n;
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for &y in &self.nbrs[x] {
                let r = if forward {
                    self.res[x * n + y]
                } else {
                    self.res[y * n + x]
                };
                if !seen[y] && r > 0 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// `min(λ(u, v), cap)`.
pub fn oracle_lambda(
    g: &Digraph,
    u: VertexId,
    v: VertexId,
    cap: usize,
) -> Result<usize, OracleError> {
    Ok(Network::new(g)?.flow(u, v, cap))
}

/// Bounded λ for every ordered pair of live vertices; the diagonal holds `cap`.
pub fn all_pairs_lambda(g: &Digraph, cap: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    let base = Network::new(g)?;
    let n = g.vertex_bound();
    let mut m = vec![vec![0; n]; n];
    for u in g.vertices() {
        for v in g.vertices() {
            m[u][v] = if u == v {
                cap
            } else {
                base.clone().flow(u, v, cap)
            };
        }
    }
    Ok(m)
}

/// Classes of mutual bounded connectivity ≥ c; dead slots are singletons.
pub fn ecc_components(g: &Digraph, c: usize) -> Result<Partition, OracleError> {
    let m = all_pairs_lambda(g, c)?;
    let n = g.vertex_bound();
    let mut d = DisjointSets::new(n);
    for u in g.vertices() {
        for v in g.vertices() {
            if u < v && m[u][v] >= c && m[v][u] >= c {
                d.unite(u, v);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| d.find(v)).collect();
    Ok(Partition::from_labels(&labels))
}

/// Minimal `c`-out set containing `v` and not `s`, or `Bottom` if none exists.
pub fn mset_oracle(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    c: usize,
) -> Result<MSetResult, OracleError> {
    let mut net = Network::new(g)?;
    let lambda = net.flow(v, s, c + 1);
    if lambda < c {
        return Err(OracleError::BelowLevel { v, s, lambda, c });
    }
    if lambda > c {
        if g.n_live() <= 12 {
            debug_assert!(enumerate_separators(g, v, s, c)?.is_empty());
        }
        return Ok(MSetResult::Bottom);
    }
    let seen = net.reachable(v, true);
    let members = g.vertices().filter(|&x| seen[x]).collect();
    Ok(MSetResult::Found(CutSet::measure(g, members)))
}

/// Maximal λ(v,s)-out set containing `v` and not `s`.
pub fn latest_oracle(g: &Digraph, v: VertexId, s: VertexId) -> Result<CutSet, OracleError> {
    let mut net = Network::new(g)?;
    net.flow(v, s, usize::MAX);
    let reaches_sink = net.reachable(s, false);
    let members = g.vertices().filter(|&x| !reaches_sink[x]).collect();
    Ok(CutSet::measure(g, members))
}

/// Every vertex set containing `v`, avoiding `s`, with exactly `c` outgoing edges.
pub fn enumerate_separators(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    c: usize,
) -> Result<Vec<Vec<VertexId>>, OracleError> {
    let live: Vec<VertexId> = g.vertices().collect();
    if live.len() > ENUM_MAX_VERTICES {
        return Err(OracleError::TooManyToEnumerate(live.len()));
    }
    let free: Vec<VertexId> = live.iter().copied().filter(|&x| x != v && x != s).collect();
    let edges: Vec<(VertexId, VertexId)> = g.edges().map(|e| (g.tail(e), g.head(e))).collect();
    let mut inside = vec![false; g.vertex_bound()];
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        inside.iter_mut().for_each(|b| *b = false);
        inside[v] = true;
        for (i, &x) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside[x] = true;
            }
        }
        let cut = edges
            .iter()
            .filter(|&&(a, b)| inside[a] && !inside[b])
            .count();
        if cut == c {
            out.push(live.iter().copied().filter(|&x| inside[x]).collect());
        }
    }
    out.sort();
    Ok(out)
}

/// Outcome of checking a partition against oracle connectivity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionReport {
    /// c-connected ordinary pairs placed in different blocks.
    pub false_splits: Vec<(VertexId, VertexId)>,
    /// Ordinary pairs that are not c-connected but share a block.
    pub missed: Vec<(VertexId, VertexId)>,
}

impl PartitionReport {
    pub fn is_exact(&self) -> bool {
        self.false_splits.is_empty() && self.missed.is_empty()
    }
}

pub fn verify_partition(
    g: &Digraph,
    p: &Partition,
    c: usize,
    ordinary: &[VertexId],
) -> Result<PartitionReport, OracleError> {
    let truth = ecc_components(g, c)?;
    let mut report = PartitionReport::default();
    for (i, &u) in ordinary.iter().enumerate() {
        for &w in &ordinary[i + 1..] {
            let together = truth.same_block(u, w);
            let (a, b) = (u.min(w), u.max(w));
            if together && !p.same_block(u, w) {
                report.false_splits.push((a, b));
            } else if !together && p.same_block(u, w) {
                report.missed.push((a, b));
            }
        }
    }
    report.false_splits.sort_unstable();
    report.missed.sort_unstable();
    Ok(report)
}
