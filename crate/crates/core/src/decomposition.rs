//! (k+1)-edge-connected component decomposition of a k-edge-connected digraph.

use crate::digraph::{CutSet, Digraph, GraphError, VertexId, VertexKind};
use crate::flow::max_flow_bounded;
use crate::local_search::{ceil_log2, MSetResult, Searcher};
use crate::oracle::{all_pairs_lambda, ecc_components, OracleError};
use crate::rng::{child_seed, stream};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("graph has no ordinary vertex")]
    NoOrdinary,
    #[error("λ({v},{s}) = {lambda} is below k = {k}")]
    NotKConnected {
        v: VertexId,
        s: VertexId,
        lambda: usize,
        k: usize,
    },
    #[error("local search from {v} found no {k}-out set up to Δ = {delta}")]
    SearchExhausted { v: VertexId, k: usize, delta: usize },
    #[error("local search from {v} missed a set of volume {vol} at Δ = {delta}")]
    LateSuccess {
        v: VertexId,
        vol: usize,
        delta: usize,
    },
    #[error("set found from {v} has ordinary vertices {found:?}, expected {expected:?}")]
    ClassMismatch {
        v: VertexId,
        expected: Vec<VertexId>,
        found: Vec<VertexId>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Deterministic,
    Randomized,
}

/// Ordinary vertices sharing one minimal k-out set; `mu` is `None` when no
/// such set avoids the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderClass {
    pub members: Vec<VertexId>,
    pub mu: Option<CutSet>,
}

/// Classes sorted so that nested minimal sets come first; the root class is last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperOrder {
    pub classes: Vec<OrderClass>,
}

impl ProperOrder {
    /// True if no class comes after a class whose set it strictly contains.
    pub fn is_proper(&self) -> bool {
        let sets: Vec<Option<&CutSet>> = self.classes.iter().map(|c| c.mu.as_ref()).collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[..i] {
                match (a, b) {
                    (Some(a), Some(b))
                        if a.len() < b.len() && a.members.iter().all(|x| b.contains(*x)) =>
                    {
                        return false
                    }
                    (Some(_), None) => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// Groups ordinary vertices by their minimal k-out set avoiding `s`, using one
/// bounded flow per vertex.
pub fn proper_order(g: &Digraph, s: VertexId, k: usize) -> Result<ProperOrder, DecompError> {
    let ordinary: Vec<VertexId> = g
        .ordinary_vertices()
        .into_iter()
        .filter(|&v| v != s)
        .collect();
    let found: Vec<Result<Option<CutSet>, DecompError>> = ordinary
        .par_iter()
        .map(|&v| {
            let flow = max_flow_bounded(g, v, s, k + 1);
            if flow.value < k {
                Err(DecompError::NotKConnected {
                    v,
                    s,
                    lambda: flow.value,
                    k,
                })
            } else if flow.value == k {
                Ok(Some(flow.source_side()))
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut groups: HashMap<Vec<VertexId>, usize> = HashMap::new();
    let mut classes: Vec<OrderClass> = Vec::new();
    let mut bottom: Vec<VertexId> = Vec::new();
    if g.is_live(s) && g.is_ordinary(s) {
        bottom.push(s);
    }
    for (&v, r) in ordinary.iter().zip(found) {
        match r? {
            None => bottom.push(v),
            Some(set) => {
                let slot = *groups.entry(set.members.clone()).or_insert_with(|| {
                    classes.push(OrderClass {
                        members: Vec::new(),
                        mu: Some(set),
                    });
                    classes.len() - 1
                });
                classes[slot].members.push(v);
            }
        }
    }
    for c in classes.iter_mut() {
        c.members.sort_unstable();
    }
    classes.sort_by_key(|c| (c.mu.as_ref().map_or(0, |m| m.len()), c.members[0]));
    if !bottom.is_empty() {
        bottom.sort_unstable();
        classes.push(OrderClass {
            members: bottom,
            mu: None,
        });
    }
    Ok(ProperOrder { classes })
}

/// A graph whose k-out sets are contracted in place; absorbed vertices keep
/// pointing at their representative.
#[derive(Clone, Debug)]
pub struct EvolvingGraph {
    pub graph: Digraph,
}

impl EvolvingGraph {
    pub fn new(graph: Digraph) -> Self {
        Self { graph }
    }

    /// Contracts `set` (live vertices) into one k-out auxiliary vertex and
    /// returns it.
    pub fn contract(&mut self, set: &[VertexId]) -> Result<VertexId, GraphError> {
        let g = &mut self.graph;
        let inside = g.member_mask(set)?;
        let internal: Vec<_> = set
            .iter()
            .flat_map(|&u| g.out_edges(u).collect::<Vec<_>>())
            .filter(|&e| inside[g.head(e)])
            .collect();
        for e in internal {
            g.delete_edge(e)?;
        }
        let root = set[0];
        for &u in &set[1..] {
            g.absorb(u, root)?;
        }
        g.set_kind(root, VertexKind::AuxKOut);
        Ok(root)
    }

    /// Every original slot currently represented by a member of `set`.
    pub fn pull_back(&self, set: &[VertexId]) -> Vec<VertexId> {
        let inside = self.graph.member_mask(set).unwrap_or_default();
        (0..self.graph.vertex_bound())
            .filter(|&v| {
                inside
                    .get(self.graph.representative(v))
                    .copied()
                    .unwrap_or(false)
            })
            .collect()
    }
}

/// One graph of the decomposition.
#[derive(Clone, Debug)]
pub struct DecompPiece {
    pub graph: Digraph,
    /// Original vertex of each ordinary local vertex.
    pub origin: Vec<Option<VertexId>>,
    /// Original ids of the ordinary vertices, ascending.
    pub ordinary: Vec<VertexId>,
    /// Index of the first-phase piece and of the class within it.
    pub provenance: (usize, usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecompStats {
    pub classes: usize,
    pub probes: usize,
    pub first_phase_pieces: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<DecompPiece>,
    pub stats: DecompStats,
}

struct RawPiece {
    graph: Digraph,
    origin: Vec<Option<VertexId>>,
    start: Option<VertexId>,
}

struct PhaseConfig {
    k: usize,
    mode: SearchMode,
    repeats: usize,
    seed: u64,
}

fn probe(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    cfg: &PhaseConfig,
    index: u64,
    stats: &mut DecompStats,
) -> Result<CutSet, DecompError> {
    let mut searcher = Searcher::new(g);
    let mut rng = stream(cfg.seed, "decomp/probe", index);
    let cap = 2 * g.m_live().max(1);
    let mut delta = 1usize;
    loop {
        stats.probes += 1;
        let r = match cfg.mode {
            SearchMode::Deterministic => searcher.local_search(v, s, cfg.k, delta),
            SearchMode::Randomized => searcher.repeated(v, s, cfg.k, delta, cfg.repeats, &mut rng),
        };
        if let MSetResult::Found(set) = r {
            if delta > 1 && set.vol <= delta / 2 {
                return Err(DecompError::LateSuccess {
                    v,
                    vol: set.vol,
                    delta,
                });
            }
            return Ok(set);
        }
        if delta >= cap {
            return Err(DecompError::SearchExhausted { v, k: cfg.k, delta });
        }
        delta *= 2;
    }
}

/// Processes the classes of `g` (root `s`) in proper order, cutting off one
/// auxiliary graph per class and leaving the rest as the final piece.
fn run_phase(
    g: &Digraph,
    s: VertexId,
    cfg: &PhaseConfig,
    stats: &mut DecompStats,
) -> Result<Vec<RawPiece>, DecompError> {
    let order = proper_order(g, s, cfg.k)?;
    let mut evolving = EvolvingGraph::new(g.clone());
    let mut out = Vec::new();
    for (i, class) in order.classes.iter().enumerate() {
        if class.mu.is_none() {
            continue;
        }
        stats.classes += 1;
        let v = class.members[0];
        let set = probe(&evolving.graph, v, s, cfg, i as u64, stats)?;
        let found: Vec<VertexId> = set
            .members
            .iter()
            .copied()
            .filter(|&x| evolving.graph.is_ordinary(x))
            .collect();
        if found != class.members {
            return Err(DecompError::ClassMismatch {
                v,
                expected: class.members.clone(),
                found,
            });
        }
        let reduced = evolving
            .graph
            .contract_complement_reduced(&set.members, cfg.k)?;
        let origin = reduced
            .parent
            .iter()
            .map(|&p| evolving.graph.is_ordinary(p).then_some(p))
            .chain(std::iter::once(None))
            .collect();
        out.push(RawPiece {
            graph: reduced.graph,
            origin,
            start: Some(reduced.aux),
        });
        evolving.contract(&set.members)?;
    }
    let (rest, map) = evolving.graph.compact();
    let mut origin = vec![None; rest.vertex_bound()];
    for v in evolving.graph.vertices() {
        if evolving.graph.is_ordinary(v) {
            origin[map[v].expect("live vertex is mapped")] = Some(v);
        }
    }
    let start = map.get(s).copied().flatten();
    if origin.iter().any(Option::is_some) {
        out.push(RawPiece {
            graph: rest,
            origin,
            start,
        });
    }
    Ok(out)
}

/// Builds the (k+1)-ECC decomposition with the smallest ordinary vertex as root.
pub fn decompose_kecc(
    g: &Digraph,
    k: usize,
    delta: f64,
    mode: SearchMode,
    seed: u64,
) -> Result<Decomposition, DecompError> {
    let s = g
        .ordinary_vertices()
        .first()
        .copied()
        .ok_or(DecompError::NoOrdinary)?;
    decompose_kecc_from(g, s, k, delta, mode, seed)
}

pub fn decompose_kecc_from(
    g: &Digraph,
    s: VertexId,
    k: usize,
    delta: f64,
    mode: SearchMode,
    seed: u64,
) -> Result<Decomposition, DecompError> {
    if g.ordinary_vertices().is_empty() {
        return Err(DecompError::NoOrdinary);
    }
    let n = g.n_live().max(1) as f64;
    let repeats = ceil_log2(2.0 * n / delta).max(1);
    let mut stats = DecompStats::default();
    let first_cfg = PhaseConfig {
        k,
        mode,
        repeats,
        seed: child_seed(seed, "decomp/first", 0),
    };
    let first = run_phase(g, s, &first_cfg, &mut stats)?;
    stats.first_phase_pieces = first.len();

    let second: Vec<Result<(Vec<DecompPiece>, DecompStats), DecompError>> = first
        .into_par_iter()
        .enumerate()
        .map(|(i, piece)| {
            let mut local = DecompStats::default();
            let cfg = PhaseConfig {
                k,
                mode,
                repeats,
                seed: child_seed(seed, "decomp/second", i as u64),
            };
            let rev = piece.graph.reversed();
            let start = piece.start.expect("first-phase pieces keep a root");
            let subs = run_phase(&rev, start, &cfg, &mut local)?;
            let pieces = subs
                .into_iter()
                .enumerate()
                .map(|(j, sub)| {
                    let origin: Vec<Option<VertexId>> = sub
                        .origin
                        .iter()
                        .map(|o| o.and_then(|x| piece.origin[x]))
                        .collect();
                    let mut ordinary: Vec<VertexId> = origin.iter().flatten().copied().collect();
                    ordinary.sort_unstable();
                    DecompPiece {
                        graph: sub.graph.reversed(),
                        origin,
                        ordinary,
                        provenance: (i, j),
                    }
                })
                .collect();
            Ok((pieces, local))
        })
        .collect();
    let mut pieces = Vec::new();
    for r in second {
        let (p, local) = r?;
        stats.classes += local.classes;
        stats.probes += local.probes;
        pieces.extend(p);
    }
    Ok(Decomposition { pieces, stats })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bullet {
    Kinds,
    KConnected,
    OrdinaryConnected,
    ExactlyOnce,
    Preservation,
    AuxIsolated,
    VertexGate,
    EdgeGate,
}

impl fmt::Display for Bullet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Bullet::Kinds => "ordinary/auxiliary labelling",
            Bullet::KConnected => "piece is k-edge-connected",
            Bullet::OrdinaryConnected => "ordinary vertices (k+1)-edge-connected",
            Bullet::ExactlyOnce => "each vertex ordinary exactly once",
            Bullet::Preservation => "(k+2)-connectivity preserved",
            Bullet::AuxIsolated => "auxiliary vertices not (k+1)-connected",
            Bullet::VertexGate => "total vertices within 5n",
            Bullet::EdgeGate => "total edges within 4(m+kn)",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub bullet: Bullet,
    pub piece: Option<usize>,
    pub pair: Option<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompReport {
    pub violations: Vec<Violation>,
    pub total_vertices: usize,
    pub total_edges: usize,
    pub vertex_gate: usize,
    pub edge_gate: usize,
}

impl DecompReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn first_pair<F: Fn(VertexId, VertexId) -> bool>(
    verts: &[VertexId],
    bad: F,
) -> Option<(VertexId, VertexId)> {
    for (i, &u) in verts.iter().enumerate() {
        for &w in &verts[i + 1..] {
            if bad(u, w) {
                return Some((u, w));
            }
        }
    }
    None
}

/// Checks every decomposition guarantee with the brute-force oracle.
pub fn verify_decomposition(
    g: &Digraph,
    pieces: &[DecompPiece],
    k: usize,
) -> Result<DecompReport, OracleError> {
    let n = g.n_live();
    let m = g.m_live();
    let mut report = DecompReport {
        total_vertices: pieces.iter().map(|p| p.graph.n_live()).sum(),
        total_edges: pieces.iter().map(|p| p.graph.m_live()).sum(),
        vertex_gate: 5 * n,
        edge_gate: 4 * (m + k * n),
        ..Default::default()
    };
    let mut push = |bullet, piece, pair| {
        report.violations.push(Violation {
            bullet,
            piece,
            pair,
        })
    };
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_bound()];
    let mut label = vec![usize::MAX; g.vertex_bound()];
    let mut next_label = 0;
    for (i, p) in pieces.iter().enumerate() {
        let h = &p.graph;
        let local_ord: Vec<VertexId> = h.vertices().filter(|&x| h.is_ordinary(x)).collect();
        let mapped: Vec<VertexId> = {
            let mut v: Vec<VertexId> = local_ord
                .iter()
                .filter_map(|&x| p.origin.get(x).copied().flatten())
                .collect();
            v.sort_unstable();
            v
        };
        let aux_with_origin = h
            .vertices()
            .any(|x| !h.is_ordinary(x) && p.origin.get(x).copied().flatten().is_some());
        if mapped.len() != local_ord.len() || mapped != p.ordinary || aux_with_origin {
            push(Bullet::Kinds, Some(i), None);
        }
        let lam = all_pairs_lambda(h, k + 2)?;
        let live: Vec<VertexId> = h.vertices().collect();
        if let Some(pair) = first_pair(&live, |u, w| lam[u][w] < k || lam[w][u] < k) {
            push(Bullet::KConnected, Some(i), Some(pair));
        }
        if let Some(pair) = first_pair(&local_ord, |u, w| lam[u][w] < k + 1 || lam[w][u] < k + 1) {
            push(Bullet::OrdinaryConnected, Some(i), Some(pair));
        }
        for &x in &live {
            if h.is_ordinary(x) {
                continue;
            }
            if let Some(&y) = live
                .iter()
                .find(|&&y| y != x && lam[x][y] > k && lam[y][x] > k)
            {
                push(Bullet::AuxIsolated, Some(i), Some((x.min(y), x.max(y))));
            }
        }
        for &x in &local_ord {
            if let Some(v) = p.origin[x] {
                if v >= owner.len() || owner[v].is_some() {
                    push(Bullet::ExactlyOnce, Some(i), Some((v, v)));
                } else {
                    owner[v] = Some(i);
                }
            }
        }
        let local = ecc_components(h, k + 2)?;
        let mut ids: HashMap<usize, usize> = HashMap::new();
        for &x in &local_ord {
            if let Some(v) = p.origin[x] {
                if v < label.len() {
                    label[v] = *ids.entry(local.block_of(x)).or_insert_with(|| {
                        next_label += 1;
                        next_label - 1
                    });
                }
            }
        }
    }
    for v in g.vertices() {
        if owner[v].is_none() {
            push(Bullet::ExactlyOnce, None, Some((v, v)));
        }
    }
    let truth = ecc_components(g, k + 2)?;
    let verts: Vec<VertexId> = g.vertices().collect();
    let together = |u: VertexId, w: VertexId| label[u] != usize::MAX && label[u] == label[w];
    if let Some(pair) = first_pair(&verts, |u, w| truth.same_block(u, w) != together(u, w)) {
        push(Bullet::Preservation, None, Some(pair));
    }
    if report.total_vertices > report.vertex_gate {
        report.violations.push(Violation {
            bullet: Bullet::VertexGate,
            piece: None,
            pair: None,
        });
    }
    if report.total_edges > report.edge_gate {
        report.violations.push(Violation {
            bullet: Bullet::EdgeGate,
            piece: None,
            pair: None,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn det(g: &Digraph, k: usize) -> Decomposition {
        decompose_kecc(g, k, 0.1, SearchMode::Deterministic, 1).unwrap()
    }

    #[test]
    fn order_examples() {
        let o = proper_order(&gen::kn(6), 0, 3).unwrap();
        assert_eq!(o.classes.len(), 1);
        assert!(o.classes[0].mu.is_none());
        let o = proper_order(&gen::blocks(5, 5, 2), 1, 2).unwrap();
        assert_eq!(o.classes.len(), 2);
        assert_eq!(o.classes[0].members, vec![5, 6, 7, 8, 9]);
        assert_eq!(o.classes[1].members, vec![0, 1, 2, 3, 4]);
        let o = proper_order(&gen::cyc(5, 2), 0, 2).unwrap();
        assert_eq!(o.classes.len(), 5);
        assert!(o.classes[..4]
            .iter()
            .all(|c| c.mu.as_ref().unwrap().len() == 1));
        assert!(o.is_proper());
        assert!(matches!(
            proper_order(&gen::cyc(4, 1), 0, 2),
            Err(DecompError::NotKConnected { .. })
        ));
    }

    #[test]
    fn complete_graph_is_one_piece() {
        let d = det(&gen::kn(6), 3);
        assert_eq!(d.pieces.len(), 1);
        assert_eq!(d.pieces[0].ordinary, (0..6).collect::<Vec<_>>());
        assert_eq!(d.pieces[0].graph.n_live(), 6);
    }

    #[test]
    fn blocks_split_in_two() {
        let g = gen::blocks(5, 5, 2);
        let d = det(&g, 2);
        let mut ords: Vec<_> = d.pieces.iter().map(|p| p.ordinary.clone()).collect();
        ords.sort();
        assert_eq!(ords, vec![(0..5).collect::<Vec<_>>(), (5..10).collect()]);
        let r = verify_decomposition(&g, &d.pieces, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn corrupted_piece_is_reported() {
        let g = gen::blocks(5, 5, 2);
        let mut d = det(&g, 2);
        let p = &mut d.pieces[0];
        let x = p.origin.iter().position(Option::is_some).unwrap();
        p.graph.set_kind(x, VertexKind::AuxOther);
        let gone = p.origin[x].take().unwrap();
        p.ordinary.retain(|&v| v != gone);
        let r = verify_decomposition(&g, &d.pieces, 2).unwrap();
        assert!(!r.passed());
        assert!(r
            .violations
            .iter()
            .any(|v| v.bullet == Bullet::ExactlyOnce && v.pair == Some((gone, gone))));
    }

    #[test]
    fn cycle_gates() {
        let g = gen::cyc(50, 2);
        let d = det(&g, 2);
        assert_eq!(d.pieces.len(), 50);
        let r = verify_decomposition(&g, &d.pieces, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.total_vertices <= r.vertex_gate && r.total_edges <= r.edge_gate);
    }

    #[test]
    fn randomized_matches_on_blocks() {
        let g = gen::blocks(6, 6, 2);
        let d = decompose_kecc(&g, 2, 0.1, SearchMode::Randomized, 9).unwrap();
        assert!(verify_decomposition(&g, &d.pieces, 2).unwrap().passed());
    }

    #[test]
    fn evolving_pull_back() {
        let mut e = EvolvingGraph::new(gen::blocks(4, 4, 2));
        let r = e.contract(&[4, 5, 6, 7]).unwrap();
        assert_eq!(e.graph.out_degree(r), 2);
        assert_eq!(e.pull_back(&[r]), vec![4, 5, 6, 7]);
        e.graph.check_invariants().unwrap();
    }
}
