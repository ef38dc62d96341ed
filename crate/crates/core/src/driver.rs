//! End-to-end computation of (k+2)-edge-connected components.

use crate::decomposition::{decompose_kecc_from, DecompError, SearchMode};
use crate::digraph::{Digraph, EdgeId, VertexId, VertexKind};
use crate::flow::lambda_bounded;
use crate::good_partition::{
    ecc_naive, good_partition_deficient, good_partition_full, good_partition_low,
    GoodPartitionError,
};
use crate::local_search::{ceil_log2, MSetResult, SearchStats, Searcher};
use crate::partition::{partition_from_msets, refine, refine_many, Partition};
use crate::rng::{child_seed, stream};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DriverError {
    #[error("graph has no ordinary vertex")]
    NoOrdinary,
    #[error("root {0} is not a live ordinary vertex")]
    BadRoot(VertexId),
    #[error("λ({v},{s}) = {lambda}, below the required {need}")]
    LambdaBelow {
        v: VertexId,
        s: VertexId,
        lambda: usize,
        need: usize,
    },
    #[error("delta must lie in (0,1), got {0}")]
    BadDelta(f64),
    #[error(transparent)]
    Good(#[from] GoodPartitionError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Det,
    Rand,
    Exact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Det => "det",
            Mode::Rand => "rand",
            Mode::Exact => "exact",
        }
    }

    fn search(self) -> SearchMode {
        match self {
            Mode::Rand => SearchMode::Randomized,
            _ => SearchMode::Deterministic,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "det" => Ok(Mode::Det),
            "rand" => Ok(Mode::Rand),
            "exact" => Ok(Mode::Exact),
            other => Err(format!("unknown mode `{other}` (det|rand|exact)")),
        }
    }
}

/// Number of sampled edges per direction for `n` ordinary vertices.
pub fn expected_draws(n: usize, delta: f64, mode: Mode) -> usize {
    let n = n as f64;
    match mode {
        Mode::Exact => 0,
        Mode::Det => (n.sqrt() * (2.0 * n / delta).log2()).ceil() as usize,
        Mode::Rand => (n.sqrt() * (4.0 * n / delta).log2()).ceil() as usize,
    }
}

/// Volume bound for the small-set searches.
pub fn search_volume(m: usize, n: usize, mode: Mode) -> usize {
    match mode {
        Mode::Exact => m,
        _ => ((m as f64 / (n as f64).sqrt()).floor() as usize).max(1),
    }
}

/// Work counters for one direction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirectionStats {
    pub small_found: usize,
    pub draws: usize,
    pub distinct_tails: usize,
    pub full: usize,
    pub deficient: usize,
    pub low: usize,
    pub skipped: usize,
    pub search: SearchStats,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingleStats {
    pub ordinary: usize,
    pub delta: f64,
    pub volume: usize,
    pub forward: DirectionStats,
    pub backward: DirectionStats,
}

impl SingleStats {
    pub fn draws(&self) -> usize {
        self.forward.draws + self.backward.draws
    }
}

/// Result of the main algorithm on one prepared graph, with the partial
/// partitions kept for inspection (forward first).
#[derive(Clone, Debug)]
pub struct SingleOutcome {
    pub partition: Partition,
    pub small: [Partition; 2],
    pub sampled: [Partition; 2],
    pub stats: SingleStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lower {
    Deficient,
    Low,
}

/// Options for [`compute_partition_single`].
#[derive(Clone, Copy, Debug)]
pub struct SingleConfig {
    pub k: usize,
    pub delta: f64,
    pub mode: Mode,
    pub seed: u64,
    pub root: Option<VertexId>,
}

impl SingleConfig {
    pub fn new(k: usize, delta: f64, mode: Mode, seed: u64) -> Self {
        Self {
            k,
            delta,
            mode,
            seed,
            root: None,
        }
    }
}

fn check_delta(delta: f64) -> Result<(), DriverError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(DriverError::BadDelta(delta))
    }
}

fn pick_root(h: &Digraph, root: Option<VertexId>) -> Result<VertexId, DriverError> {
    match root {
        Some(s) if s < h.vertex_bound() && h.is_live(s) && h.is_ordinary(s) => Ok(s),
        Some(s) => Err(DriverError::BadRoot(s)),
        None => h
            .ordinary_vertices()
            .first()
            .copied()
            .ok_or(DriverError::NoOrdinary),
    }
}

/// Partition of the vertex slots of `h` that keeps (k+2)-edge-connected
/// ordinary vertices together; ordinary vertices of `h` must be
/// (k+1)-edge-connected.
pub fn compute_partition_single(
    h: &Digraph,
    cfg: &SingleConfig,
) -> Result<SingleOutcome, DriverError> {
    single(h, cfg, Lower::Deficient)
}

fn single(h: &Digraph, cfg: &SingleConfig, lower: Lower) -> Result<SingleOutcome, DriverError> {
    check_delta(cfg.delta)?;
    let s = pick_root(h, cfg.root)?;
    let n = h.ordinary_vertices().len();
    let volume = search_volume(h.m_live(), n, cfg.mode);
    let rev = h.reversed();
    let (sf, pf, df) = direction(h, s, cfg, lower, n, volume, 0)?;
    let (sb, pb, db) = direction(&rev, s, cfg, lower, n, volume, 1)?;
    let partition = refine_many(h.vertex_bound(), [&sf, &pf, &sb, &pb]).expect("same universe");
    Ok(SingleOutcome {
        partition,
        small: [sf, sb],
        sampled: [pf, pb],
        stats: SingleStats {
            ordinary: n,
            delta: cfg.delta,
            volume,
            forward: df,
            backward: db,
        },
    })
}

fn direction(
    g: &Digraph,
    s: VertexId,
    cfg: &SingleConfig,
    lower: Lower,
    n: usize,
    volume: usize,
    dir: u64,
) -> Result<(Partition, Partition, DirectionStats), DriverError> {
    let k = cfg.k;
    let mut stats = DirectionStats::default();
    let seed = child_seed(cfg.seed, "driver/direction", dir);
    let reps = ceil_log2(4.0 * n as f64 / cfg.delta).max(1);
    let targets: Vec<VertexId> = g
        .ordinary_vertices()
        .into_iter()
        .filter(|&v| v != s)
        .collect();
    let found: Vec<(VertexId, MSetResult, SearchStats)> = targets
        .par_iter()
        .map_init(
            || Searcher::new(g),
            |searcher, &v| {
                let r = match cfg.mode {
                    Mode::Rand => {
                        let mut rng = stream(seed, "driver/search", v as u64);
                        searcher.repeated(v, s, k + 1, volume, reps, &mut rng)
                    }
                    _ => searcher.local_search(v, s, k + 1, volume),
                };
                (v, r, std::mem::take(&mut searcher.stats))
            },
        )
        .collect();
    let mut results = vec![MSetResult::Empty; g.vertex_bound()];
    for (v, r, st) in found {
        stats.search.merge(&st);
        stats.small_found += usize::from(r.is_found());
        results[v] = r;
    }
    let ordinary: Vec<bool> = (0..g.vertex_bound())
        .map(|v| g.is_live(v) && g.is_ordinary(v))
        .collect();
    let small = partition_from_msets(&ordinary, &results);

    stats.draws = expected_draws(n, cfg.delta, cfg.mode);
    let edges: Vec<EdgeId> = g.edges().collect();
    let mut tails: Vec<VertexId> = Vec::new();
    if !edges.is_empty() {
        let mut rng = stream(seed, "driver/sample", 0);
        let mut seen = vec![false; g.vertex_bound()];
        for _ in 0..stats.draws {
            let t = g.tail(edges[rng.random_range(0..edges.len())]);
            if !seen[t] {
                seen[t] = true;
                tails.push(t);
            }
        }
    }
    tails.retain(|&t| t != s);
    tails.sort_unstable();
    stats.distinct_tails = tails.len();
    let parts: Vec<Result<(Option<Partition>, usize), DriverError>> = tails
        .par_iter()
        .map(|&v| tail_partition(g, v, s, k, lower))
        .collect();
    let mut sampled = Partition::trivial(g.vertex_bound());
    for r in parts {
        let (p, kind) = r?;
        match kind {
            0 => stats.skipped += 1,
            1 => stats.full += 1,
            2 => stats.deficient += 1,
            _ => stats.low += 1,
        }
        if let Some(p) = p {
            sampled = refine(&sampled, &p).expect("same universe");
        }
    }
    Ok((small, sampled, stats))
}

/// Good partition for one sampled tail, tagged 0 skipped, 1 full, 2 deficient, 3 low.
fn tail_partition(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
    lower: Lower,
) -> Result<(Option<Partition>, usize), DriverError> {
    let lambda = lambda_bounded(g, v, s, k + 2);
    if lambda >= k + 2 {
        return Ok((None, 0));
    }
    if lambda == k + 1 {
        return Ok((Some(good_partition_full(g, v, s, k)?), 1));
    }
    match lower {
        Lower::Deficient if lambda == k => Ok((Some(good_partition_deficient(g, v, s, k)?), 2)),
        Lower::Low if lambda >= 1 => Ok((Some(good_partition_low(g, v, s)?), 3)),
        _ => Err(DriverError::LambdaBelow {
            v,
            s,
            lambda,
            need: k,
        }),
    }
}

/// Per-piece record of the full pipeline.
#[derive(Clone, Debug)]
pub struct PieceRun {
    pub ordinary: Vec<VertexId>,
    pub stats: SingleStats,
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub partition: Partition,
    pub pieces: Vec<PieceRun>,
}

impl PipelineOutcome {
    pub fn draws(&self) -> usize {
        self.pieces.iter().map(|p| p.stats.draws()).sum()
    }
}

/// (k+2)-edge-connected components of a k-edge-connected digraph.
pub fn compute_k2ecc(
    g: &Digraph,
    k: usize,
    delta: f64,
    mode: Mode,
    seed: u64,
) -> Result<PipelineOutcome, DriverError> {
    compute_k2ecc_from(g, None, k, delta, mode, seed)
}

pub fn compute_k2ecc_from(
    g: &Digraph,
    root: Option<VertexId>,
    k: usize,
    delta: f64,
    mode: Mode,
    seed: u64,
) -> Result<PipelineOutcome, DriverError> {
    check_delta(delta)?;
    let s = pick_root(g, root)?;
    let n = g.ordinary_vertices().len();
    let decomp = decompose_kecc_from(
        g,
        s,
        k,
        delta / 2.0,
        mode.search(),
        child_seed(seed, "pipeline/decomp", 0),
    )?;
    let piece_delta = delta / (2.0 * n as f64);
    let runs: Vec<Result<(Partition, PieceRun), DriverError>> = decomp
        .pieces
        .par_iter()
        .enumerate()
        .map(|(i, piece)| {
            let cfg = SingleConfig::new(
                k,
                piece_delta,
                mode,
                child_seed(seed, "pipeline/piece", i as u64),
            );
            let out = compute_partition_single(&piece.graph, &cfg)?;
            Ok((
                out.partition,
                PieceRun {
                    ordinary: piece.ordinary.clone(),
                    stats: out.stats,
                },
            ))
        })
        .collect();
    let mut labels: Vec<usize> = (0..g.vertex_bound()).map(|v| usize::MAX - v).collect();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pieces = Vec::with_capacity(runs.len());
    for (i, r) in runs.into_iter().enumerate() {
        let (p, run) = r?;
        for (x, o) in decomp.pieces[i].origin.iter().enumerate() {
            if let Some(v) = *o {
                let next = ids.len();
                labels[v] = *ids.entry((i, p.block_of(x))).or_insert(next);
            }
        }
        pieces.push(run);
    }
    Ok(PipelineOutcome {
        partition: Partition::from_labels(&labels),
        pieces,
    })
}

/// 4-edge-connected components of `h`, whose ordinary vertices are
/// 3-edge-connected; λ ≤ 2 tails use the low-connectivity good partition.
pub fn compute_4ecc_prepared(
    h: &Digraph,
    delta: f64,
    mode: Mode,
    seed: u64,
) -> Result<SingleOutcome, DriverError> {
    single(h, &SingleConfig::new(2, delta, mode, seed), Lower::Low)
}

/// One copy of `g` per 3-edge-connected class, with only that class ordinary.
pub fn prepare_3ecc(g: &Digraph) -> Vec<(Digraph, Vec<VertexId>)> {
    let classes = ecc_naive(g, 3);
    classes
        .restricted_blocks(&g.vertices().collect::<Vec<_>>())
        .into_iter()
        .map(|class| {
            let mut h = g.clone();
            for v in h.vertices().collect::<Vec<_>>() {
                h.set_kind(v, VertexKind::AuxOther);
            }
            for &v in &class {
                h.set_kind(v, VertexKind::Ordinary);
            }
            (h, class)
        })
        .collect()
}

/// 4-edge-connected components of a strongly connected digraph through
/// [`prepare_3ecc`] and [`compute_4ecc_prepared`].
pub fn compute_4ecc(
    g: &Digraph,
    delta: f64,
    mode: Mode,
    seed: u64,
) -> Result<Partition, DriverError> {
    let prepared = prepare_3ecc(g);
    let n = prepared.len().max(1) as f64;
    let runs: Vec<Result<Partition, DriverError>> =
        prepared
            .par_iter()
            .enumerate()
            .map(|(i, (h, _))| {
                Ok(compute_4ecc_prepared(
                    h,
                    delta / n,
                    mode,
                    child_seed(seed, "4ecc/class", i as u64),
                )?
                .partition)
            })
            .collect();
    let mut labels: Vec<usize> = (0..g.vertex_bound()).map(|v| usize::MAX - v).collect();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, r) in runs.into_iter().enumerate() {
        let p = r?;
        for &v in &prepared[i].1 {
            let next = ids.len();
            labels[v] = *ids.entry((i, p.block_of(v))).or_insert(next);
        }
    }
    Ok(Partition::from_labels(&labels))
}
