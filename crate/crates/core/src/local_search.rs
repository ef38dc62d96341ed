//! Local searches for minimal out-sets avoiding a fixed root.

use crate::digraph::{ArcView, Cursor, CutSet, Digraph, Dir, EdgeId, VertexId, NIL};
use crate::flow::{tree_path, Scratch};
use crate::overlay::ReversalOverlay;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MSetResult {
    Found(CutSet),
    /// The search gave up.
    Empty,
    /// No separator exists at all; only the oracle reports this.
    Bottom,
}

impl MSetResult {
    pub fn found(&self) -> Option<&CutSet> {
        match self {
            MSetResult::Found(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, MSetResult::Found(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub explored: usize,
    pub limit: usize,
}

/// Counters accumulated by a [`Searcher`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub path_calls: usize,
    pub path_overruns: usize,
    pub max_path_explored: usize,
    pub rounds: usize,
    pub round_overruns: usize,
    pub terminal_calls: usize,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.path_calls += other.path_calls;
        self.path_overruns += other.path_overruns;
        self.max_path_explored = self.max_path_explored.max(other.max_path_explored);
        self.rounds += other.rounds;
        self.round_overruns += other.round_overruns;
        self.terminal_calls += other.terminal_calls;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutPaths {
    /// The DFS reached the root; only the tree path to it is returned.
    ToSink(Vec<EdgeId>),
    Candidates(Vec<Vec<EdgeId>>),
}

impl OutPaths {
    pub fn into_paths(self) -> Vec<Vec<EdgeId>> {
        match self {
            OutPaths::ToSink(p) => vec![p],
            OutPaths::Candidates(ps) => ps,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    cursor: Cursor,
    parent: u32,
}

#[derive(Clone, Debug, Default)]
struct Dfs {
    stack: Vec<Frame>,
    finished: bool,
    explored: usize,
}

impl Dfs {
    fn start(&mut self, ov: &ReversalOverlay, sc: &mut Scratch, v: VertexId) {
        sc.begin(ov.base().vertex_bound());
        sc.mark(v);
        self.stack.clear();
        self.stack.push(Frame {
            cursor: ov.cursor(v, Dir::Forward),
            parent: NIL,
        });
        self.finished = false;
        self.explored = 0;
    }

    /// Explores up to `quota` arcs. Returns whether `s` was discovered and the
    /// smallest stack depth seen during the segment.
    fn run(
        &mut self,
        ov: &ReversalOverlay,
        sc: &mut Scratch,
        s: VertexId,
        quota: usize,
    ) -> (bool, usize) {
        let mut min_depth = self.stack.len() - 1;
        let mut left = quota;
        while left > 0 && !self.finished {
            let top = self.stack.last_mut().unwrap();
            match ov.advance(&mut top.cursor) {
                None => {
                    if self.stack.len() == 1 {
                        self.finished = true;
                        min_depth = 0;
                    } else {
                        self.stack.pop();
                        min_depth = min_depth.min(self.stack.len() - 1);
                    }
                }
                Some((e, y)) => {
                    left -= 1;
                    self.explored += 1;
                    if sc.mark(y) {
                        self.stack.push(Frame {
                            cursor: ov.cursor(y, Dir::Forward),
                            parent: e as u32,
                        });
                        if y == s {
                            return (true, min_depth);
                        }
                    }
                }
            }
        }
        (false, min_depth)
    }

    fn path_to_depth(&self, depth: usize) -> Vec<EdgeId> {
        self.stack[1..=depth]
            .iter()
            .map(|f| f.parent as EdgeId)
            .collect()
    }
}

/// Budgeted DFS that returns at most `2k` candidate paths from `v`, or the
/// single tree path to `s` if the DFS meets it.
pub fn find_out_paths(
    ov: &ReversalOverlay,
    v: VertexId,
    s: VertexId,
    k: usize,
    delta: usize,
) -> (OutPaths, SearchBudget) {
    let mut sc = Scratch::new(ov.base().vertex_bound());
    let mut dfs = Dfs::default();
    out_paths(ov, &mut sc, &mut dfs, v, s, k, delta)
}

fn out_paths(
    ov: &ReversalOverlay,
    sc: &mut Scratch,
    dfs: &mut Dfs,
    v: VertexId,
    s: VertexId,
    k: usize,
    delta: usize,
) -> (OutPaths, SearchBudget) {
    let quota = delta + 1;
    let limit = (2 * k + 1) * quota;
    dfs.start(ov, sc, v);
    let (hit, _) = dfs.run(ov, sc, s, quota);
    if hit {
        let path = dfs.path_to_depth(dfs.stack.len() - 1);
        return (
            OutPaths::ToSink(path),
            SearchBudget {
                explored: dfs.explored,
                limit,
            },
        );
    }
    let mut paths: Vec<Vec<EdgeId>> = Vec::new();
    for _ in 0..2 * k {
        let (hit, low) = dfs.run(ov, sc, s, quota);
        if hit {
            let path = dfs.path_to_depth(dfs.stack.len() - 1);
            return (
                OutPaths::ToSink(path),
                SearchBudget {
                    explored: dfs.explored,
                    limit,
                },
            );
        }
        let path = dfs.path_to_depth(low);
        if !paths.contains(&path) {
            paths.push(path);
        }
        if dfs.finished {
            break;
        }
    }
    (
        OutPaths::Candidates(paths),
        SearchBudget {
            explored: dfs.explored,
            limit,
        },
    )
}

/// Private overlay, scratch buffers and counters for repeated searches on one
/// frozen graph.
#[derive(Clone, Debug)]
pub struct Searcher<'g> {
    ov: ReversalOverlay<'g>,
    sc: Scratch,
    dfs: Dfs,
    explored: Vec<VertexId>,
    pub stats: SearchStats,
}

impl<'g> Searcher<'g> {
    pub fn new(g: &'g Digraph) -> Self {
        Self {
            ov: ReversalOverlay::new(g),
            sc: Scratch::new(g.vertex_bound()),
            dfs: Dfs::default(),
            explored: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    pub fn graph(&self) -> &'g Digraph {
        self.ov.base()
    }

    pub fn overlay(&self) -> &ReversalOverlay<'g> {
        &self.ov
    }

    /// Minimal `c`-out set containing `v` and not `s`, if its volume is at most
    /// `delta`; requires λ(v,s) ≥ c.
    pub fn local_search(&mut self, v: VertexId, s: VertexId, c: usize, delta: usize) -> MSetResult {
        let mark = self.ov.checkpoint();
        let found = self.descend(v, s, c, delta);
        self.ov.undo_to(mark);
        match found {
            Some(members) => MSetResult::Found(CutSet::measure(self.ov.base(), members)),
            None => MSetResult::Empty,
        }
    }

    fn descend(
        &mut self,
        v: VertexId,
        s: VertexId,
        level: usize,
        delta: usize,
    ) -> Option<Vec<VertexId>> {
        if level == 0 {
            return self.terminal(v, s, delta);
        }
        let (paths, budget) = out_paths(&self.ov, &mut self.sc, &mut self.dfs, v, s, level, delta);
        self.note_paths(budget);
        for path in paths.into_paths() {
            let mark = self.ov.checkpoint();
            for &e in &path {
                self.ov.flip(e);
            }
            let found = self.descend(v, s, level - 1, delta);
            self.ov.undo_to(mark);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn note_paths(&mut self, budget: SearchBudget) {
        self.stats.path_calls += 1;
        self.stats.max_path_explored = self.stats.max_path_explored.max(budget.explored);
        if budget.explored > budget.limit {
            self.stats.path_overruns += 1;
        }
    }

    /// Reach of `v` if it avoids `s` and at most `delta` arcs were explored.
    fn terminal(&mut self, v: VertexId, s: VertexId, delta: usize) -> Option<Vec<VertexId>> {
        self.stats.terminal_calls += 1;
        let ov = &self.ov;
        let sc = &mut self.sc;
        sc.begin(ov.base().vertex_bound());
        sc.mark(v);
        sc.queue.push(v);
        let mut explored = 0;
        let mut i = 0;
        while i < sc.queue.len() {
            let x = sc.queue[i];
            i += 1;
            let mut c = ov.cursor(x, Dir::Forward);
            while let Some((_, y)) = ov.advance(&mut c) {
                explored += 1;
                if explored > delta {
                    return None;
                }
                if sc.mark(y) {
                    if y == s {
                        return None;
                    }
                    sc.queue.push(y);
                }
            }
        }
        Some(sc.queue.clone())
    }

    /// One shot of the randomized search for the minimal `c`-out set; succeeds
    /// with probability at least 1/2 when λ(v,s) = c and the set has volume at
    /// most `delta`.
    pub fn randomized<R: Rng + ?Sized>(
        &mut self,
        v: VertexId,
        s: VertexId,
        c: usize,
        delta: usize,
        rng: &mut R,
    ) -> MSetResult {
        let mark = self.ov.checkpoint();
        let budget = 2 * c * delta;
        for _ in 0..c {
            self.stats.rounds += 1;
            let target = self.sampling_bfs(v, s, budget, rng);
            if let Some(t) = target {
                let path = tree_path(&self.ov, &self.sc, v, t);
                for e in path {
                    self.ov.flip(e);
                }
            }
        }
        let found = self.terminal(v, s, delta);
        self.ov.undo_to(mark);
        match found {
            Some(members) => MSetResult::Found(CutSet::measure(self.ov.base(), members)),
            None => MSetResult::Empty,
        }
    }

    /// BFS from `v` capped at `budget` explored arcs. Returns `s` if met,
    /// otherwise the tail of a uniformly sampled explored arc.
    fn sampling_bfs<R: Rng + ?Sized>(
        &mut self,
        v: VertexId,
        s: VertexId,
        budget: usize,
        rng: &mut R,
    ) -> Option<VertexId> {
        let ov = &self.ov;
        let sc = &mut self.sc;
        self.explored.clear();
        sc.begin(ov.base().vertex_bound());
        sc.mark(v);
        sc.queue.push(v);
        let mut i = 0;
        let mut hit = false;
        'bfs: while i < sc.queue.len() && self.explored.len() < budget {
            let x = sc.queue[i];
            i += 1;
            let mut cur = ov.cursor(x, Dir::Forward);
            while let Some((e, y)) = ov.advance(&mut cur) {
                self.explored.push(x);
                if sc.mark(y) {
                    sc.parent[y] = e as u32;
                    if y == s {
                        hit = true;
                        break 'bfs;
                    }
                    sc.queue.push(y);
                }
                if self.explored.len() == budget {
                    break 'bfs;
                }
            }
        }
        if self.explored.len() > budget {
            self.stats.round_overruns += 1;
        }
        if hit {
            Some(s)
        } else if self.explored.is_empty() {
            None
        } else {
            Some(self.explored[rng.random_range(0..self.explored.len())])
        }
    }

    /// First success among `reps` independent randomized shots.
    pub fn repeated<R: Rng + ?Sized>(
        &mut self,
        v: VertexId,
        s: VertexId,
        c: usize,
        delta: usize,
        reps: usize,
        rng: &mut R,
    ) -> MSetResult {
        for _ in 0..reps {
            let r = self.randomized(v, s, c, delta, rng);
            if r.is_found() {
                return r;
            }
        }
        MSetResult::Empty
    }

    /// Repeats the randomized search ⌈log₂(1/δ')⌉ times.
    pub fn amplified<R: Rng + ?Sized>(
        &mut self,
        v: VertexId,
        s: VertexId,
        c: usize,
        delta: usize,
        delta_prime: f64,
        rng: &mut R,
    ) -> MSetResult {
        self.repeated(v, s, c, delta, repetitions(delta_prime), rng)
    }
}

/// ⌈log₂ x⌉ for x ≥ 1, tolerant of rounding noise at exact powers of two.
pub fn ceil_log2(x: f64) -> usize {
    if x <= 1.0 {
        return 0;
    }
    (x.log2() - 1e-9).ceil().max(0.0) as usize
}

/// Repetitions needed to push a 1/2 failure rate down to `delta_prime`.
pub fn repetitions(delta_prime: f64) -> usize {
    ceil_log2(1.0 / delta_prime).max(1)
}

pub fn local_search_mset(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    c: usize,
    delta: usize,
) -> MSetResult {
    Searcher::new(g).local_search(v, s, c, delta)
}

pub fn randomized_local_search_mset<R: Rng + ?Sized>(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    c: usize,
    delta: usize,
    rng: &mut R,
) -> MSetResult {
    Searcher::new(g).randomized(v, s, c, delta, rng)
}

pub fn amplified_mset<R: Rng + ?Sized>(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    c: usize,
    delta: usize,
    delta_prime: f64,
    rng: &mut R,
) -> MSetResult {
    Searcher::new(g).amplified(v, s, c, delta, delta_prime, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::rng::stream;

    #[test]
    fn two_vertex_path() {
        let mut g = Digraph::with_vertices(2);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 0, 1).unwrap();
        let ov = ReversalOverlay::new(&g);
        let (p, b) = find_out_paths(&ov, 0, 1, 1, 1);
        assert_eq!(p, OutPaths::ToSink(vec![0]));
        assert!(b.explored <= b.limit);
    }

    #[test]
    fn k5_paths_leave_singleton() {
        let g = gen::kn(5);
        let ov = ReversalOverlay::new(&g);
        let (p, b) = find_out_paths(&ov, 0, 4, 4, 4);
        assert!(b.explored <= 9 * 5);
        let paths = p.into_paths();
        assert!(paths
            .iter()
            .any(|p| p.last().map(|&e| ov.head(e) != 0).unwrap_or(false)));
    }

    #[test]
    fn k5_local_search() {
        let g = gen::kn(5);
        let r = local_search_mset(&g, 1, 0, 4, 20);
        assert_eq!(r.found().unwrap().members, vec![1]);
        // Above the volume bound the search may still succeed, but only with M(v).
        match local_search_mset(&g, 1, 0, 4, 3) {
            MSetResult::Found(s) => assert_eq!(s.members, vec![1]),
            r => assert_eq!(r, MSetResult::Empty),
        }
        let b = gen::blocks(5, 5, 2);
        assert_eq!(local_search_mset(&b, 6, 0, 2, 1), MSetResult::Empty);
    }

    #[test]
    fn k4_has_no_two_out_set() {
        let g = gen::kn(4);
        for delta in [1, 4, 12, 100] {
            assert_eq!(local_search_mset(&g, 1, 0, 2, delta), MSetResult::Empty);
        }
    }

    #[test]
    fn randomized_on_cycle() {
        let g = gen::cyc(6, 2);
        let mut hits = 0;
        for t in 0..200 {
            let mut rng = stream(1, "test", t);
            if let MSetResult::Found(s) = randomized_local_search_mset(&g, 1, 0, 2, 12, &mut rng) {
                assert_eq!(s.members, vec![1]);
                hits += 1;
            }
        }
        assert!(hits >= 100);
    }

    #[test]
    fn repetition_counts() {
        assert_eq!(repetitions(0.5), 1);
        assert_eq!(repetitions(1.0 / 1024.0), 10);
        assert_eq!(repetitions(0.125), 3);
        assert_eq!(ceil_log2(400.0), 9);
    }

    #[test]
    fn searcher_restores_overlay() {
        let g = gen::blocks(5, 5, 2);
        let mut s = Searcher::new(&g);
        let r = s.local_search(6, 0, 2, 64);
        assert_eq!(r.found().unwrap().members, (5..10).collect::<Vec<_>>());
        assert!(s.overlay().journal().is_empty());
        let mut rng = stream(3, "t", 0);
        s.randomized(6, 0, 2, 64, &mut rng);
        assert!(s.overlay().journal().is_empty());
    }
}
