//! Bounded augmenting paths, minimal/latest mincuts and the Picard–Queyranne graph.

use crate::digraph::{ArcView, CutSet, Digraph, Dir, EdgeId, VertexId, NIL};
use crate::overlay::ReversalOverlay;
use crate::scc::strongly_connected;

/// Reusable visit marks and BFS buffers sized to a vertex table.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    stamp: Vec<u32>,
    epoch: u32,
    pub(crate) parent: Vec<u32>,
    pub(crate) queue: Vec<VertexId>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n],
            epoch: 0,
            parent: vec![NIL; n],
            queue: Vec::new(),
        }
    }

    /// Starts a new traversal; every vertex becomes unseen.
    pub fn begin(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.parent.resize(n, NIL);
        }
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.queue.clear();
    }

    #[inline]
    pub fn seen(&self, v: VertexId) -> bool {
        self.stamp[v] == self.epoch
    }

    /// Marks `v`; returns false if it was already marked.
    #[inline]
    pub fn mark(&mut self, v: VertexId) -> bool {
        if self.stamp[v] == self.epoch {
            false
        } else {
            self.stamp[v] = self.epoch;
            true
        }
    }
}

/// BFS over forward arcs from `from`; returns the tree path to `to` if reached.
pub(crate) fn bfs_path(
    ov: &ReversalOverlay,
    sc: &mut Scratch,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<EdgeId>> {
    sc.begin(ov.base().vertex_bound());
    sc.mark(from);
    sc.queue.push(from);
    let mut i = 0;
    while i < sc.queue.len() {
        let x = sc.queue[i];
        i += 1;
        let mut c = ov.cursor(x, Dir::Forward);
        while let Some((e, y)) = ov.advance(&mut c) {
            if sc.mark(y) {
                sc.parent[y] = e as u32;
                if y == to {
                    return Some(tree_path(ov, sc, from, to));
                }
                sc.queue.push(y);
            }
        }
    }
    None
}

/// Follows parent edges back from `to`.
pub(crate) fn tree_path(
    ov: &ReversalOverlay,
    sc: &Scratch,
    from: VertexId,
    to: VertexId,
) -> Vec<EdgeId> {
    let mut path = Vec::new();
    let mut y = to;
    while y != from {
        let e = sc.parent[y] as EdgeId;
        path.push(e);
        y = ov.tail(e);
    }
    path.reverse();
    path
}

/// Pushes up to `cap` unit augmenting paths from `source` to `sink`,
/// leaving them reversed in `ov`. Returns how many were found.
pub fn augment(
    ov: &mut ReversalOverlay,
    sc: &mut Scratch,
    source: VertexId,
    sink: VertexId,
    cap: usize,
) -> usize {
    let mut value = 0;
    while value < cap {
        match bfs_path(ov, sc, source, sink) {
            Some(p) => {
                for e in p {
                    ov.flip(e);
                }
                value += 1;
            }
            None => break,
        }
    }
    value
}

/// Vertices reachable from `start` (along `dir`) in the view.
pub fn reach<A: ArcView>(view: &A, sc: &mut Scratch, start: VertexId, dir: Dir) -> Vec<VertexId> {
    sc.begin(view.graph().vertex_bound());
    sc.mark(start);
    sc.queue.push(start);
    let mut i = 0;
    while i < sc.queue.len() {
        let x = sc.queue[i];
        i += 1;
        let mut c = view.cursor(x, dir);
        while let Some((_, y)) = view.advance(&mut c) {
            if sc.mark(y) {
                sc.queue.push(y);
            }
        }
    }
    sc.queue.clone()
}

/// A unit-capacity flow held as reversed paths in an overlay.
#[derive(Clone, Debug)]
pub struct FlowState<'g> {
    pub overlay: ReversalOverlay<'g>,
    pub value: usize,
    pub source: VertexId,
    pub sink: VertexId,
}

impl<'g> FlowState<'g> {
    /// Vertices still reachable from the source: the minimal cut side once the
    /// flow is maximum.
    pub fn source_side(&self) -> CutSet {
        let mut sc = Scratch::new(self.overlay.base().vertex_bound());
        let members = reach(&self.overlay, &mut sc, self.source, Dir::Forward);
        CutSet::measure(self.overlay.base(), members)
    }

    /// Vertices that cannot reach the sink: the latest cut once the flow is maximum.
    pub fn sink_complement(&self) -> CutSet {
        let g = self.overlay.base();
        let mut sc = Scratch::new(g.vertex_bound());
        reach(&self.overlay, &mut sc, self.sink, Dir::Backward);
        let members = g.vertices().filter(|&v| !sc.seen(v)).collect();
        CutSet::measure(g, members)
    }

    pub fn pq_graph(&self) -> PQGraph {
        PQGraph::from_residual(&self.overlay)
    }
}

/// `min(λ(u, v), cap)`.
pub fn lambda_bounded(g: &Digraph, u: VertexId, v: VertexId, cap: usize) -> usize {
    max_flow_bounded(g, u, v, cap).value
}

pub fn max_flow_bounded(
    g: &Digraph,
    source: VertexId,
    sink: VertexId,
    cap: usize,
) -> FlowState<'_> {
    let mut overlay = ReversalOverlay::new(g);
    let mut sc = Scratch::new(g.vertex_bound());
    let value = augment(&mut overlay, &mut sc, source, sink, cap);
    FlowState {
        overlay,
        value,
        source,
        sink,
    }
}

pub fn max_flow(g: &Digraph, source: VertexId, sink: VertexId) -> FlowState<'_> {
    max_flow_bounded(g, source, sink, usize::MAX)
}

/// Inclusion-wise minimum λ(v,s)-out set containing `v` and not `s`.
pub fn minimal_mincut_side(g: &Digraph, v: VertexId, s: VertexId) -> CutSet {
    max_flow(g, v, s).source_side()
}

/// Inclusion-wise maximum λ(v,s)-out set containing `v` and not `s`.
pub fn latest_mincut(g: &Digraph, v: VertexId, s: VertexId) -> CutSet {
    max_flow(g, v, s).sink_complement()
}

pub fn pq_graph(g: &Digraph, v: VertexId, s: VertexId) -> PQGraph {
    max_flow(g, v, s).pq_graph()
}

/// Residual graph of a maximum flow: each unit edge contributes its forward
/// copy if unused and its backward copy if saturated.
#[derive(Clone, Debug)]
pub struct PQGraph {
    /// `(tail, head, base edge)` for every arc.
    pub arcs: Vec<(VertexId, VertexId, EdgeId)>,
    /// Component id per vertex slot; `usize::MAX` for dead slots.
    pub scc: Vec<usize>,
    pub components: usize,
    /// Condensation edges, deduplicated, as `(from, to)` component pairs.
    pub dag: Vec<(usize, usize)>,
}

impl PQGraph {
    pub fn from_residual(ov: &ReversalOverlay) -> PQGraph {
        let g = ov.base();
        let arcs: Vec<_> = g.edges().map(|e| (ov.tail(e), ov.head(e), e)).collect();
        let (scc, components) = strongly_connected(ov);
        let mut dag: Vec<(usize, usize)> = arcs
            .iter()
            .map(|&(x, y, _)| (scc[x], scc[y]))
            .filter(|(a, b)| a != b)
            .collect();
        dag.sort_unstable();
        dag.dedup();
        PQGraph {
            arcs,
            scc,
            components,
            dag,
        }
    }

    /// Whether `inside` (a vertex mask) has no arc leaving it.
    pub fn is_closed(&self, inside: &[bool]) -> bool {
        self.arcs.iter().all(|&(x, y, _)| !inside[x] || inside[y])
    }

    /// Components with no incoming condensation edge.
    pub fn dag_sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.components];
        for &(_, b) in &self.dag {
            has_in[b] = true;
        }
        (0..self.components).filter(|&c| !has_in[c]).collect()
    }

    /// Components with no outgoing condensation edge.
    pub fn dag_sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.components];
        for &(a, _) in &self.dag {
            has_out[a] = true;
        }
        (0..self.components).filter(|&c| !has_out[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_bounded(&gen::cyc(4, 2), 1, 0, 5), 2);
        assert_eq!(lambda_bounded(&gen::kn(4), 0, 3, 10), 3);
        assert_eq!(lambda_bounded(&gen::kn(4), 0, 3, 2), 2);
        assert_eq!(lambda_bounded(&gen::blocks(5, 5, 2), 1, 6, 4), 2);
    }

    #[test]
    fn flow_state_bookkeeping() {
        let g = gen::kn(5);
        let f = max_flow_bounded(&g, 0, 4, 10);
        assert_eq!(f.value, 4);
        // One direct edge plus three two-edge paths.
        assert_eq!(f.overlay.journal().len(), 7);
    }

    #[test]
    fn minimal_sides() {
        assert_eq!(minimal_mincut_side(&gen::cyc(4, 1), 1, 0).members, vec![1]);
        assert_eq!(minimal_mincut_side(&gen::cyc(4, 3), 2, 0).members, vec![2]);
        let b = minimal_mincut_side(&gen::blocks(5, 5, 2), 6, 1);
        assert_eq!(b.members, (5..10).collect::<Vec<_>>());
        assert_eq!((b.out_count, b.vol), (2, 22));
    }

    #[test]
    fn latest_sides() {
        assert_eq!(latest_mincut(&gen::cyc(4, 1), 1, 0).members, vec![1, 2, 3]);
        assert_eq!(
            latest_mincut(&gen::blocks(5, 5, 2), 6, 1).members,
            (5..10).collect::<Vec<_>>()
        );
    }

    #[test]
    fn pq_on_cycle() {
        let g = gen::cyc(4, 1);
        let pq = pq_graph(&g, 1, 0);
        let mut arcs: Vec<_> = pq.arcs.iter().map(|&(x, y, _)| (x, y)).collect();
        arcs.sort_unstable();
        assert_eq!(arcs, vec![(0, 1), (0, 3), (2, 1), (3, 2)]);
        assert_eq!(pq.components, 4);
        assert_eq!(pq.dag_sources(), vec![pq.scc[0]]);
        assert_eq!(pq.dag_sinks(), vec![pq.scc[1]]);
    }

    #[test]
    fn saturated_edge_only_backward() {
        let mut g = Digraph::with_vertices(2);
        g.add_edge(0, 1, 1).unwrap();
        g.add_edge(1, 0, 1).unwrap();
        let pq = pq_graph(&g, 0, 1);
        let arcs: Vec<_> = pq.arcs.iter().map(|&(x, y, e)| (x, y, e)).collect();
        assert_eq!(arcs, vec![(1, 0, 0), (1, 0, 1)]);
    }
}
