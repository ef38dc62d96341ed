//! Directed multigraph with per-vertex circular in/out edge rings.

use crate::dsu::DisjointSets;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

pub(crate) const NIL: u32 = u32::MAX;

/// Upper bound on the number of edges after multiplicity expansion.
pub const MAX_EDGES: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Ordinary,
    AuxKOut,
    AuxKIn,
    AuxOther,
}

impl VertexKind {
    pub fn is_ordinary(self) -> bool {
        self == VertexKind::Ordinary
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not live")]
    DeadVertex(VertexId),
    #[error("edge {0} is not live")]
    DeadEdge(EdgeId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge copies must be at least 1")]
    ZeroCopies,
    #[error("more than {0} edges")]
    TooManyEdges(usize),
    #[error("contracted set must be a nonempty proper subset of the live vertices")]
    BadContraction,
    #[error("set has {found} outgoing edges, expected {expected}")]
    OutDegreeMismatch { expected: usize, found: usize },
    #[error("path breaks at position {0}")]
    BrokenPath(usize),
}

/// Traversal direction relative to an arc: `Forward` lists arcs leaving a
/// vertex, `Backward` lists arcs entering it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

/// Resumable position inside the adjacency of one vertex.
#[derive(Clone, Copy, Debug)]
pub struct Cursor {
    pub(crate) x: u32,
    pub(crate) cur: u32,
    pub(crate) stage: u8,
    pub(crate) dir: Dir,
}

impl Cursor {
    pub fn vertex(&self) -> VertexId {
        self.x as VertexId
    }
}

/// Anything that exposes directed arcs over the vertices of a [`Digraph`].
pub trait ArcView {
    fn graph(&self) -> &Digraph;
    fn cursor(&self, x: VertexId, dir: Dir) -> Cursor;
    /// Next arc at the cursor as `(edge, other endpoint)`.
    fn advance(&self, c: &mut Cursor) -> Option<(EdgeId, VertexId)>;
}

#[derive(Clone, Debug, Default)]
pub struct Digraph {
    kind: Vec<VertexKind>,
    vlive: Vec<bool>,
    out_first: Vec<u32>,
    in_first: Vec<u32>,
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
    tail: Vec<u32>,
    head: Vec<u32>,
    elive: Vec<bool>,
    out_next: Vec<u32>,
    out_prev: Vec<u32>,
    in_next: Vec<u32>,
    in_prev: Vec<u32>,
    n_live: usize,
    m_live: usize,
    alias: Option<DisjointSets>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ring {
    Out,
    In,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex(VertexKind::Ordinary);
        }
        g
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = self.kind.len();
        self.kind.push(kind);
        self.vlive.push(true);
        self.out_first.push(NIL);
        self.in_first.push(NIL);
        self.out_deg.push(0);
        self.in_deg.push(0);
        if let Some(d) = self.alias.as_mut() {
            d.push();
        }
        self.n_live += 1;
        id
    }

    /// Appends `copies` parallel edges `tail -> head` at the end of both rings.
    pub fn add_edge(
        &mut self,
        tail: VertexId,
        head: VertexId,
        copies: usize,
    ) -> Result<Vec<EdgeId>, GraphError> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if tail == head {
            return Err(GraphError::SelfLoop(tail));
        }
        if copies == 0 {
            return Err(GraphError::ZeroCopies);
        }
        if self.tail.len() + copies > MAX_EDGES {
            return Err(GraphError::TooManyEdges(MAX_EDGES));
        }
        let mut ids = Vec::with_capacity(copies);
        for _ in 0..copies {
            let e = self.tail.len();
            self.tail.push(tail as u32);
            self.head.push(head as u32);
            self.elive.push(true);
            self.out_next.push(NIL);
            self.out_prev.push(NIL);
            self.in_next.push(NIL);
            self.in_prev.push(NIL);
            self.link(Ring::Out, tail, e);
            self.link(Ring::In, head, e);
            self.m_live += 1;
            ids.push(e);
        }
        Ok(ids)
    }

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        if !self.edge_live(e) {
            return Err(GraphError::DeadEdge(e));
        }
        let t = self.tail(e);
        let h = self.head(e);
        self.unlink(Ring::Out, t, e);
        self.unlink(Ring::In, h, e);
        self.elive[e] = false;
        self.m_live -= 1;
        Ok(())
    }

    /// Splices the in-ring of `src` onto the end of the in-ring of `dst` in O(1).
    /// Head ids of the moved edges are left untouched; callers that keep `src`
    /// alive must fix them up or route lookups through [`Digraph::absorb`].
    pub fn merge_in_rings(&mut self, src: VertexId, dst: VertexId) -> Result<(), GraphError> {
        self.check_vertex(src)?;
        self.check_vertex(dst)?;
        self.splice(Ring::In, src, dst);
        Ok(())
    }

    pub fn merge_out_rings(&mut self, src: VertexId, dst: VertexId) -> Result<(), GraphError> {
        self.check_vertex(src)?;
        self.check_vertex(dst)?;
        self.splice(Ring::Out, src, dst);
        Ok(())
    }

    /// Folds `src` into `dst`: both rings are spliced and `src` becomes an
    /// alias of `dst` for every endpoint lookup. Edges between the two become
    /// self-loops, so callers delete them first.
    pub fn absorb(&mut self, src: VertexId, dst: VertexId) -> Result<(), GraphError> {
        self.check_vertex(src)?;
        self.check_vertex(dst)?;
        self.splice(Ring::Out, src, dst);
        self.splice(Ring::In, src, dst);
        let n = self.kind.len();
        self.alias
            .get_or_insert_with(|| DisjointSets::new(n))
            .unite(dst, src);
        self.vlive[src] = false;
        self.n_live -= 1;
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.vlive.len() && self.vlive[v] {
            Ok(())
        } else {
            Err(GraphError::DeadVertex(v))
        }
    }

    fn ring_arrays(
        &mut self,
        ring: Ring,
    ) -> (&mut Vec<u32>, &mut Vec<u32>, &mut Vec<u32>, &mut Vec<u32>) {
        match ring {
            Ring::Out => (
                &mut self.out_first,
                &mut self.out_next,
                &mut self.out_prev,
                &mut self.out_deg,
            ),
            Ring::In => (
                &mut self.in_first,
                &mut self.in_next,
                &mut self.in_prev,
                &mut self.in_deg,
            ),
        }
    }

    fn link(&mut self, ring: Ring, v: VertexId, e: EdgeId) {
        let (first, next, prev, deg) = self.ring_arrays(ring);
        let e32 = e as u32;
        let f = first[v];
        if f == NIL {
            first[v] = e32;
            next[e] = e32;
            prev[e] = e32;
        } else {
            let last = prev[f as usize];
            next[last as usize] = e32;
            prev[e] = last;
            next[e] = f;
            prev[f as usize] = e32;
        }
        deg[v] += 1;
    }

    fn unlink(&mut self, ring: Ring, v: VertexId, e: EdgeId) {
        let (first, next, prev, deg) = self.ring_arrays(ring);
        let (p, n) = (prev[e], next[e]);
        if n as usize == e {
            first[v] = NIL;
        } else {
            next[p as usize] = n;
            prev[n as usize] = p;
            if first[v] as usize == e {
                first[v] = n;
            }
        }
        next[e] = NIL;
        prev[e] = NIL;
        deg[v] -= 1;
    }

    fn splice(&mut self, ring: Ring, src: VertexId, dst: VertexId) {
        if src == dst {
            return;
        }
        let (first, next, prev, deg) = self.ring_arrays(ring);
        let s0 = first[src];
        if s0 != NIL {
            let d0 = first[dst];
            if d0 == NIL {
                first[dst] = s0;
            } else {
                let d_last = prev[d0 as usize];
                let s_last = prev[s0 as usize];
                next[d_last as usize] = s0;
                prev[s0 as usize] = d_last;
                next[s_last as usize] = d0;
                prev[d0 as usize] = s_last;
            }
            first[src] = NIL;
        }
        deg[dst] += deg[src];
        deg[src] = 0;
    }

    #[inline]
    pub(crate) fn resolve(&self, v: u32) -> VertexId {
        match &self.alias {
            None => v as VertexId,
            Some(d) => d.find(v as usize),
        }
    }

    /// Vertex currently standing for `v` (itself unless it was absorbed).
    pub fn representative(&self, v: VertexId) -> VertexId {
        self.resolve(v as u32)
    }

    #[inline]
    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.resolve(self.tail[e])
    }

    #[inline]
    pub fn head(&self, e: EdgeId) -> VertexId {
        self.resolve(self.head[e])
    }

    pub fn edge_live(&self, e: EdgeId) -> bool {
        e < self.elive.len() && self.elive[e]
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        v < self.vlive.len() && self.vlive[v]
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.kind[v]
    }

    pub fn set_kind(&mut self, v: VertexId, kind: VertexKind) {
        self.kind[v] = kind;
    }

    pub fn is_ordinary(&self, v: VertexId) -> bool {
        self.vlive[v] && self.kind[v].is_ordinary()
    }

    /// Size of the vertex table, dead slots included.
    pub fn vertex_bound(&self) -> usize {
        self.kind.len()
    }

    /// Size of the edge table, dead slots included.
    pub fn edge_bound(&self) -> usize {
        self.tail.len()
    }

    pub fn n_live(&self) -> usize {
        self.n_live
    }

    pub fn m_live(&self) -> usize {
        self.m_live
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_deg[v] as usize
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_deg[v] as usize
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vlive.len()).filter(move |&v| self.vlive[v])
    }

    pub fn ordinary_vertices(&self) -> Vec<VertexId> {
        self.vertices()
            .filter(|&v| self.kind[v].is_ordinary())
            .collect()
    }

    pub fn out_edges(&self, v: VertexId) -> RingIter<'_> {
        RingIter {
            first: self.out_first[v],
            cur: self.out_first[v],
            next: &self.out_next,
        }
    }

    pub fn in_edges(&self, v: VertexId) -> RingIter<'_> {
        RingIter {
            first: self.in_first[v],
            cur: self.in_first[v],
            next: &self.in_next,
        }
    }

    /// Live edges in canonical order: vertices ascending, each out-ring in
    /// insertion order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.vertices().flat_map(move |v| self.out_edges(v))
    }

    #[inline]
    pub(crate) fn ring_next(&self, dir_out: bool, x: VertexId, e: u32) -> u32 {
        let (first, next) = if dir_out {
            (self.out_first[x], self.out_next[e as usize])
        } else {
            (self.in_first[x], self.in_next[e as usize])
        };
        if next == first {
            NIL
        } else {
            next
        }
    }

    #[inline]
    pub(crate) fn ring_first(&self, dir_out: bool, x: VertexId) -> u32 {
        if dir_out {
            self.out_first[x]
        } else {
            self.in_first[x]
        }
    }

    /// Copy with every live edge reversed; vertex ids and kinds are kept.
    pub fn reversed(&self) -> Digraph {
        let mut r = self.empty_like();
        for e in self.edges() {
            r.push_edge_unchecked(self.head(e), self.tail(e));
        }
        r
    }

    fn empty_like(&self) -> Digraph {
        let mut r = Digraph::new();
        for v in 0..self.vertex_bound() {
            r.add_vertex(self.kind[v]);
            if !self.vlive[v] {
                r.vlive[v] = false;
                r.n_live -= 1;
            }
        }
        r
    }

    fn push_edge_unchecked(&mut self, t: VertexId, h: VertexId) {
        let e = self.tail.len();
        self.tail.push(t as u32);
        self.head.push(h as u32);
        self.elive.push(true);
        self.out_next.push(NIL);
        self.out_prev.push(NIL);
        self.in_next.push(NIL);
        self.in_prev.push(NIL);
        self.link(Ring::Out, t, e);
        self.link(Ring::In, h, e);
        self.m_live += 1;
    }

    /// Renumbers live vertices densely (ascending) and drops dead slots.
    /// `map[v]` is the new id of the vertex standing for `v`, if any.
    pub fn compact(&self) -> (Digraph, Vec<Option<VertexId>>) {
        let mut map = vec![None; self.vertex_bound()];
        let mut g = Digraph::new();
        for v in self.vertices() {
            map[v] = Some(g.add_vertex(self.kind[v]));
        }
        for v in 0..self.vertex_bound() {
            if !self.vlive[v] && self.alias.is_some() {
                let r = self.resolve(v as u32);
                if self.vlive[r] {
                    map[v] = map[r];
                }
            }
        }
        for e in self.edges() {
            let (t, h) = (map[self.tail(e)].unwrap(), map[self.head(e)].unwrap());
            g.push_edge_unchecked(t, h);
        }
        (g, map)
    }

    /// Eager contraction of `set` into one new vertex appended after the
    /// surviving vertices (which keep their relative order).
    pub fn contract(&self, set: &[VertexId], kind: VertexKind) -> Result<Contraction, GraphError> {
        let inside = self.member_mask(set)?;
        if set.is_empty() || set.len() >= self.n_live {
            return Err(GraphError::BadContraction);
        }
        let mut map = vec![None; self.vertex_bound()];
        let mut g = Digraph::new();
        for v in self.vertices() {
            if !inside[v] {
                map[v] = Some(g.add_vertex(self.kind[v]));
            }
        }
        let merged = g.add_vertex(kind);
        for &v in set {
            map[v] = Some(merged);
        }
        if self.alias.is_some() {
            for v in 0..self.vertex_bound() {
                if !self.vlive[v] {
                    let r = self.resolve(v as u32);
                    if self.vlive[r] {
                        map[v] = map[r];
                    }
                }
            }
        }
        for e in self.edges() {
            let (t, h) = (self.tail(e), self.head(e));
            if inside[t] && inside[h] {
                continue;
            }
            g.push_edge_unchecked(map[t].unwrap(), map[h].unwrap());
        }
        Ok(Contraction {
            graph: g,
            map,
            merged,
        })
    }

    /// Standalone graph on `set` plus a k-in auxiliary vertex standing for the
    /// complement, keeping at most `k` parallel edges from it to each member.
    pub fn contract_complement_reduced(
        &self,
        set: &[VertexId],
        k: usize,
    ) -> Result<ReducedGraph, GraphError> {
        if set.is_empty() || set.len() >= self.n_live {
            return Err(GraphError::BadContraction);
        }
        let mut local = vec![NIL; self.vertex_bound()];
        let mut g = Digraph::new();
        for &v in set {
            self.check_vertex(v)?;
            if local[v] != NIL {
                return Err(GraphError::BadContraction);
            }
            local[v] = g.add_vertex(self.kind[v]) as u32;
        }
        let aux = g.add_vertex(VertexKind::AuxKIn);
        let mut touched = 0;
        let mut out = 0;
        let mut arcs = Vec::new();
        for &u in set {
            for e in self.out_edges(u) {
                touched += 1;
                let h = self.head(e);
                if local[h] == NIL {
                    out += 1;
                    arcs.push((local[u] as usize, aux));
                } else {
                    arcs.push((local[u] as usize, local[h] as usize));
                }
            }
        }
        if out != k {
            return Err(GraphError::OutDegreeMismatch {
                expected: k,
                found: out,
            });
        }
        for (t, h) in arcs {
            g.push_edge_unchecked(t, h);
        }
        for &u in set {
            let mut rho = 0;
            for e in self.in_edges(u) {
                if rho == k {
                    break;
                }
                touched += 1;
                if local[self.tail(e)] == NIL {
                    rho += 1;
                }
            }
            for _ in 0..rho {
                g.push_edge_unchecked(aux, local[u] as usize);
            }
        }
        Ok(ReducedGraph {
            graph: g,
            parent: set.to_vec(),
            aux,
            touched,
        })
    }

    /// Subdivides every edge leaving `set` with a fresh `AuxOther` vertex.
    pub fn split_outgoing(&self, set: &[VertexId]) -> Result<(Digraph, Vec<VertexId>), GraphError> {
        let inside = self.member_mask(set)?;
        let mut g = self.clone();
        let leaving: Vec<EdgeId> = set
            .iter()
            .flat_map(|&v| self.out_edges(v))
            .filter(|&e| !inside[self.head(e)])
            .collect();
        let mut fresh = Vec::with_capacity(leaving.len());
        for e in leaving {
            let (x, y) = (self.tail(e), self.head(e));
            let mid = g.add_vertex(VertexKind::AuxOther);
            g.delete_edge(e)?;
            g.add_edge(x, mid, 1)?;
            g.add_edge(mid, y, 1)?;
            fresh.push(mid);
        }
        Ok((g, fresh))
    }

    pub(crate) fn member_mask(&self, set: &[VertexId]) -> Result<Vec<bool>, GraphError> {
        let mut inside = vec![false; self.vertex_bound()];
        for &v in set {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        Ok(inside)
    }

    /// Walks every ring and compares against the counters.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen_out = vec![false; self.edge_bound()];
        let mut seen_in = vec![false; self.edge_bound()];
        let mut live = 0;
        for v in 0..self.vertex_bound() {
            if !self.vlive[v] {
                if self.out_first[v] != NIL || self.in_first[v] != NIL {
                    return Err(format!("dead vertex {v} owns edges"));
                }
                continue;
            }
            live += 1;
            for (ring, seen) in [(Ring::Out, &mut seen_out), (Ring::In, &mut seen_in)] {
                let (first, next, prev, deg) = match ring {
                    Ring::Out => (
                        &self.out_first,
                        &self.out_next,
                        &self.out_prev,
                        &self.out_deg,
                    ),
                    Ring::In => (&self.in_first, &self.in_next, &self.in_prev, &self.in_deg),
                };
                let mut count = 0;
                let f = first[v];
                if f != NIL {
                    let mut e = f;
                    loop {
                        let ei = e as usize;
                        if !self.elive[ei] {
                            return Err(format!("dead edge {ei} in ring of {v}"));
                        }
                        if seen[ei] {
                            return Err(format!("edge {ei} listed twice"));
                        }
                        seen[ei] = true;
                        let owner = if ring == Ring::Out {
                            self.tail(ei)
                        } else {
                            self.head(ei)
                        };
                        if owner != v {
                            return Err(format!("edge {ei} in ring of {v} belongs to {owner}"));
                        }
                        if prev[next[ei] as usize] != e {
                            return Err(format!("broken link after edge {ei}"));
                        }
                        count += 1;
                        e = next[ei];
                        if e == f {
                            break;
                        }
                    }
                }
                if count != deg[v] as usize {
                    return Err(format!(
                        "degree counter of {v} is {} but ring has {count}",
                        deg[v]
                    ));
                }
            }
        }
        if live != self.n_live {
            return Err(format!(
                "n_live is {} but {live} vertices are live",
                self.n_live
            ));
        }
        let m = self.elive.iter().filter(|&&b| b).count();
        if m != self.m_live {
            return Err(format!("m_live is {} but {m} edges are live", self.m_live));
        }
        for e in 0..self.edge_bound() {
            if self.elive[e] && !(seen_out[e] && seen_in[e]) {
                return Err(format!("live edge {e} missing from a ring"));
            }
        }
        Ok(())
    }
}

impl ArcView for Digraph {
    fn graph(&self) -> &Digraph {
        self
    }

    fn cursor(&self, x: VertexId, dir: Dir) -> Cursor {
        Cursor {
            x: x as u32,
            cur: self.ring_first(dir == Dir::Forward, x),
            stage: 0,
            dir,
        }
    }

    #[inline]
    fn advance(&self, c: &mut Cursor) -> Option<(EdgeId, VertexId)> {
        if c.cur == NIL {
            return None;
        }
        let e = c.cur;
        let fwd = c.dir == Dir::Forward;
        c.cur = self.ring_next(fwd, c.x as usize, e);
        let e = e as usize;
        Some((e, if fwd { self.head(e) } else { self.tail(e) }))
    }
}

pub struct RingIter<'a> {
    first: u32,
    cur: u32,
    next: &'a [u32],
}

impl Iterator for RingIter<'_> {
    type Item = EdgeId;

    fn next(&mut self) -> Option<EdgeId> {
        if self.cur == NIL {
            return None;
        }
        let e = self.cur;
        let n = self.next[e as usize];
        self.cur = if n == self.first { NIL } else { n };
        Some(e as EdgeId)
    }
}

/// Result of an eager contraction.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Digraph,
    /// New id of each old vertex (dead slots map to `None`).
    pub map: Vec<Option<VertexId>>,
    pub merged: VertexId,
}

/// The auxiliary graph built by [`Digraph::contract_complement_reduced`].
#[derive(Clone, Debug)]
pub struct ReducedGraph {
    pub graph: Digraph,
    /// Source vertex of each local vertex except the auxiliary one.
    pub parent: Vec<VertexId>,
    pub aux: VertexId,
    /// Adjacency entries inspected during construction.
    pub touched: usize,
}

/// Vertex subset with its outgoing-edge count and volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    pub members: Vec<VertexId>,
    pub out_count: usize,
    pub vol: usize,
}

impl CutSet {
    /// Sorts `members` and measures it against `view`.
    pub fn measure<A: ArcView>(view: &A, mut members: Vec<VertexId>) -> CutSet {
        members.sort_unstable();
        members.dedup();
        let (out_count, vol) = measure_set(view, &members);
        CutSet {
            members,
            out_count,
            vol,
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `(out, vol)` of a vertex set under any arc view.
pub fn measure_set<A: ArcView>(view: &A, members: &[VertexId]) -> (usize, usize) {
    let g = view.graph();
    let mut inside = vec![false; g.vertex_bound()];
    for &v in members {
        inside[v] = true;
    }
    let (mut out, mut vol) = (0, 0);
    for &v in members {
        let mut c = view.cursor(v, Dir::Forward);
        while let Some((_, y)) = view.advance(&mut c) {
            vol += 1;
            if !inside[y] {
                out += 1;
            }
        }
    }
    (out, vol)
}

pub fn out_of<A: ArcView>(view: &A, members: &[VertexId]) -> usize {
    measure_set(view, members).0
}

pub fn vol_of<A: ArcView>(view: &A, members: &[VertexId]) -> usize {
    measure_set(view, members).1
}
