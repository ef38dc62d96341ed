//! Journaled edge-direction flips over a frozen [`Digraph`].

use crate::digraph::{ArcView, Cursor, Digraph, Dir, EdgeId, GraphError, VertexId, NIL};

#[derive(Clone, Debug)]
pub struct ReversalOverlay<'g> {
    graph: &'g Digraph,
    flipped: Vec<bool>,
    journal: Vec<EdgeId>,
}

impl<'g> ReversalOverlay<'g> {
    pub fn new(graph: &'g Digraph) -> Self {
        Self {
            graph,
            flipped: vec![false; graph.edge_bound()],
            journal: Vec::new(),
        }
    }

    pub fn base(&self) -> &'g Digraph {
        self.graph
    }

    pub fn is_flipped(&self, e: EdgeId) -> bool {
        self.flipped[e]
    }

    /// Tail of `e` as seen through the overlay.
    #[inline]
    pub fn tail(&self, e: EdgeId) -> VertexId {
        if self.flipped[e] {
            self.graph.head(e)
        } else {
            self.graph.tail(e)
        }
    }

    #[inline]
    pub fn head(&self, e: EdgeId) -> VertexId {
        if self.flipped[e] {
            self.graph.tail(e)
        } else {
            self.graph.head(e)
        }
    }

    pub fn journal(&self) -> &[EdgeId] {
        &self.journal
    }

    pub fn checkpoint(&self) -> usize {
        self.journal.len()
    }

    /// Reverses every edge of a directed walk under the current orientation.
    pub fn reverse_path(&mut self, path: &[EdgeId]) -> Result<(), GraphError> {
        for (i, &e) in path.iter().enumerate() {
            if !self.graph.edge_live(e) {
                return Err(GraphError::DeadEdge(e));
            }
            if i > 0 && self.head(path[i - 1]) != self.tail(e) {
                return Err(GraphError::BrokenPath(i));
            }
        }
        for &e in path {
            self.flip(e);
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn flip(&mut self, e: EdgeId) {
        self.flipped[e] = !self.flipped[e];
        self.journal.push(e);
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.journal.len() > mark {
            let e = self.journal.pop().unwrap();
            self.flipped[e] = !self.flipped[e];
        }
    }

    pub fn undo_all(&mut self) {
        self.undo_to(0);
    }
}

impl ArcView for ReversalOverlay<'_> {
    fn graph(&self) -> &Digraph {
        self.graph
    }

    fn cursor(&self, x: VertexId, dir: Dir) -> Cursor {
        Cursor {
            x: x as u32,
            cur: self.graph.ring_first(dir == Dir::Forward, x),
            stage: 0,
            dir,
        }
    }

    /// Forward arcs of `x` are its unflipped out-edges followed by its flipped
    /// in-edges; backward arcs are the mirror image.
    #[inline]
    fn advance(&self, c: &mut Cursor) -> Option<(EdgeId, VertexId)> {
        let g = self.graph;
        let x = c.x as usize;
        loop {
            if c.cur == NIL {
                if c.stage == 1 {
                    return None;
                }
                c.stage = 1;
                c.cur = g.ring_first(c.dir != Dir::Forward, x);
                continue;
            }
            // Stage 0 walks the out-ring for forward cursors, the in-ring for
            // backward ones; stage 1 walks the other ring.
            let on_out = (c.stage == 0) == (c.dir == Dir::Forward);
            let e = c.cur;
            c.cur = g.ring_next(on_out, x, e);
            let e = e as usize;
            let want_flipped = c.stage == 1;
            if self.flipped[e] == want_flipped {
                let other = if on_out { g.head(e) } else { g.tail(e) };
                return Some((e, other));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::measure_set;
    use crate::gen;

    fn arcs(ov: &ReversalOverlay, x: VertexId, dir: Dir) -> Vec<(EdgeId, VertexId)> {
        let mut c = ov.cursor(x, dir);
        let mut v = Vec::new();
        while let Some(a) = ov.advance(&mut c) {
            v.push(a);
        }
        v
    }

    #[test]
    fn reversal_on_cycle() {
        let g = gen::cyc(4, 1);
        let mut ov = ReversalOverlay::new(&g);
        let s = [1, 2, 3];
        assert_eq!(measure_set(&ov, &s), (1, 3));
        ov.reverse_path(&[1, 2, 3]).unwrap();
        assert_eq!(measure_set(&ov, &s), (0, 2));
        assert_eq!(arcs(&ov, 0, Dir::Forward), vec![(0, 1), (3, 3)]);
        assert_eq!(arcs(&ov, 0, Dir::Backward), vec![]);
        ov.undo_all();
        assert_eq!(measure_set(&ov, &s), (1, 3));
        assert!(ov.journal().is_empty());
    }

    #[test]
    fn path_ending_inside_keeps_counts() {
        let g = gen::cyc(4, 1);
        let mut ov = ReversalOverlay::new(&g);
        let s = [1, 2, 3];
        ov.reverse_path(&[1, 2]).unwrap();
        assert_eq!(measure_set(&ov, &s), (1, 3));
    }

    #[test]
    fn rejects_broken_walk() {
        let g = gen::cyc(4, 1);
        let mut ov = ReversalOverlay::new(&g);
        assert_eq!(ov.reverse_path(&[0, 2]), Err(GraphError::BrokenPath(1)));
        assert!(ov.journal().is_empty());
    }
}
