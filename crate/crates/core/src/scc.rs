//! Iterative Tarjan over any arc view.

use crate::digraph::{ArcView, Cursor, Dir, VertexId, NIL};

/// Component id per vertex slot (`usize::MAX` for dead slots) and the
/// component count. Ids come out in reverse topological order.
pub fn strongly_connected<A: ArcView>(view: &A) -> (Vec<usize>, usize) {
    let g = view.graph();
    let n = g.vertex_bound();
    let mut index = vec![NIL; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut calls: Vec<Cursor> = Vec::new();
    let mut counter = 0u32;
    let mut count = 0;
    for root in g.vertices() {
        if index[root] != NIL {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push(view.cursor(root, Dir::Forward));
        while let Some(top) = calls.last_mut() {
            let v = top.vertex();
            if let Some((_, w)) = view.advance(top) {
                if index[w] == NIL {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push(view.cursor(w, Dir::Forward));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
            if let Some(parent) = calls.last() {
                let p = parent.vertex();
                low[p] = low[p].min(low[v]);
            }
        }
    }
    (comp, count)
}
