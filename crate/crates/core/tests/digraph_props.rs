mod common;

use common::{out_and_vol, small_strong, subset};
use kecc_core::digraph::Dir;
use kecc_core::digraph::{out_of, vol_of, Digraph, VertexKind};
use kecc_core::flow::{lambda_bounded, minimal_mincut_side, reach, Scratch};
use kecc_core::gen::random_kec;
use kecc_core::oracle::all_pairs_lambda;
use kecc_core::{DisjointSets, ReversalOverlay};
use proptest::prelude::*;

fn census(g: &Digraph) -> (usize, usize) {
    let n = (0..g.vertex_bound()).filter(|&v| g.is_live(v)).count();
    let m: usize = g.vertices().map(|v| g.out_edges(v).count()).sum();
    (n, m)
}

#[derive(Clone, Debug)]
enum Op {
    AddVertex,
    AddEdge(usize, usize, usize),
    Delete(usize),
    Absorb(usize, usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        1 => Just(Op::AddVertex),
        6 => (any::<usize>(), any::<usize>(), 1usize..4).prop_map(|(a, b, c)| Op::AddEdge(a, b, c)),
        4 => any::<usize>().prop_map(Op::Delete),
        1 => (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Absorb(a, b)),
    ]
}

fn mutual(m: &[Vec<usize>], u: usize, w: usize) -> usize {
    m[u][w].min(m[w][u])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_census_matches_counters(ops in prop::collection::vec(op(), 200)) {
        let mut g = Digraph::with_vertices(6);
        for o in ops {
            let live: Vec<usize> = g.vertices().collect();
            match o {
                Op::AddVertex => { g.add_vertex(VertexKind::Ordinary); }
                Op::AddEdge(a, b, c) => {
                    let (u, v) = (live[a % live.len()], live[b % live.len()]);
                    if u != v { g.add_edge(u, v, c).unwrap(); }
                }
                Op::Delete(i) => {
                    let edges: Vec<usize> = g.edges().collect();
                    if !edges.is_empty() {
                        let e = edges[i % edges.len()];
                        g.delete_edge(e).unwrap();
                        prop_assert!(g.delete_edge(e).is_err());
                    }
                }
                Op::Absorb(a, b) => {
                    let (u, v) = (live[a % live.len()], live[b % live.len()]);
                    if u != v && live.len() > 2 {
                        let between: Vec<usize> = g.edges()
                            .filter(|&e| { let (t, h) = (g.tail(e), g.head(e)); (t == u && h == v) || (t == v && h == u) })
                            .collect();
                        for e in between { g.delete_edge(e).unwrap(); }
                        let deg = g.out_degree(u) + g.out_degree(v);
                        g.absorb(u, v).unwrap();
                        prop_assert_eq!(g.out_degree(v), deg);
                        prop_assert_eq!(g.representative(u), v);
                    }
                }
            }
            prop_assert_eq!(census(&g), (g.n_live(), g.m_live()));
            prop_assert!(g.check_invariants().is_ok());
        }
    }

    #[test]
    fn reversal_shifts_out_and_vol(n in 3usize..10, extra in 0usize..20, seed: u64, mask: u64, target: usize) {
        let g = small_strong(n, extra, seed);
        let members = subset(n, mask | 1);
        prop_assume!(members.len() < n);
        let start = members[0];
        let t = target % n;
        prop_assume!(t != start);
        let mut ov = ReversalOverlay::new(&g);
        let mut sc = Scratch::new(n);
        let reached = reach(&ov, &mut sc, start, Dir::Forward);
        prop_assert!(reached.contains(&t));
        let path = tree_path(&g, start, t);
        let before = (out_of(&ov, &members), vol_of(&ov, &members));
        ov.reverse_path(&path).unwrap();
        let after = (out_of(&ov, &members), vol_of(&ov, &members));
        let shift = if members.contains(&t) { 0 } else { 1 };
        prop_assert_eq!(after, (before.0 - shift, before.1 - shift));
        ov.undo_all();
        prop_assert_eq!((out_of(&ov, &members), vol_of(&ov, &members)), before);
        prop_assert!(ov.journal().is_empty());
        prop_assert_eq!(before, out_and_vol(&g, &members));
    }

    #[test]
    fn contraction_preserves_high_connectivity(n in 4usize..=12, k in 1usize..=3, extra in 0usize..12, seed: u64, pick: (usize, usize)) {
        let g = random_kec(n, k, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s && lambda_bounded(&g, v, s, k + 1) == k);
        let set = minimal_mincut_side(&g, v, s).members;
        prop_assume!(set.len() >= 2);
        let c = g.contract(&set, VertexKind::AuxKOut).unwrap();
        prop_assert_eq!(c.graph.out_degree(c.merged), k);
        let before = all_pairs_lambda(&g, k + 3).unwrap();
        let after = all_pairs_lambda(&c.graph, k + 3).unwrap();
        for u in g.vertices().filter(|x| !set.contains(x)) {
            for w in g.vertices().filter(|x| !set.contains(x) && *x != u) {
                let (cu, cw) = (c.map[u].unwrap(), c.map[w].unwrap());
                prop_assert_eq!(mutual(&before, u, w).max(k), mutual(&after, cu, cw).max(k));
            }
        }
    }

    #[test]
    fn splitting_keeps_lambda_and_boundary_cut(n in 4usize..=10, k in 1usize..=3, extra in 0usize..10, seed: u64, pick: (usize, usize)) {
        let g = random_kec(n, k, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s && lambda_bounded(&g, v, s, k + 1) == k);
        let set = minimal_mincut_side(&g, v, s).members;
        let (h, fresh) = g.split_outgoing(&set).unwrap();
        prop_assert_eq!(fresh.len(), k);
        prop_assert_eq!(h.vertex_bound(), n + k);
        let a = all_pairs_lambda(&g, k + 3).unwrap();
        let b = all_pairs_lambda(&h, k + 3).unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(a[x][y], b[x][y]);
            }
        }
        // Inside S ∪ X, every member of S still sends k paths into X.
        let mut local = vec![usize::MAX; h.vertex_bound()];
        let mut sub = Digraph::new();
        for &x in set.iter().chain(&fresh) {
            local[x] = sub.add_vertex(VertexKind::Ordinary);
        }
        let sink = sub.add_vertex(VertexKind::AuxOther);
        for e in h.edges() {
            let (t, hd) = (local[h.tail(e)], local[h.head(e)]);
            if t != usize::MAX && hd != usize::MAX {
                sub.add_edge(t, hd, 1).unwrap();
            }
        }
        for &x in &fresh {
            sub.add_edge(local[x], sink, k).unwrap();
        }
        for &u in &set {
            prop_assert!(lambda_bounded(&sub, local[u], sink, k) >= k);
        }
    }

    #[test]
    fn reduced_complement_keeps_bounded_lambda(n in 4usize..=12, k in 1usize..=3, extra in 0usize..12, seed: u64, pick: (usize, usize)) {
        let g = random_kec(n, k, extra, seed);
        let (v, s) = (pick.0 % n, pick.1 % n);
        prop_assume!(v != s && lambda_bounded(&g, v, s, k + 1) == k);
        let set = minimal_mincut_side(&g, v, s).members;
        let r = g.contract_complement_reduced(&set, k).unwrap();
        prop_assert_eq!(r.graph.kind(r.aux), VertexKind::AuxKIn);
        prop_assert_eq!(r.graph.in_degree(r.aux), k);
        prop_assert!(r.touched <= 2 * out_and_vol(&g, &set).1 + k * set.len());
        let a = all_pairs_lambda(&g, k + 2).unwrap();
        let b = all_pairs_lambda(&r.graph, k + 2).unwrap();
        for (i, &x) in r.parent.iter().enumerate() {
            for (j, &y) in r.parent.iter().enumerate() {
                if i != j {
                    prop_assert_eq!(mutual(&a, x, y), mutual(&b, i, j));
                }
            }
        }
    }

    #[test]
    fn dsu_representative_rule(pairs in prop::collection::vec((0usize..20, 0usize..20), 1..40)) {
        let mut d = DisjointSets::new(20);
        for (u, v) in pairs {
            let keep = d.find(u);
            d.unite(u, v);
            prop_assert_eq!(d.find(v), keep);
            prop_assert_eq!(d.find(u), keep);
            prop_assert_eq!(d.find(d.find(v)), d.find(v));
        }
    }
}

/// BFS tree path in the base graph.
fn tree_path(g: &Digraph, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.vertex_bound()];
    let mut seen = vec![false; g.vertex_bound()];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for e in g.out_edges(x) {
            let y = g.head(e);
            if !seen[y] {
                seen[y] = true;
                parent[y] = e;
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut y = to;
    while y != from {
        let e = parent[y];
        path.push(e);
        y = g.tail(e);
    }
    path.reverse();
    path
}

#[test]
fn reduction_rule_caps_copies() {
    let mut g = Digraph::with_vertices(4);
    g.add_edge(0, 1, 2).unwrap();
    g.add_edge(1, 0, 2).unwrap();
    g.add_edge(2, 0, 5).unwrap();
    g.add_edge(3, 1, 1).unwrap();
    g.add_edge(1, 2, 1).unwrap();
    g.add_edge(2, 3, 2).unwrap();
    g.add_edge(3, 2, 2).unwrap();
    let r = g.contract_complement_reduced(&[0, 1], 1).unwrap();
    let copies = |u: usize| {
        r.graph
            .out_edges(r.aux)
            .filter(|&e| r.graph.head(e) == u)
            .count()
    };
    assert_eq!(copies(0), 1);
    assert_eq!(copies(1), 1);
    assert!(g.contract_complement_reduced(&[0], 1).is_err());
}
