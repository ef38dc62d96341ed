#![allow(dead_code)]

use kecc_core::gen::{blocks, chain, cyc, random_kec};
use kecc_core::rng::stream;
use kecc_core::Digraph;
use rand::Rng;

pub struct Case {
    pub name: String,
    pub graph: Digraph,
    pub k: usize,
}

/// Seeded k-edge-connected graphs from the four families, n ≤ 36, k ∈ {1,2,3}.
pub fn corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = stream(seed, "test/corpus", 0);
    (0..count)
        .map(|i| {
            let k = 1 + i % 3;
            let (name, graph) = match (i / 3) % 4 {
                0 => {
                    let n = rng.random_range(3..=20);
                    (format!("cyc-{n}-{k}"), cyc(n, k))
                }
                1 => {
                    let p = rng.random_range(k + 1..=10);
                    let q = rng.random_range(k + 1..=10);
                    (format!("blocks-{p}-{q}-{k}"), blocks(p, q, k))
                }
                2 => {
                    let size = rng.random_range(k + 1..=7);
                    let b = rng.random_range(2..=(36 / size).min(5));
                    (format!("chain-{b}-{size}-{k}"), chain(b, size, k))
                }
                _ => {
                    let n = rng.random_range(6..=36);
                    let extra = rng.random_range(0..=2 * n);
                    let s = rng.random::<u64>();
                    (
                        format!("random-kec-{n}-{k}-{extra}-s{s}"),
                        random_kec(n, k, extra, s),
                    )
                }
            };
            Case { name, graph, k }
        })
        .collect()
}

/// Small strongly connected graph: one Hamiltonian cycle plus random arcs.
pub fn small_strong(n: usize, extra: usize, seed: u64) -> Digraph {
    random_kec(n, 1, extra, seed)
}

/// Uniformly random subset of `0..n` of the given mask width.
pub fn subset(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn out_and_vol(g: &Digraph, set: &[usize]) -> (usize, usize) {
    let mut inside = vec![false; g.vertex_bound()];
    for &v in set {
        inside[v] = true;
    }
    let mut out = 0;
    let mut vol = 0;
    for e in g.edges() {
        if inside[g.tail(e)] {
            vol += 1;
            if !inside[g.head(e)] {
                out += 1;
            }
        }
    }
    (out, vol)
}
