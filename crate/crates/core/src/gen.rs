//! Graph families used by tests, benchmarks and the CLI.

use crate::digraph::{Digraph, VertexId};
use crate::rng::stream;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters for {model}: {reason}")]
    InvalidParams { model: &'static str, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Cyc {
        n: usize,
        k: usize,
    },
    Kn {
        n: usize,
    },
    Blocks {
        p: usize,
        q: usize,
        k: usize,
    },
    RandomKec {
        n: usize,
        k: usize,
        extra: usize,
    },
    Chain {
        blocks: usize,
        size: usize,
        k: usize,
    },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Cyc { .. } => "cyc",
            Model::Kn { .. } => "kn",
            Model::Blocks { .. } => "blocks",
            Model::RandomKec { .. } => "random-kec",
            Model::Chain { .. } => "chain",
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Model::Cyc { n, k } => format!("cyc-{n}-{k}"),
            Model::Kn { n } => format!("kn-{n}"),
            Model::Blocks { p, q, k } => format!("blocks-{p}-{q}-{k}"),
            Model::RandomKec { n, k, extra } => format!("random-kec-{n}-{k}-{extra}"),
            Model::Chain { blocks, size, k } => format!("chain-{blocks}-{size}-{k}"),
        }
    }
}

pub fn generate(model: &Model, seed: u64) -> Result<Digraph, GenError> {
    let bad = |reason: &str| GenError::InvalidParams {
        model: model.name(),
        reason: reason.to_string(),
    };
    match *model {
        Model::Cyc { n, k } => {
            if n < 2 || k < 1 {
                return Err(bad("need n >= 2 and k >= 1"));
            }
            Ok(cyc(n, k))
        }
        Model::Kn { n } => {
            if n < 2 {
                return Err(bad("need n >= 2"));
            }
            Ok(kn(n))
        }
        Model::Blocks { p, q, k } => {
            if p < 1 || q < 1 || k < 1 {
                return Err(bad("need p, q, k >= 1"));
            }
            Ok(blocks(p, q, k))
        }
        Model::RandomKec { n, k, extra } => {
            if n < 2 || k < 1 {
                return Err(bad("need n >= 2 and k >= 1"));
            }
            Ok(random_kec(n, k, extra, seed))
        }
        Model::Chain { blocks, size, k } => {
            if blocks < 1 || size < 1 || k < 1 {
                return Err(bad("need blocks, size, k >= 1"));
            }
            Ok(chain(blocks, size, k))
        }
    }
}

/// Cycle `0 -> 1 -> ... -> n-1 -> 0` with every arc repeated `k` times.
pub fn cyc(n: usize, k: usize) -> Digraph {
    let mut g = Digraph::with_vertices(n);
    for _ in 0..k {
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1).unwrap();
        }
    }
    g
}

/// Complete digraph on `n` vertices.
pub fn kn(n: usize) -> Digraph {
    let mut g = Digraph::with_vertices(n);
    add_clique(&mut g, &(0..n).collect::<Vec<_>>());
    g
}

fn add_clique(g: &mut Digraph, vs: &[VertexId]) {
    for &u in vs {
        for &v in vs {
            if u != v {
                g.add_edge(u, v, 1).unwrap();
            }
        }
    }
}

/// Complete blocks `A = 0..p` and `B = p..p+q`, joined by `k` parallel edges
/// `a0 -> b0` and `k` parallel edges `b0 -> a0`.
pub fn blocks(p: usize, q: usize, k: usize) -> Digraph {
    let mut g = Digraph::with_vertices(p + q);
    add_clique(&mut g, &(0..p).collect::<Vec<_>>());
    add_clique(&mut g, &(p..p + q).collect::<Vec<_>>());
    g.add_edge(0, p, k).unwrap();
    g.add_edge(p, 0, k).unwrap();
    g
}

/// `blocks` complete blocks of `size` vertices in a row; consecutive blocks are
/// joined by `k` edges each way between the last vertex of one and the first
/// vertex of the next.
pub fn chain(blocks: usize, size: usize, k: usize) -> Digraph {
    let mut g = Digraph::with_vertices(blocks * size);
    for b in 0..blocks {
        add_clique(&mut g, &(b * size..(b + 1) * size).collect::<Vec<_>>());
    }
    for b in 1..blocks {
        let (last, first) = (b * size - 1, b * size);
        g.add_edge(last, first, k).unwrap();
        g.add_edge(first, last, k).unwrap();
    }
    g
}

/// Union of `k` Hamiltonian cycles on random permutations plus `extra`
/// uniform random arcs.
pub fn random_kec(n: usize, k: usize, extra: usize, seed: u64) -> Digraph {
    let mut rng = stream(seed, "gen/random-kec", 0);
    let mut g = Digraph::with_vertices(n);
    let mut perm: Vec<VertexId> = (0..n).collect();
    for _ in 0..k {
        perm.shuffle(&mut rng);
        for i in 0..n {
            g.add_edge(perm[i], perm[(i + 1) % n], 1).unwrap();
        }
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        g.add_edge(u, v, 1).unwrap();
    }
    g
}
