//! Good partitions for a sampled vertex, by the connectivity between it and the root.

use crate::digraph::{Digraph, GraphError, VertexId, VertexKind};
use crate::flow::{augment, max_flow_bounded, Scratch};
use crate::overlay::ReversalOverlay;
use crate::partition::{refine, Partition};
use crate::scc::strongly_connected;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoodPartitionError {
    #[error("λ({v},{s}) = {found}, expected {expected}")]
    LambdaMismatch {
        v: VertexId,
        s: VertexId,
        expected: String,
        found: usize,
    },
    #[error(
        "after contraction λ = {found}, outside the range the cut structure allows ({allowed})"
    )]
    Anomaly { found: usize, allowed: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type Result<T> = std::result::Result<T, GoodPartitionError>;

/// Partition with one block per strongly connected component.
fn scc_partition(comp: &[usize], count: usize) -> Partition {
    let mut next = count;
    let labels: Vec<usize> = comp
        .iter()
        .map(|&c| {
            if c == usize::MAX {
                next += 1;
                next - 1
            } else {
                c
            }
        })
        .collect();
    Partition::from_labels(&labels)
}

/// Classes of mutual connectivity ≥ c, computed by bounded flows against one
/// representative per class inside each strongly connected component.
pub fn ecc_naive(g: &Digraph, c: usize) -> Partition {
    let (comp, count) = strongly_connected(g);
    if c <= 1 {
        return scc_partition(&comp, count);
    }
    let n = g.vertex_bound();
    let mut ov = ReversalOverlay::new(g);
    let mut sc = Scratch::new(n);
    let mut lambda = |a: VertexId, b: VertexId| {
        let f = augment(&mut ov, &mut sc, a, b, c);
        ov.undo_all();
        f
    };
    let mut labels: Vec<usize> = (0..n).collect();
    let mut reps: Vec<Vec<VertexId>> = vec![Vec::new(); count];
    for u in g.vertices() {
        let cu = comp[u];
        let mut joined = None;
        for &r in &reps[cu] {
            if lambda(u, r) >= c && lambda(r, u) >= c {
                joined = Some(r);
                break;
            }
        }
        match joined {
            Some(r) => labels[u] = labels[r],
            None => reps[cu].push(u),
        }
    }
    Partition::from_labels(&labels)
}

/// Counts graphs built while computing a partition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildCount {
    pub subgraphs: usize,
}

/// Good partition when λ(v,s) = k+1: the SCCs of the Picard–Queyranne graph.
pub fn good_partition_full(g: &Digraph, v: VertexId, s: VertexId, k: usize) -> Result<Partition> {
    let flow = max_flow_bounded(g, v, s, k + 2);
    if flow.value != k + 1 {
        return Err(GoodPartitionError::LambdaMismatch {
            v,
            s,
            expected: (k + 1).to_string(),
            found: flow.value,
        });
    }
    let pq = flow.pq_graph();
    Ok(scc_partition(&pq.scc, pq.components))
}

/// `g` with the latest (v,s)-mincut contracted into `z`.
struct CutContraction {
    graph: Digraph,
    z: VertexId,
    s: VertexId,
    map: Vec<Option<VertexId>>,
    heads: Vec<VertexId>,
}

fn contract_latest(g: &Digraph, v: VertexId, s: VertexId, lambda: usize) -> Result<CutContraction> {
    let flow = max_flow_bounded(g, v, s, lambda + 1);
    if flow.value != lambda {
        return Err(GoodPartitionError::LambdaMismatch {
            v,
            s,
            expected: lambda.to_string(),
            found: flow.value,
        });
    }
    let cut = flow.sink_complement();
    let c = g.contract(&cut.members, VertexKind::AuxKOut)?;
    let z = c.merged;
    let heads = c.graph.out_edges(z).map(|e| c.graph.head(e)).collect();
    let s2 = c.map[s].expect("root survives contraction");
    Ok(CutContraction {
        graph: c.graph,
        z,
        s: s2,
        map: c.map,
        heads,
    })
}

impl CutContraction {
    /// ECC partition of the contracted graph after dropping the edges out of `z`.
    fn eccs_without_exits(&self, c: usize, count: &mut BuildCount) -> Result<Partition> {
        let mut h = self.graph.clone();
        let exits: Vec<_> = h.out_edges(self.z).collect();
        for e in exits {
            h.delete_edge(e)?;
        }
        count.subgraphs += 1;
        Ok(ecc_naive(&h, c))
    }

    /// Distinct exit heads other than the root.
    fn exit_points(&self) -> Vec<VertexId> {
        let mut xs: Vec<VertexId> = Vec::new();
        for &x in &self.heads {
            if x != self.s && !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs
    }

    /// `self.graph` with `z` and `x` merged, and the root's id there.
    fn merge_exit(
        &self,
        x: VertexId,
        count: &mut BuildCount,
    ) -> Result<(Digraph, VertexId, VertexId, Vec<Option<VertexId>>)> {
        let c = self.graph.contract(&[self.z, x], VertexKind::AuxOther)?;
        count.subgraphs += 1;
        let s = c.map[self.s].expect("root survives contraction");
        Ok((c.graph, c.merged, s, c.map))
    }
}

fn lambda_at(g: &Digraph, v: VertexId, s: VertexId, cap: usize) -> usize {
    max_flow_bounded(g, v, s, cap).value
}

/// Good partition when λ(v,s) = k and ordinary vertices are (k+1)-edge-connected.
pub fn good_partition_deficient(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
) -> Result<Partition> {
    deficient(g, v, s, k, &mut BuildCount::default())
}

fn deficient(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
    count: &mut BuildCount,
) -> Result<Partition> {
    let cut = contract_latest(g, v, s, k)?;
    count.subgraphs += 1;
    let mut q = cut.eccs_without_exits(2, count)?;
    for x in cut.exit_points() {
        let (gi, zi, si, map) = cut.merge_exit(x, count)?;
        if lambda_at(&gi, zi, si, k + 2) == k + 1 {
            let p = good_partition_full(&gi, zi, si, k)?;
            q = refine(&q, &p.pull_back(&map)).expect("same universe");
        }
    }
    Ok(q.pull_back(&cut.map))
}

/// Good partition for the 4-edge-connected case when λ(v,s) ≤ 2 and ordinary
/// vertices are 3-edge-connected.
pub fn good_partition_low(g: &Digraph, v: VertexId, s: VertexId) -> Result<Partition> {
    let lambda = lambda_at(g, v, s, 3);
    match lambda {
        2 => good_partition_deficient(g, v, s, 2),
        1 => {
            let cut = contract_latest(g, v, s, 1)?;
            let mut count = BuildCount::default();
            let mut q = cut.eccs_without_exits(3, &mut count)?;
            for x in cut.exit_points() {
                let (gi, zi, si, map) = cut.merge_exit(x, &mut count)?;
                let p = match lambda_at(&gi, zi, si, 4) {
                    2 => good_partition_low(&gi, zi, si)?,
                    3 => good_partition_full(&gi, zi, si, 2)?,
                    l if l <= 1 => {
                        return Err(GoodPartitionError::Anomaly {
                            found: l,
                            allowed: "at least 2".into(),
                        })
                    }
                    _ => continue,
                };
                q = refine(&q, &p.pull_back(&map)).expect("same universe");
            }
            Ok(q.pull_back(&cut.map))
        }
        found => Err(GoodPartitionError::LambdaMismatch {
            v,
            s,
            expected: "1 or 2".into(),
            found,
        }),
    }
}

/// Good partition for (k+3)-edge-connectivity when ordinary vertices are
/// (k+2)-edge-connected and λ(v,s) ≤ k+2.
pub fn good_k3_partition(g: &Digraph, v: VertexId, s: VertexId, k: usize) -> Result<Partition> {
    Ok(good_k3_partition_counted(g, v, s, k)?.0)
}

pub fn good_k3_partition_counted(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
) -> Result<(Partition, BuildCount)> {
    let mut count = BuildCount::default();
    let lambda = lambda_at(g, v, s, k + 3);
    let p = if lambda == k + 2 {
        count.subgraphs += 1;
        good_partition_full(g, v, s, k + 1)?
    } else if lambda == k + 1 {
        k3_one_short(g, v, s, k, &mut count)?
    } else if lambda == k {
        k3_two_short(g, v, s, k, &mut count)?
    } else {
        return Err(GoodPartitionError::LambdaMismatch {
            v,
            s,
            expected: format!("{k}..={}", k + 2),
            found: lambda,
        });
    };
    Ok((p, count))
}

fn k3_one_short(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
    count: &mut BuildCount,
) -> Result<Partition> {
    let cut = contract_latest(g, v, s, k + 1)?;
    count.subgraphs += 1;
    let mut q = cut.eccs_without_exits(2, count)?;
    for x in cut.exit_points() {
        let (gi, zi, si, map) = cut.merge_exit(x, count)?;
        let li = lambda_at(&gi, zi, si, k + 3);
        if li <= k + 1 {
            return Err(GoodPartitionError::Anomaly {
                found: li,
                allowed: format!("at least {}", k + 2),
            });
        }
        if li == k + 2 {
            let p = good_partition_full(&gi, zi, si, k + 1)?;
            q = refine(&q, &p.pull_back(&map)).expect("same universe");
        }
    }
    Ok(q.pull_back(&cut.map))
}

fn k3_two_short(
    g: &Digraph,
    v: VertexId,
    s: VertexId,
    k: usize,
    count: &mut BuildCount,
) -> Result<Partition> {
    let cut = contract_latest(g, v, s, k)?;
    count.subgraphs += 1;
    let mut q = cut.eccs_without_exits(3, count)?;
    for x in cut.exit_points() {
        let (gi, zi, si, map) = cut.merge_exit(x, count)?;
        let li = lambda_at(&gi, zi, si, k + 3);
        let p = if li == k + 2 {
            good_partition_full(&gi, zi, si, k + 1)?
        } else if li == k + 1 {
            k3_one_short(&gi, zi, si, k, count)?
        } else if li <= k {
            return Err(GoodPartitionError::Anomaly {
                found: li,
                allowed: format!("at least {}", k + 1),
            });
        } else {
            continue;
        };
        q = refine(&q, &p.pull_back(&map)).expect("same universe");
    }
    Ok(q.pull_back(&cut.map))
}
