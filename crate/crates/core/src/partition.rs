//! Vertex partitions with canonical block ids and common refinement.

use crate::digraph::VertexId;
use crate::local_search::MSetResult;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partitions cover {left} and {right} vertices")]
    UniverseMismatch { left: usize, right: usize },
}

/// Block id per vertex; ids are dense and numbered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn trivial(n: usize) -> Self {
        Self {
            block: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            block: (0..n).collect(),
            count: n,
        }
    }

    /// Canonicalizes arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut remap = vec![usize::MAX; bound];
        let mut block = Vec::with_capacity(labels.len());
        let mut count = 0;
        for &l in labels {
            if remap[l] == usize::MAX {
                remap[l] = count;
                count += 1;
            }
            block.push(remap[l]);
        }
        Self { block, count }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<VertexId>]) -> Self {
        let mut labels = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                labels[v] = i;
            }
        }
        let mut next = blocks.len();
        for l in labels.iter_mut() {
            if *l == usize::MAX {
                *l = next;
                next += 1;
            }
        }
        Self::from_labels(&labels)
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn block_of(&self, v: VertexId) -> usize {
        self.block[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block
    }

    pub fn same_block(&self, u: VertexId, v: VertexId) -> bool {
        self.block[u] == self.block[v]
    }

    pub fn blocks(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &b) in self.block.iter().enumerate() {
            out[b].push(v);
        }
        out
    }

    /// Blocks restricted to `members`, ordered by smallest member.
    pub fn restricted_blocks(&self, members: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut slot = vec![usize::MAX; self.count];
        let mut out: Vec<Vec<VertexId>> = Vec::new();
        for v in sorted {
            let b = self.block[v];
            if slot[b] == usize::MAX {
                slot[b] = out.len();
                out.push(Vec::new());
            }
            out[slot[b]].push(v);
        }
        out
    }

    /// Partition of an original vertex set induced through a quotient map;
    /// unmapped vertices become singletons.
    pub fn pull_back(&self, map: &[Option<VertexId>]) -> Partition {
        let mut next = self.count;
        let labels: Vec<usize> = map
            .iter()
            .map(|m| match m {
                Some(w) => self.block[*w],
                None => {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        Self::from_labels(&labels)
    }
}

fn counting_order(keys: &[usize], bound: usize, input: &[usize]) -> Vec<usize> {
    let mut start = vec![0usize; bound + 1];
    for &v in input {
        start[keys[v] + 1] += 1;
    }
    for i in 0..bound {
        start[i + 1] += start[i];
    }
    let mut out = vec![0; input.len()];
    for &v in input {
        out[start[keys[v]]] = v;
        start[keys[v]] += 1;
    }
    out
}

/// Blockwise intersection of two partitions of the same universe.
pub fn refine(p: &Partition, q: &Partition) -> Result<Partition, PartitionError> {
    if p.len() != q.len() {
        return Err(PartitionError::UniverseMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let n = p.len();
    let all: Vec<usize> = (0..n).collect();
    let by_q = counting_order(&q.block, q.count, &all);
    let order = counting_order(&p.block, p.count, &by_q);
    let mut labels = vec![0; n];
    let mut group = 0;
    for i in 0..n {
        let v = order[i];
        if i > 0 {
            let u = order[i - 1];
            if p.block[u] != p.block[v] || q.block[u] != q.block[v] {
                group += 1;
            }
        }
        labels[v] = group;
    }
    Ok(Partition::from_labels(&labels))
}

pub fn refine_many<'a, I>(n: usize, parts: I) -> Result<Partition, PartitionError>
where
    I: IntoIterator<Item = &'a Partition>,
{
    let mut acc = Partition::trivial(n);
    for p in parts {
        acc = refine(&acc, p)?;
    }
    Ok(acc)
}

/// Groups ordinary vertices by their search result; `Empty` results and all
/// auxiliary vertices share one key.
pub fn partition_from_msets(ordinary: &[bool], results: &[MSetResult]) -> Partition {
    let n = ordinary.len();
    let empty: &[VertexId] = &[];
    let key = |v: usize| -> &[VertexId] {
        if !ordinary[v] {
            return empty;
        }
        match results.get(v) {
            Some(MSetResult::Found(s)) => &s.members,
            _ => empty,
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key(a).cmp(key(b)));
    let mut labels = vec![0; n];
    let mut group = 0;
    for i in 0..n {
        if i > 0 && key(order[i - 1]) != key(order[i]) {
            group += 1;
        }
        labels[order[i]] = group;
    }
    Partition::from_labels(&labels)
}
