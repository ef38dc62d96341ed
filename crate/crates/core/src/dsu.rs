//! Disjoint sets with a caller-chosen representative.

#[derive(Clone, Debug, Default)]
pub struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
    rep: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            rep: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Appends a fresh singleton and returns its id.
    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id as u32);
        self.rank.push(0);
        self.rep.push(id as u32);
        id
    }

    fn root(&self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
        }
        v
    }

    /// Representative of the class of `v`. Union by rank keeps this logarithmic
    /// without path compression, so lookups stay `&self`.
    pub fn find(&self, v: usize) -> usize {
        self.rep[self.root(v)] as usize
    }

    /// Merges the classes of `u` and `v`; the representative of `u`'s class wins.
    pub fn unite(&mut self, u: usize, v: usize) {
        let keep = self.find(u) as u32;
        let (ru, rv) = (self.root(u), self.root(v));
        if ru == rv {
            return;
        }
        let root = match self.rank[ru].cmp(&self.rank[rv]) {
            std::cmp::Ordering::Less => {
                self.parent[ru] = rv as u32;
                rv
            }
            std::cmp::Ordering::Greater => {
                self.parent[rv] = ru as u32;
                ru
            }
            std::cmp::Ordering::Equal => {
                self.parent[rv] = ru as u32;
                self.rank[ru] += 1;
                ru
            }
        };
        self.rep[root] = keep;
    }

    pub fn same(&self, u: usize, v: usize) -> bool {
        self.root(u) == self.root(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_is_identity() {
        let d = DisjointSets::new(5);
        for v in 0..5 {
            assert_eq!(d.find(v), v);
        }
    }

    #[test]
    fn unite_keeps_first_rep() {
        let mut d = DisjointSets::new(6);
        d.unite(3, 5);
        assert_eq!(d.find(5), 3);
        assert_eq!(d.find(3), 3);
        d.unite(0, 3);
        assert_eq!(d.find(5), 0);
        d.unite(5, 1);
        assert_eq!(d.find(1), 0);
    }

    #[test]
    fn chain_of_unites() {
        let n = 50;
        let mut d = DisjointSets::new(n);
        for v in 1..n {
            d.unite(v, v - 1);
        }
        let r = d.find(0);
        assert_eq!(r, n - 1);
        assert!((0..n).all(|v| d.find(v) == r));
    }

    #[test]
    fn push_extends() {
        let mut d = DisjointSets::new(2);
        let z = d.push();
        assert_eq!(z, 2);
        d.unite(z, 0);
        d.unite(z, 1);
        assert_eq!(d.find(0), 2);
        assert_eq!(d.find(1), 2);
    }
}
