use crate::error::{ensure, Result};

/// An undirected multigraph on `1..=n` with block parameter `m`.
///
/// Adjacency is a symmetric CSR: the row of `a` lists `(b, multiplicity)`
/// sorted by `b`. A loop at `a` appears once in its own row. The total number
/// of edges counted with multiplicity is always `m * n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    m: usize,
    offsets: Vec<usize>,
    adj: Vec<(u32, u32)>,
    degrees: Vec<u32>,
    loops: Vec<u32>,
}

impl MultiGraph {
    /// Builds a graph from single edges `(a, b)`, 1-based, in any orientation.
    pub fn from_edges(n: usize, m: usize, edges: &[(u32, u32)]) -> Result<Self> {
        ensure!(n >= 1 && m >= 1, "need n >= 1 and m >= 1, got n = {n}, m = {m}");
        ensure!(n < u32::MAX as usize, "n = {n} is too large");
        ensure!(edges.len() == m * n, "a graph with n = {n}, m = {m} must have {} edges, got {}", m * n, edges.len());
        let mut counts = vec![0usize; n + 1];
        for &(a, b) in edges {
            ensure!(a >= 1 && b >= 1 && a as usize <= n && b as usize <= n, "edge ({a}, {b}) out of range 1..={n}");
            counts[a as usize - 1] += 1;
            if a != b {
                counts[b as usize - 1] += 1;
            }
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + counts[v];
        }
        let mut fill = start.clone();
        let mut flat = vec![0u32; start[n]];
        for &(a, b) in edges {
            let (a0, b0) = (a as usize - 1, b as usize - 1);
            flat[fill[a0]] = b;
            fill[a0] += 1;
            if a != b {
                flat[fill[b0]] = a;
                fill[b0] += 1;
            }
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::with_capacity(flat.len());
        let mut degrees = vec![0u32; n];
        let mut loops = vec![0u32; n];
        offsets.push(0);
        for v in 0..n {
            let row = &mut flat[start[v]..start[v + 1]];
            row.sort_unstable();
            let mut i = 0;
            while i < row.len() {
                let b = row[i];
                let mut j = i;
                while j < row.len() && row[j] == b {
                    j += 1;
                }
                let mult = (j - i) as u32;
                adj.push((b, mult));
                if b as usize == v + 1 {
                    loops[v] = mult;
                    degrees[v] += 2 * mult;
                } else {
                    degrees[v] += mult;
                }
                i = j;
            }
            offsets.push(adj.len());
        }
        Ok(Self { n, m, offsets, adj, degrees, loops })
    }

    /// Builds a graph from `(a, b, multiplicity)` triples.
    pub fn from_weighted_edges(n: usize, m: usize, edges: &[(u32, u32, u32)]) -> Result<Self> {
        let total: u64 = edges.iter().map(|e| e.2 as u64).sum();
        ensure!(total == (m * n) as u64, "a graph with n = {n}, m = {m} must have {} edges, got {total}", m * n);
        let mut flat = Vec::with_capacity(total as usize);
        for &(a, b, k) in edges {
            ensure!(k >= 1, "edge ({a}, {b}) has multiplicity 0");
            flat.extend(std::iter::repeat_n((a, b), k as usize));
        }
        Self::from_edges(n, m, &flat)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Edge count with multiplicity, always `m * n`.
    pub fn edge_count(&self) -> usize {
        self.m * self.n
    }

    fn check(&self, j: usize) -> Result<usize> {
        ensure!(j >= 1 && j <= self.n, "vertex {j} out of range 1..={}", self.n);
        Ok(j - 1)
    }

    /// Degree of `j`, loops counted twice.
    pub fn degree(&self, j: usize) -> Result<usize> {
        Ok(self.degrees[self.check(j)?] as usize)
    }

    /// Number of loops at `j`.
    pub fn loops_at(&self, j: usize) -> Result<usize> {
        Ok(self.loops[self.check(j)?] as usize)
    }

    /// Number of edges joining `a` and `b` (loops when `a == b`).
    pub fn multiplicity(&self, a: usize, b: usize) -> Result<usize> {
        let a0 = self.check(a)?;
        self.check(b)?;
        let row = &self.adj[self.offsets[a0]..self.offsets[a0 + 1]];
        Ok(match row.binary_search_by_key(&(b as u32), |e| e.0) {
            Ok(i) => row[i].1 as usize,
            Err(_) => 0,
        })
    }

    pub fn has_edge(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.multiplicity(a, b)? > 0)
    }

    /// All degrees, index `j - 1` for vertex `j`.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Loop counts, index `j - 1` for vertex `j`.
    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    /// Row of vertex `j`: `(neighbour, multiplicity)` sorted by neighbour,
    /// including the loop entry if any. Panics if `j` is out of range.
    pub fn row(&self, j: usize) -> &[(u32, u32)] {
        &self.adj[self.offsets[j - 1]..self.offsets[j]]
    }

    /// Distinct edges `(a, b, multiplicity)` with `a <= b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (1..=self.n).flat_map(move |a| {
            self.row(a).iter().filter(move |e| e.0 as usize >= a).map(move |&(b, k)| (a, b as usize, k as usize))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_loop() {
        let g = MultiGraph::from_edges(1, 1, &[(1, 1)]).unwrap();
        assert_eq!(g.degree(1).unwrap(), 2);
        assert_eq!(g.loops_at(1).unwrap(), 1);
        assert!(g.has_edge(1, 1).unwrap());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 1, 1)]);
    }

    #[test]
    fn accessors_reject_out_of_range() {
        let g = MultiGraph::from_edges(1, 1, &[(1, 1)]).unwrap();
        assert!(g.degree(0).is_err());
        assert!(g.degree(2).is_err());
        assert!(g.multiplicity(1, 2).is_err());
        assert!(MultiGraph::from_edges(1, 1, &[(1, 2)]).is_err());
        assert!(MultiGraph::from_edges(2, 1, &[(1, 2)]).is_err());
    }

    #[test]
    fn multiplicities_are_symmetric_and_counted() {
        let g = MultiGraph::from_edges(3, 2, &[(1, 1), (1, 2), (2, 1), (2, 1), (3, 3), (3, 3)]).unwrap();
        assert_eq!(g.multiplicity(1, 2).unwrap(), 3);
        assert_eq!(g.multiplicity(2, 1).unwrap(), 3);
        assert_eq!(g.loops_at(3).unwrap(), 2);
        assert_eq!(g.degree(1).unwrap(), 5);
        assert_eq!(g.degree(2).unwrap(), 3);
        assert_eq!(g.degree(3).unwrap(), 4);
        assert_eq!(g.degrees().iter().map(|&d| d as usize).sum::<usize>(), 12);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 1, 1), (1, 2, 3), (3, 3, 2)]);
        let h = MultiGraph::from_weighted_edges(3, 2, &[(3, 3, 2), (2, 1, 3), (1, 1, 1)]).unwrap();
        assert_eq!(g, h);
    }
}
