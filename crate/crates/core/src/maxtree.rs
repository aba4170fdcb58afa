//! Maximal recursive trees.
//!
//! For `a < b`, vertex `b` selects `a` when they are adjacent. A maximal
//! recursive tree rooted at `v` has vertex set `U(v)`: `v` plus every vertex
//! reachable from `v` along a path of increasing vertices. No outside vertex
//! selects a member of `U(v)`, and every such set is of this form.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::graph::MultiGraph;

/// The decomposition of `G_1^n` into maximal recursive trees rooted at the
/// looped vertices.
#[derive(Debug, Clone, Serialize)]
pub struct MaxTreeForest {
    /// `parent[j - 1]`, `None` for roots.
    pub parent: Vec<Option<u32>>,
    pub roots: Vec<usize>,
    /// Component sizes, aligned with `roots`.
    pub sizes: Vec<usize>,
    /// `subtree[j - 1]`: size of the tree of `j` and its descendants.
    pub subtree: Vec<usize>,
}

impl MaxTreeForest {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

pub fn forest_m1(g: &MultiGraph) -> Result<MaxTreeForest> {
    if g.m() != 1 {
        return Err(Error::UnsupportedMethod(format!("the max-tree forest needs m = 1, got m = {}", g.m())));
    }
    let n = g.n();
    let mut parent = vec![None; n];
    let mut roots = Vec::new();
    for j in 1..=n {
        // A vertex of G_1 has either its loop or exactly one earlier neighbour.
        match g.row(j).first() {
            Some(&(b, _)) if (b as usize) < j => parent[j - 1] = Some(b),
            _ => roots.push(j),
        }
    }
    let mut subtree = vec![1usize; n];
    for j in (2..=n).rev() {
        if let Some(p) = parent[j - 1] {
            subtree[p as usize - 1] += subtree[j - 1];
        }
    }
    let sizes = roots.iter().map(|&r| subtree[r - 1]).collect();
    Ok(MaxTreeForest { parent, roots, sizes, subtree })
}

/// `|U(v)|`, the size of the maximal recursive tree rooted at `v`, any `m`.
pub fn influence(g: &MultiGraph, v: usize) -> Result<usize> {
    ensure!(v >= 1 && v <= g.n(), "vertex {v} out of range 1..={}", g.n());
    let mut seen = vec![false; g.n() + 1];
    let mut stack = vec![v];
    seen[v] = true;
    let mut size = 0;
    while let Some(u) = stack.pop() {
        size += 1;
        for &(w, _) in g.row(u) {
            let w = w as usize;
            if w > u && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(size)
}

/// `|U(r)| / n`. For `m = 1` this is the descendant tree of `r` in the
/// forest, whether `r` is a root or attached.
pub fn scaled_root_component(g: &MultiGraph, r: usize) -> Result<f64> {
    Ok(influence(g, r)? as f64 / g.n() as f64)
}

/// Every vertex `j >= 2` keeps at least one edge to an earlier vertex.
pub fn spanning_recursive_exists(g: &MultiGraph) -> bool {
    g.loops()[1..].iter().all(|&k| (k as usize) < g.m())
}

/// Number of `b` in `(omega, n]` adjacent to both `a1` and `a2`.
pub fn connector_count(g: &MultiGraph, a1: usize, a2: usize, omega: usize) -> Result<usize> {
    ensure!(a1 != a2, "connector endpoints must differ");
    ensure!(a1 >= 1 && a2 >= 1, "vertices are 1-based");
    ensure!(a1.max(a2) <= omega && omega < g.n(), "need a1, a2 <= omega < n");
    let row2 = g.row(a2);
    Ok(g.row(a1)
        .iter()
        .filter(|&&(b, _)| b as usize > omega)
        .filter(|&&(b, _)| row2.binary_search_by_key(&b, |e| e.0).is_ok())
        .count())
}

/// Minimum of [`connector_count`] over pairs `a1 < a2 <= omega`.
pub fn min_connector_count(g: &MultiGraph, omega: usize) -> Result<usize> {
    ensure!(omega >= 2 && omega < g.n(), "need 2 <= omega < n");
    let mut best = usize::MAX;
    for a1 in 1..omega {
        for a2 in a1 + 1..=omega {
            best = best.min(connector_count(g, a1, a2, omega)?);
        }
    }
    Ok(best)
}

/// Whether some maximal recursive tree has all its vertices in `[mu]`.
///
/// Scans `v = mu, ..., 1`: `U(v)` escapes `[mu]` iff `v` has a later
/// neighbour beyond `mu` or one whose own closure escapes.
pub fn prefix_maxtree_present(g: &MultiGraph, mu: usize) -> bool {
    let mu = mu.min(g.n());
    let mut escapes = vec![false; mu + 1];
    for v in (1..=mu).rev() {
        escapes[v] = g.row(v).iter().any(|&(w, _)| {
            let w = w as usize;
            w > v && (w > mu || escapes[w])
        });
    }
    escapes[1..].iter().any(|&e| !e)
}
