use crate::error::{ensure, Result};
use crate::generators::ChordDiagram;

use super::MultiGraph;

/// Maps a chord diagram to `G_1^N`.
///
/// Scanning left to right, a vertex ends at each right endpoint, so point `p`
/// belongs to vertex `1 + #(right endpoints before p)`. Each chord becomes the
/// edge between the vertices of its two endpoints.
pub fn phi(d: &ChordDiagram) -> MultiGraph {
    let partner = d.partners();
    let mut vertex = vec![0u32; partner.len()];
    let mut closed = 0u32;
    let mut edges = Vec::with_capacity(d.chords());
    for (p, &q) in partner.iter().enumerate() {
        vertex[p] = closed + 1;
        if (q as usize) < p {
            edges.push((vertex[q as usize], closed + 1));
            closed += 1;
        }
    }
    MultiGraph::from_edges(d.chords(), 1, &edges).expect("a valid diagram always yields a valid graph")
}

/// Merges consecutive `m`-blocks of `G_1^{mn}` into the vertices of `G_m^n`.
pub fn collapse(g1: &MultiGraph, m: usize) -> Result<MultiGraph> {
    ensure!(m >= 1, "block size must be positive");
    ensure!(g1.m() == 1, "collapse expects a graph with m = 1, got m = {}", g1.m());
    ensure!(g1.n().is_multiple_of(m), "n = {} is not divisible by m = {m}", g1.n());
    let block = |v: usize| ((v - 1) / m + 1) as u32;
    let mut edges = Vec::with_capacity(g1.edge_count());
    for (a, b, k) in g1.edges() {
        for _ in 0..k {
            edges.push((block(a), block(b)));
        }
    }
    MultiGraph::from_edges(g1.n() / m, m, &edges)
}

/// `phi` followed by `collapse`, the graph `G_m^n` of a diagram on `2mn` points.
pub fn diagram_to_graph(d: &ChordDiagram, m: usize) -> Result<MultiGraph> {
    ensure!(m >= 1 && d.chords().is_multiple_of(m), "{} chords do not split into blocks of {m}", d.chords());
    if m == 1 {
        return Ok(phi(d));
    }
    collapse(&phi(d), m)
}
