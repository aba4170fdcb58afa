//! Statistics of a single graph: loops, parallel edges, degrees against the
//! exponential approximation, degree caps, expansion and isolation.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::generators::ExponentialProcess;
use crate::graph::MultiGraph;

/// `L_n`, the total number of loops.
pub fn loop_count(g: &MultiGraph) -> usize {
    g.loops().iter().map(|&k| k as usize).sum()
}

/// `P_n`: sum over vertex pairs `a < b` of `C(multiplicity(a, b), 2)`.
pub fn parallel_pair_count(g: &MultiGraph) -> u64 {
    g.edges().filter(|&(a, b, _)| a != b).map(|(_, _, k)| (k as u64) * (k as u64 - 1) / 2).sum()
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Whether the graph is connected.
pub fn is_connected(g: &MultiGraph) -> bool {
    let mut parent: Vec<u32> = (0..g.n() as u32).collect();
    let mut components = g.n();
    for (a, b, _) in g.edges() {
        let (ra, rb) = (find(&mut parent, a as u32 - 1), find(&mut parent, b as u32 - 1));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
            components -= 1;
        }
    }
    components == 1
}

/// Degrees of the first `j_n = floor(n^a)` vertices against
/// `2 sqrt(mn) (W_{mj}^{1/2} - W_{m(j-1)}^{1/2})`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub j_n: usize,
    pub degrees: Vec<usize>,
    pub approximations: Vec<f64>,
    /// `n^{-1/2} sum_{j <= j_n} |D(j) - approx(j)|`.
    pub l1: f64,
    pub min_prefix_degree: usize,
}

/// `floor(n^a)` clamped to `1..=n`, guarding against `n^a` landing just below an integer.
pub fn prefix_length(n: usize, a: f64) -> usize {
    let x = (n as f64).powf(a);
    let r = x.round();
    let j = if (x - r).abs() < 1e-9 * r.max(1.0) { r } else { x.floor() };
    (j as usize).clamp(1, n)
}

pub fn degree_report(g: &MultiGraph, process: Option<&ExponentialProcess>, a: f64) -> Result<DegreeReport> {
    let process = process.ok_or_else(|| {
        Error::UnsupportedMethod("the degree report needs the exponential process (method exp)".into())
    })?;
    let (n, m) = (g.n(), g.m());
    ensure!(
        a > 0.0 && a < m as f64 / (m as f64 + 2.0),
        "exponent a = {a} must lie in (0, m/(m+2)) = (0, {})",
        m as f64 / (m as f64 + 2.0)
    );
    ensure!(process.len() == m * n + 1, "process has {} terms, expected m*n+1 = {}", process.len(), m * n + 1);
    let j_n = prefix_length(n, a);
    let scale = 2.0 * ((m * n) as f64).sqrt();
    let w = process.sums();
    let degrees: Vec<usize> = g.degrees()[..j_n].iter().map(|&d| d as usize).collect();
    let approximations: Vec<f64> = (1..=j_n).map(|j| scale * (w[m * j].sqrt() - w[m * (j - 1)].sqrt())).collect();
    let l1 = degrees.iter().zip(&approximations).map(|(&d, &x)| (d as f64 - x).abs()).sum::<f64>() / (n as f64).sqrt();
    let min_prefix_degree = *degrees.iter().min().unwrap();
    Ok(DegreeReport { j_n, degrees, approximations, l1, min_prefix_degree })
}

/// Number of `j` in `[floor(n^a), (1 - sigma) n]` with
/// `D(j) > z ((n/j)^{1/2} - 1) ln n`.
pub fn degree_cap_violations(g: &MultiGraph, sigma: f64, z: f64, a: f64) -> Result<usize> {
    ensure!(sigma > 0.0 && sigma < 1.0, "sigma = {sigma} must lie in (0, 1)");
    ensure!(z > 1.0, "z = {z} must exceed 1");
    ensure!(a > 0.0 && a < 1.0, "a = {a} must lie in (0, 1)");
    let n = g.n();
    let nf = n as f64;
    let lo = prefix_length(n, a);
    let hi = ((1.0 - sigma) * nf).floor() as usize;
    let ln_n = nf.ln();
    Ok((lo..=hi.min(n)).filter(|&j| g.degrees()[j - 1] as f64 > z * ((nf / j as f64).sqrt() - 1.0) * ln_n).count())
}

fn membership(g: &MultiGraph, set: &[usize], what: &str) -> Result<Vec<bool>> {
    let mut inside = vec![false; g.n() + 1];
    for &v in set {
        ensure!(v >= 1 && v <= g.n(), "vertex {v} in {what} out of range 1..={}", g.n());
        inside[v] = true;
    }
    Ok(inside)
}

/// `|N(S)|`, the number of vertices outside `S` adjacent to `S`.
pub fn outside_neighbors(g: &MultiGraph, s: &[usize]) -> Result<usize> {
    let inside = membership(g, s, "S")?;
    let mut seen = vec![false; g.n() + 1];
    let mut count = 0;
    for v in (1..=g.n()).filter(|&v| inside[v]) {
        for &(b, _) in g.row(v) {
            let b = b as usize;
            if !inside[b] && !seen[b] {
                seen[b] = true;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Whether `|N(S)| >= rho |S|`.
pub fn expansion_check(g: &MultiGraph, s: &[usize], rho: f64) -> Result<bool> {
    ensure!(rho.is_finite() && rho >= 0.0, "rate rho = {rho} must be non-negative");
    let mut distinct = s.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(outside_neighbors(g, &distinct)? as f64 >= rho * distinct.len() as f64)
}

/// Whether no edge joins `A` and `B`.
pub fn isolated_pair_check(g: &MultiGraph, a: &[usize], b: &[usize]) -> Result<bool> {
    let in_a = membership(g, a, "A")?;
    let in_b = membership(g, b, "B")?;
    ensure!(!(1..=g.n()).any(|v| in_a[v] && in_b[v]), "A and B must be disjoint");
    Ok(!(1..=g.n()).filter(|&v| in_a[v]).any(|v| g.row(v).iter().any(|&(w, _)| in_b[w as usize])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::pairing_from_exponential;
    use crate::graph::diagram_to_graph;
    use crate::rng;

    fn sample() -> MultiGraph {
        MultiGraph::from_edges(4, 2, &[(1, 1), (1, 1), (1, 2), (1, 2), (1, 3), (1, 3), (3, 4), (2, 4)]).unwrap()
    }

    #[test]
    fn loops_and_parallel_pairs() {
        let g = sample();
        assert_eq!(loop_count(&g), 2);
        assert_eq!(parallel_pair_count(&g), 2);
        let triple = MultiGraph::from_edges(2, 3, &[(1, 1), (1, 1), (1, 1), (1, 2), (1, 2), (1, 2)]).unwrap();
        assert_eq!(parallel_pair_count(&triple), 3);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&sample()));
        let g = MultiGraph::from_edges(2, 1, &[(1, 1), (2, 2)]).unwrap();
        assert!(!is_connected(&g));
    }

    #[test]
    fn degree_report_needs_the_process_and_a_valid_exponent() {
        let g = sample();
        assert!(matches!(degree_report(&g, None, 0.3), Err(Error::UnsupportedMethod(_))));
        let (d, p) = pairing_from_exponential(50, 2, &mut rng::stream(1)).unwrap();
        let g = diagram_to_graph(&d, 2).unwrap();
        assert!(degree_report(&g, Some(&p), 0.5).is_err());
        let r = degree_report(&g, Some(&p), 0.3).unwrap();
        assert_eq!(r.j_n, 3);
        let first = 2.0 * 100f64.sqrt() * p.sum(2).sqrt();
        assert!((r.approximations[0] - first).abs() < 1e-12);
        let telescoped: f64 = r.approximations.iter().sum();
        assert!((telescoped - 2.0 * 10.0 * p.sum(6).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn degree_caps() {
        let g = sample();
        assert!(degree_cap_violations(&g, 0.25, 1.0, 0.3).is_err());
        assert_eq!(degree_cap_violations(&g, 0.25, 1e6, 0.3).unwrap(), 0);
        // j_n = 4 > (1 - sigma) n = 2: empty range.
        assert_eq!(degree_cap_violations(&g, 0.5, 2.0, 0.999).unwrap(), 0);
    }

    #[test]
    fn expansion_and_isolation() {
        let g = sample();
        let all: Vec<usize> = (1..=4).collect();
        assert!(!expansion_check(&g, &all, 0.1).unwrap());
        assert!(expansion_check(&g, &[1], 2.0).unwrap());
        assert!(!isolated_pair_check(&g, &[1], &[2, 3]).unwrap());
        assert!(isolated_pair_check(&g, &[2], &[3]).unwrap());
        assert!(isolated_pair_check(&g, &[1], &[1]).is_err());
    }
}
