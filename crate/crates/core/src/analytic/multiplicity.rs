//! Exact finite-`n` expectation of the number of pairs of parallel edges.
//!
//! In the sequential process on `mn` points the total degree `D` of block `a`
//! grows by one at step `s > ma` with probability `D/(2s - 1)`, so
//! `F(t) = E[D(t)(D(t) + 1)]` satisfies `F(t) = F(ma) (2t + 1)/(2ma + 1)`.
//! Two steps `i < j` of block `b > a` both land in block `a` with probability
//! `F(ma)/(2ma + 1) * 1/(2j - 1) * prod_{i < k < j} 2k/(2k - 1)`.

use crate::error::{ensure, Result};

/// `E[D(D + 1)]` for block `a` when its last point is placed.
fn block_second_factorial(a: u64, m: u64) -> f64 {
    let mut dist = vec![0.0; 2 * m as usize + 1];
    dist[0] = 1.0;
    for t in m * (a - 1) + 1..=m * a {
        let q = (2 * t - 1) as f64;
        let mut next = vec![0.0; dist.len()];
        for (d, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let inside = (1 + d) as f64 / q;
            next[d + 2] += p * inside;
            next[d + 1] += p * (1.0 - inside);
        }
        dist = next;
    }
    dist.iter().enumerate().map(|(d, p)| p * (d * (d + 1)) as f64).sum()
}

fn block_weight(b: u64, m: u64) -> f64 {
    let (first, last) = (m * (b - 1) + 1, m * b);
    let mut s = 0.0;
    for i in first..last {
        let mut prod = 1.0;
        for j in i + 1..=last {
            if j > i + 1 {
                let k = (j - 1) as f64;
                prod *= 2.0 * k / (2.0 * k - 1.0);
            }
            s += prod / (2 * j - 1) as f64;
        }
    }
    s
}

/// `E[P_n]` for `G_m^n`, in `O(n m^2)` time.
pub fn expected_parallel_pairs(n: u64, m: u64) -> Result<f64> {
    ensure!(n >= 1 && m >= 1, "n and m must be positive");
    let mut below = 0.0;
    let mut total = 0.0;
    for b in 2..=n {
        let a = b - 1;
        below += block_second_factorial(a, m) / (2 * m * a + 1) as f64;
        total += below * block_weight(b, m);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trees_have_no_parallel_edges() {
        assert_eq!(expected_parallel_pairs(1000, 1).unwrap(), 0.0);
        assert_eq!(expected_parallel_pairs(1, 3).unwrap(), 0.0);
    }

    #[test]
    fn two_vertices_two_edges() {
        // Vertex 2 sends both edges to vertex 1 in 60 of the 105 pairings.
        assert!((expected_parallel_pairs(2, 2).unwrap() - 4.0 / 7.0).abs() < 1e-15);
    }
}
