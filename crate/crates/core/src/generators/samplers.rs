use rand::Rng;

use crate::error::{ensure, Result};
use crate::graph::MultiGraph;

use super::{Chord, ChordDiagram, ExponentialProcess};

fn check_nm(n: usize, m: usize) -> Result<usize> {
    ensure!(n >= 1 && m >= 1, "need n >= 1 and m >= 1, got n = {n}, m = {m}");
    let total = n.checked_mul(m).filter(|&t| t < (u32::MAX / 2) as usize);
    total.ok_or_else(|| crate::error::invalid(format!("n * m = {n} * {m} is too large")))
}

/// A uniform draw from the open interval `(0, 1)`.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Indices `(i, j)`, `i < j`, of some pair of equal values, if any.
fn find_tie(values: &[f64]) -> Option<(usize, usize)> {
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]));
    order.windows(2).find_map(|w| {
        let (a, b) = (w[0] as usize, w[1] as usize);
        (values[a] == values[b]).then(|| (a.min(b), a.max(b)))
    })
}

/// Samples the exponential representation of a uniform diagram on `2mn` points.
///
/// Draws `w_1..w_{mn+1}`, sets `R_k = W_k / W_{mn+1}`, then draws `U_1..U_{mn}`
/// and places left endpoints at `l_k = R_k U_k^2`. Colliding values are
/// redrawn from the same stream: a right endpoint tie redraws the later
/// increment, a left endpoint tie redraws the later left endpoint.
pub fn pairing_from_exponential<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<(ChordDiagram, ExponentialProcess)> {
    let total = check_nm(n, m)?;
    let mut process = ExponentialProcess::sample(total + 1, rng)?;
    let rights = loop {
        let r = process.right_endpoints();
        let bad = r.windows(2).position(|w| w[0] >= w[1]).map(|k| k + 2);
        let bad = bad.or_else(|| (*r.last().unwrap() >= 1.0).then_some(total + 1));
        match bad {
            Some(j) => process.redraw(j, rng),
            None => break r,
        }
    };
    let mut values = Vec::with_capacity(2 * total);
    for &r in &rights {
        loop {
            let u = open_unit(rng);
            let l = r * u * u;
            if l > 0.0 {
                values.push(l);
                break;
            }
        }
    }
    values.extend_from_slice(&rights);
    while let Some((i, j)) = find_tie(&values) {
        // The lefts occupy the first `total` slots; rights never tie each other.
        let k = if j < total { j } else { i };
        loop {
            let u = open_unit(rng);
            let l = rights[k] * u * u;
            if l > 0.0 {
                values[k] = l;
                break;
            }
        }
    }
    let chords = (0..total).map(|k| Chord { left: values[k], right: rights[k] }).collect();
    Ok((ChordDiagram::from_coords(chords)?, process))
}

/// Pairs `2mn` independent uniforms as `(X_1, X_2), (X_3, X_4), ...`.
///
/// Ties redraw the later of the two colliding values.
pub fn pairing_from_uniform<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<ChordDiagram> {
    let total = check_nm(n, m)?;
    let mut x: Vec<f64> = (0..2 * total).map(|_| open_unit(rng)).collect();
    while let Some((_, j)) = find_tie(&x) {
        x[j] = open_unit(rng);
    }
    let mut chords: Vec<Chord> =
        x.chunks_exact(2).map(|p| Chord { left: p[0].min(p[1]), right: p[0].max(p[1]) }).collect();
    chords.sort_unstable_by(|a, b| a.right.total_cmp(&b.right));
    ChordDiagram::from_coords(chords)
}

/// Matches the smallest unmatched point with a uniformly chosen unmatched
/// partner until every point is matched.
pub fn pairing_from_matching<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<ChordDiagram> {
    let total = check_nm(n, m)?;
    let points = 2 * total;
    // `pool` holds the unmatched points; `slot[p]` is p's position in it.
    let mut pool: Vec<u32> = (0..points as u32).collect();
    let mut slot: Vec<u32> = (0..points as u32).collect();
    let mut partner = vec![u32::MAX; points];
    let remove = |pool: &mut Vec<u32>, slot: &mut Vec<u32>, p: u32| {
        let i = slot[p as usize] as usize;
        let last = pool.pop().unwrap();
        if last != p {
            pool[i] = last;
            slot[last as usize] = i as u32;
        }
    };
    for p in 0..points as u32 {
        if partner[p as usize] != u32::MAX {
            continue;
        }
        remove(&mut pool, &mut slot, p);
        let q = pool[rng.random_range(0..pool.len())];
        remove(&mut pool, &mut slot, q);
        partner[p as usize] = q;
        partner[q as usize] = p;
    }
    ChordDiagram::from_partners(partner)
}

/// Grows `G_1^{mn}` edge by edge and merges consecutive `m`-blocks.
///
/// At step `t` the new vertex's half edge already counts toward its degree, so
/// the target is a uniform entry of the endpoint list after pushing `t`:
/// vertex `s < t` with probability `deg(s)/(2t-1)`, a loop with `1/(2t-1)`.
pub fn graph_sequential<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<MultiGraph> {
    let total = check_nm(n, m)?;
    let mut ends: Vec<u32> = Vec::with_capacity(2 * total);
    let mut edges = Vec::with_capacity(total);
    let block = |v: u32| (v - 1) / m as u32 + 1;
    for t in 1..=total as u32 {
        ends.push(t);
        let target = ends[rng.random_range(0..ends.len())];
        ends.push(target);
        edges.push((block(target), block(t)));
    }
    MultiGraph::from_edges(n, m, &edges)
}

/// The `G_{1,delta}^n` process: vertex `t+1` loops with probability
/// `(1+delta)/(t(2+delta)+1+delta)` and otherwise joins `i` with probability
/// proportional to `deg(i) + delta`.
pub fn graph_sequential_delta<R: Rng + ?Sized>(n: usize, delta: f64, rng: &mut R) -> Result<MultiGraph> {
    check_nm(n, 1)?;
    ensure!(delta.is_finite() && delta >= -1.0, "delta must be >= -1, got {delta}");
    let mut ends: Vec<u32> = Vec::with_capacity(2 * n);
    let mut deg = vec![0u32; n + 1];
    let mut edges = Vec::with_capacity(n);
    ends.extend([1, 1]);
    deg[1] = 2;
    edges.push((1, 1));
    for t in 1..n as u32 {
        let v = t + 1;
        let tf = t as f64;
        let p_loop = (1.0 + delta) / (tf * (2.0 + delta) + 1.0 + delta);
        let target = if rng.random::<f64>() < p_loop {
            v
        } else if delta >= 0.0 {
            let weight = 2.0 * tf + tf * delta;
            if rng.random::<f64>() * weight < 2.0 * tf {
                ends[rng.random_range(0..ends.len())]
            } else {
                rng.random_range(1..=t)
            }
        } else {
            loop {
                let i = ends[rng.random_range(0..ends.len())];
                let d = deg[i as usize] as f64;
                if rng.random::<f64>() * d < d + delta {
                    break i;
                }
            }
        };
        ends.extend([v, target]);
        deg[v as usize] += 1;
        deg[target as usize] += 1;
        edges.push((target, v));
    }
    MultiGraph::from_edges(n, 1, &edges)
}
