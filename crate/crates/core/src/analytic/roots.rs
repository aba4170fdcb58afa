//! Bracketing scans and bisection for the thresholds of the examples and the
//! degree-cap constant.

use serde::Serialize;

use super::rates::{example1_rate, example2_rate, h_gamma, xm2_lhs};
use crate::error::{ensure, Result};

pub const SCAN_POINTS: usize = 10_000;
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Linear,
    /// Geometric spacing, for roots that may sit many decades below `hi`.
    Log,
}

fn grid_points(lo: f64, hi: f64, points: usize, grid: Grid) -> Vec<f64> {
    let steps = points.max(2) - 1;
    (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            match grid {
                Grid::Linear => lo + (hi - lo) * t,
                Grid::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
            }
        })
        .collect()
}

/// Bisects a sign change of `f` inside `[a, b]` down to [`TOLERANCE`].
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..400 {
        if b - a <= TOLERANCE {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Every sign change of `f` on the scan grid, refined by bisection. An empty
/// result means no root was found.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, grid: Grid) -> Vec<f64> {
    let xs = grid_points(lo, hi, points, grid);
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() - 1 {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
        } else if ys[i + 1] != 0.0 && (ys[i] > 0.0) != (ys[i + 1] > 0.0) {
            roots.push(bisect(&f, xs[i], xs[i + 1]));
        }
    }
    if ys[xs.len() - 1] == 0.0 {
        roots.push(xs[xs.len() - 1]);
    }
    roots
}

/// Maximal sub-intervals of `[lo, hi]` on which `f > 0`, ends refined by bisection.
pub fn positive_intervals<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, grid: Grid) -> Vec<(f64, f64)> {
    let xs = grid_points(lo, hi, points, grid);
    let pos: Vec<bool> = xs.iter().map(|&x| f(x) > 0.0).collect();
    let mut out = Vec::new();
    let mut start = pos[0].then_some(xs[0]);
    for i in 1..xs.len() {
        match (pos[i - 1], pos[i]) {
            (false, true) => start = Some(bisect(&f, xs[i - 1], xs[i])),
            (true, false) => out.push((start.take().unwrap(), bisect(&f, xs[i - 1], xs[i]))),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, xs[xs.len() - 1]));
    }
    out
}

/// `z ln z + 1 - z`.
pub fn degree_cap_rate(z: f64) -> f64 {
    z * z.ln() + 1.0 - z
}

/// The root `z(sigma) > 1` of `(1 - sigma)^{-1/2} - 1 = 1/(z ln z + 1 - z)`.
pub fn z_sigma(sigma: f64) -> Result<Option<f64>> {
    ensure!(sigma > 0.0 && sigma < 1.0, "sigma = {sigma} must lie in (0, 1)");
    let target = (1.0 - sigma).powf(-0.5) - 1.0;
    let f = |z: f64| 1.0 / degree_cap_rate(z) - target;
    let mut hi = 2.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Ok(None);
        }
    }
    let lo = 1.0 + 1e-9;
    let roots = scan_roots(f, lo, hi, SCAN_POINTS, Grid::Log);
    Ok(roots.first().copied())
}

/// `eps(rho) = 2 / (1 + sqrt(1 + 16 (sqrt(rho (rho + 1)) + rho)))`.
pub fn eps_rho(rho: f64) -> Result<f64> {
    ensure!(rho >= 0.0, "rho = {rho} must be non-negative");
    Ok(2.0 / (1.0 + (1.0 + 16.0 * ((rho * (rho + 1.0)).sqrt() + rho)).sqrt()))
}

/// The root `x_{m,2}(gamma)` of `x^{-1/2} ln(e/(x gamma)) = m eps^2 h(gamma)/(gamma + 1)`
/// in `(0, 1/(gamma + 2))`; `None` when `m` is too small for one to exist.
pub fn x_m2(m: f64, gamma: f64, eps: f64) -> Result<Option<f64>> {
    ensure!(m > 0.0 && gamma > 0.0, "m and gamma must be positive");
    ensure!(eps > 0.0 && eps < 1.0, "eps = {eps} must lie in (0, 1)");
    let rhs = m * eps * eps * h_gamma(gamma) / (gamma + 1.0);
    let f = |x: f64| xm2_lhs(x, gamma) - rhs;
    let roots = scan_roots(f, 1e-300, 1.0 / (gamma + 2.0), SCAN_POINTS, Grid::Log);
    Ok(roots.first().copied())
}

/// Sign-change structure of a rate function on its domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub zeros_1: Vec<f64>,
    pub zeros_2: Vec<f64>,
    /// Where `min(K_1, K_2) > 0`.
    pub positive: Vec<(f64, f64)>,
}

/// Zeros of `J_{m,1}`, `J_{m,2}` and the positive set of their minimum on `(0, 1/2)`.
pub fn example1_thresholds(m: f64, eps: f64, c: f64) -> Result<Thresholds> {
    example1_rate(m, 0.25, eps, c)?;
    let lo = 1e-9;
    let hi = 0.5 - 1e-9;
    let f1 = |b: f64| example1_rate(m, b, eps, c).unwrap().0;
    let f2 = |b: f64| example1_rate(m, b, eps, c).unwrap().1;
    Ok(Thresholds {
        zeros_1: scan_roots(f1, lo, hi, SCAN_POINTS, Grid::Linear),
        zeros_2: scan_roots(f2, lo, hi, SCAN_POINTS, Grid::Linear),
        positive: positive_intervals(|b| f1(b).min(f2(b)), lo, hi, SCAN_POINTS, Grid::Linear),
    })
}

/// Zeros of `K_{m,1}`, `K_{m,2}` and the positive set of their minimum on
/// `(0, 1/(1+rho))`. The number of zeros is reported, not assumed.
pub fn example2_thresholds(m: f64, rho: f64, eps: f64, c: f64) -> Result<Thresholds> {
    let end = 1.0 / (1.0 + rho);
    example2_rate(m, rho, 0.5 * end, eps, c)?;
    let lo = 1e-9 * end;
    let hi = end * (1.0 - 1e-9);
    let f1 = |x: f64| example2_rate(m, rho, x, eps, c).unwrap().0;
    let f2 = |x: f64| example2_rate(m, rho, x, eps, c).unwrap().1;
    Ok(Thresholds {
        zeros_1: scan_roots(f1, lo, hi, SCAN_POINTS, Grid::Linear),
        zeros_2: scan_roots(f2, lo, hi, SCAN_POINTS, Grid::Linear),
        positive: positive_intervals(|x| f1(x).min(f2(x)), lo, hi, SCAN_POINTS, Grid::Linear),
    })
}
