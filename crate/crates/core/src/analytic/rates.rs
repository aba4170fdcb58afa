//! Exponential rate functions of the three worked examples: a bound
//! `exp(-n K + o(n))` on the probability of an isolated pair, so `K > 0`
//! means exponentially unlikely.

use super::special::xlogx;
use crate::error::{ensure, Result};

fn check_common(m: f64, eps: f64, c: f64) -> Result<()> {
    ensure!(m > 0.0, "m must be positive");
    ensure!(eps > 0.0 && eps < 1.0, "eps = {eps} must lie in (0, 1)");
    ensure!(c > 0.0, "c must be positive");
    Ok(())
}

/// `I(beta) = 2 beta ln beta + (1 - 2 beta) ln(1 - 2 beta)`.
pub fn entropy_beta(beta: f64) -> f64 {
    2.0 * xlogx(beta) + xlogx(1.0 - 2.0 * beta)
}

/// Two equal sets of size `beta n`: returns `(J_{m,1}, J_{m,2})`.
pub fn example1_rate(m: f64, beta: f64, eps: f64, c: f64) -> Result<(f64, f64)> {
    check_common(m, eps, c)?;
    ensure!(beta > 0.0 && beta < 0.5, "beta = {beta} must lie in (0, 1/2)");
    let i = entropy_beta(beta);
    let (s1, s2) = ((1.0 - beta).sqrt(), (1.0 - 2.0 * beta).sqrt());
    let j1 = i + m * 4.0 * c * (1.0 - eps) * (s1 - s2) * (1.0 - s1);
    let j2 = i + m * eps * eps * beta * s2 / ((1.0 + s2) * (1.0 + s2));
    Ok((j1, j2))
}

/// `h(x, y) = 4 (sqrt(1-x) - sqrt(1-x-y)) (1 - sqrt(1-y))`, as displayed with
/// the expansion example.
pub fn example2_h(x: f64, y: f64) -> f64 {
    4.0 * ((1.0 - x).sqrt() - (1.0 - x - y).max(0.0).sqrt()) * (1.0 - (1.0 - y).sqrt())
}

pub fn example2_g(x: f64, y: f64) -> f64 {
    example2_h(x, y).min(example2_h(y, x))
}

/// `H(rho, x) = rho x ln(rho x) + x ln x + y ln y`, `y = 1 - (1 + rho) x`.
pub fn entropy_expansion(rho: f64, x: f64) -> f64 {
    xlogx(rho * x) + xlogx(x) + xlogx(1.0 - (1.0 + rho) * x)
}

/// Vertex expansion at rate `rho`: returns `(K_{m,1}, K_{m,2})`.
pub fn example2_rate(m: f64, rho: f64, x: f64, eps: f64, c: f64) -> Result<(f64, f64)> {
    check_common(m, eps, c)?;
    ensure!(rho > 0.0, "rho = {rho} must be positive");
    ensure!(x > 0.0 && x < 1.0 / (1.0 + rho), "x = {x} must lie in (0, 1/(1+rho))");
    let y = 1.0 - (1.0 + rho) * x;
    let hh = entropy_expansion(rho, x);
    let k1 = hh + m * c * (1.0 - eps) * example2_g(x, y);
    let sxr = (x * rho).sqrt();
    let k2 = hh + m * 2.0 * eps * eps * sxr / ((1.0 + sxr) * (1.0 + sxr)) * x * y / (1.0 - x * rho);
    Ok((k1, k2))
}

/// `H(x) = gamma x ln(gamma x) + x ln x + (1 - x(gamma+1)) ln(1 - x(gamma+1))`.
pub fn entropy_cut(gamma: f64, x: f64) -> f64 {
    xlogx(gamma * x) + xlogx(x) + xlogx(1.0 - x * (gamma + 1.0))
}

/// A set against its complement: returns `(K_{m,1}, K_{m,2})` for
/// `x in (0, 1/(gamma+2)]`.
pub fn example3_rate(m: f64, gamma: f64, x: f64, eps: f64, c: f64) -> Result<(f64, f64)> {
    check_common(m, eps, c)?;
    ensure!(gamma > 0.0, "gamma = {gamma} must be positive");
    ensure!(x > 0.0 && x <= 1.0 / (gamma + 2.0), "x = {x} must lie in (0, 1/(gamma+2)]");
    let hh = entropy_cut(gamma, x);
    let s1 = (1.0 - x).sqrt();
    let sg = (gamma * x).sqrt();
    let k1 = hh + m * 4.0 * c * (1.0 - eps) * (s1 - sg) * (1.0 - s1);
    let k2 =
        hh + m * 2.0 * eps * eps * sg / ((1.0 + sg) * (1.0 + sg)) * x * (1.0 - x * (gamma + 1.0)) / (1.0 - gamma * x);
    Ok((k1, k2))
}

/// `h(gamma) = (gamma + 2) sqrt(gamma) / (sqrt(gamma + 2) + sqrt(gamma))^2`.
pub fn h_gamma(gamma: f64) -> f64 {
    let (a, b) = ((gamma + 2.0).sqrt(), gamma.sqrt());
    (gamma + 2.0) * b / ((a + b) * (a + b))
}

/// Closed-form threshold above which `K_{m,1} > 0` in the cut example.
pub fn x_m1(m: f64, gamma: f64, eps: f64, c: f64) -> Result<f64> {
    check_common(m, eps, c)?;
    ensure!(gamma > 0.0, "gamma must be positive");
    let first = ((gamma + 1.0 - gamma * gamma.ln()) / (gamma + 1.0)).exp();
    let second = (-2.0 * m * c * (1.0 - eps) * ((gamma + 1.0).sqrt() - gamma.sqrt())
        / ((gamma + 1.0) * (gamma + 2.0).sqrt()))
    .exp();
    Ok(first * second)
}

/// Smallest `m` with `x_m1 < 1/(gamma+2)`.
pub fn m1(gamma: f64, eps: f64, c: f64) -> Result<f64> {
    check_common(1.0, eps, c)?;
    ensure!(gamma > 0.0, "gamma must be positive");
    Ok((gamma + 1.0 - gamma * gamma.ln() + (gamma + 1.0) * (gamma + 2.0).ln()) * (gamma + 2.0).sqrt()
        / (2.0 * c * (1.0 - eps) * ((gamma + 1.0).sqrt() - gamma.sqrt())))
}

/// `x^{-1/2} ln(e / (x gamma))`.
pub fn xm2_lhs(x: f64, gamma: f64) -> f64 {
    (1.0 - (x * gamma).ln()) / x.sqrt()
}

/// Smallest `m` for which the defining equation of `x_{m,2}` has a root
/// below `1/(gamma+2)`: the left side evaluated there, times
/// `(gamma + 1)/(eps^2 h(gamma))`.
pub fn m2(gamma: f64, eps: f64) -> Result<f64> {
    check_common(1.0, eps, 1.0)?;
    ensure!(gamma > 0.0, "gamma must be positive");
    Ok((gamma + 1.0) / (eps * eps * h_gamma(gamma)) * xm2_lhs(1.0 / (gamma + 2.0), gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_positive_at_the_quoted_points() {
        let eps = 6.0 / 7.0;
        let (j1, _) = example1_rate(16.0, 0.492, eps, 0.5).unwrap();
        let (_, j2) = example1_rate(16.0, 0.43, eps, 0.5).unwrap();
        assert!(j1 > 0.0 && j2 > 0.0, "{j1} {j2}");
        assert!(example1_rate(16.0, 0.5, eps, 0.5).is_err());
    }

    #[test]
    fn entropy_vanishes_at_zero() {
        let mut last = f64::NEG_INFINITY;
        for k in 1..12 {
            let v = entropy_beta(10f64.powi(-k));
            assert!(v < 0.0 && v > last);
            last = v;
        }
        assert!(last.abs() < 1e-9);
    }

    #[test]
    fn example2_positive_inside_the_quoted_interval() {
        for x in [0.02, 0.2, 0.45] {
            let (k1, k2) = example2_rate(500.0, 1.0, x, 0.6, 0.5).unwrap();
            assert!(k1 > 0.0 && k2 > 0.0, "x = {x}: {k1} {k2}");
        }
        let (k1, k2) = example2_rate(39.0, 1.0, 0.3, 0.6, 0.5).unwrap();
        assert!(k1 > 0.0 && k2 > 0.0);
        assert!(example2_rate(39.0, 1.0, 0.5, 0.6, 0.5).is_err());
    }

    #[test]
    fn example2_limits_at_the_right_end() {
        let rho: f64 = 2.0;
        let end = 1.0 / (1.0 + rho);
        let want = rho / (1.0 + rho) * (rho / (1.0 + rho)).ln() + (1.0 / (1.0 + rho)) * (1.0 / (1.0 + rho)).ln();
        let (k1, k2) = example2_rate(50.0, rho, end * (1.0 - 1e-12), 0.6, 0.5).unwrap();
        assert!((k1 - want).abs() < 1e-4 && (k2 - want).abs() < 1e-4, "{k1} {k2} {want}");
    }

    #[test]
    fn example3_thresholds() {
        assert!((h_gamma(1.0) - 3.0 / (3f64.sqrt() + 1.0).powi(2)).abs() < 1e-15);
        let m1v = m1(1.0, 0.6, 0.5).unwrap();
        let x = x_m1(m1v, 1.0, 0.6, 0.5).unwrap();
        assert!((x - 1.0 / 3.0).abs() < 1e-12, "{x}");
        assert!(x_m1(2.0 * m1v, 1.0, 0.6, 0.5).unwrap() < 1.0 / 3.0);
        let m2v = m2(1.0, 0.6).unwrap();
        let rhs = m2v * 0.36 * h_gamma(1.0) / 2.0;
        assert!((xm2_lhs(1.0 / 3.0, 1.0) - rhs).abs() < 1e-12);
    }

    #[test]
    fn example3_positive_above_the_threshold() {
        let (k1, k2) = example3_rate(100.0, 1.0, 0.3, 0.6, 0.5).unwrap();
        assert!(k1 > 0.0 && k2 > 0.0);
        assert!(example3_rate(100.0, 1.0, 0.34, 0.6, 0.5).is_err());
    }
}
