use serde::{Deserialize, Serialize};

use super::special::ln_choose;
use crate::error::{ensure, Result};

/// `psi(j) = 2 (sqrt(j + 1) - sqrt(j))`, a lower bound for `j^{-1/2}`.
pub fn psi(j: f64) -> f64 {
    2.0 / ((j + 1.0).sqrt() + j.sqrt())
}

fn check_sizes(mu: f64, nu: f64, n: f64) -> Result<()> {
    ensure!(mu >= 0.0 && nu >= 0.0, "set sizes must be non-negative");
    // With N = n + 1 the square roots stay real up to mu + nu = N.
    ensure!(mu + nu <= n + 1.0, "mu + nu = {} exceeds n + 1 = {}", mu + nu, n + 1.0);
    Ok(())
}

/// `h(mu, nu) = 4 (sqrt(N - nu) - sqrt(N - mu - nu)) (sqrt(N) - sqrt(N - nu))`,
/// `N = n + 1`: the product of psi-sums over `[n-mu-nu+1, n-nu]` and `[n-nu+1, n]`.
pub fn h(mu: f64, nu: f64, n: f64) -> Result<f64> {
    check_sizes(mu, nu, n)?;
    let big = n + 1.0;
    Ok(4.0 * ((big - nu).sqrt() - (big - mu - nu).sqrt()) * (big.sqrt() - (big - nu).sqrt()))
}

/// `g(mu, nu) = min(h(mu, nu), h(nu, mu))`.
pub fn g_min(mu: f64, nu: f64, n: f64) -> Result<f64> {
    Ok(h(mu, nu, n)?.min(h(nu, mu, n)?))
}

/// The pieces of the swap refinement for `r <= mu <= nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refinement {
    pub x1: f64,
    pub x2: f64,
    pub d_sign: f64,
    pub d1: f64,
    pub d2: f64,
    /// `g(mu, nu) + d`, with `d = d1` when `D >= 0` and `d2` otherwise.
    pub g: f64,
}

pub fn refinement(mu: f64, nu: f64, r: f64, n: f64) -> Result<Refinement> {
    check_sizes(mu, nu, n)?;
    ensure!(r >= 0.0 && r <= mu && mu <= nu, "need 0 <= r <= mu <= nu");
    let big = n + 1.0;
    let s = |x: f64| x.sqrt();
    let a = s(big - mu);
    let x1 = 2.0 * (2.0 * a - s(big - mu - r) - s(big - mu + r));
    let x2 = 2.0 * (s(big - mu - nu + r) - s(big - mu - nu) - s(big) + s(big - r));
    let d_sign = s(big - mu - r) + s(big - mu + r) - s(big - mu - nu + r) - s(big - r);
    let d1 = 4.0
        * (2.0 * a - s(big - mu - r) - s(big - mu + r))
        * (s(big - mu - r) - s(big - mu - nu) - s(big) + s(big - mu + r));
    let d2 = 4.0
        * (s(big - mu - nu + r) - s(big - mu - nu) - s(big) + s(big - r))
        * (2.0 * a - s(big - mu - nu + r) - s(big - r));
    let d = if d_sign >= 0.0 { d1 } else { d2 };
    Ok(Refinement { x1, x2, d_sign, d1, d2, g: g_min(mu, nu, n)? + d })
}

/// Inputs of the isolation bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolationBoundParams {
    pub n: u64,
    pub m: u64,
    pub mu: u64,
    pub nu: u64,
    pub eps: f64,
    /// Must equal `1 - (mu + nu)/n` when given.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub r: Option<u64>,
}

fn default_c() -> f64 {
    0.5
}

impl IsolationBoundParams {
    pub fn new(n: u64, m: u64, mu: u64, nu: u64, eps: f64) -> Self {
        Self { n, m, mu, nu, eps, delta: None, c: 0.5, r: None }
    }

    /// Validates and returns `delta`.
    fn validate(&self) -> Result<f64> {
        ensure!(self.m >= 1, "m must be positive");
        ensure!(self.mu >= 1 && self.nu >= 1, "set sizes must be positive");
        ensure!(self.mu + self.nu <= self.n, "mu + nu exceeds n");
        ensure!(self.eps > 0.0 && self.eps < 1.0, "eps = {} must lie in (0, 1)", self.eps);
        ensure!(self.c > 0.0, "c = {} must be positive", self.c);
        let delta = 1.0 - (self.mu + self.nu) as f64 / self.n as f64;
        if let Some(given) = self.delta {
            ensure!((given - delta).abs() <= 1e-9, "delta = {given} is inconsistent with mu + nu = (1 - {delta}) n");
        }
        ensure!(delta >= 1e-6, "delta = {delta} must be at least 1e-6");
        Ok(delta)
    }
}

/// `c(eps, delta) = 2 eps^2 sqrt(delta) / (1 + sqrt(delta))^2`.
pub fn c_eps_delta(eps: f64, delta: f64) -> f64 {
    let sd = delta.sqrt();
    2.0 * eps * eps * sd / ((1.0 + sd) * (1.0 + sd))
}

/// A bound reported through its logarithm so that vacuous values stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBound {
    pub ln: f64,
}

impl LogBound {
    pub fn value(self) -> f64 {
        self.ln.exp()
    }
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Bound for one fixed pair `(A, B)`:
/// `exp(-m c(eps, delta) mu nu/(mu + nu)) + exp(-m c (1 - eps) g)`, where `g`
/// is `g(mu, nu)` or, when `r` is set, `g(mu, nu, r)`.
pub fn pair_probability_bound(p: &IsolationBoundParams) -> Result<LogBound> {
    let delta = p.validate()?;
    let (mu, nu) = (p.mu.min(p.nu) as f64, p.mu.max(p.nu) as f64);
    let n = p.n as f64;
    let m = p.m as f64;
    let g = match p.r {
        None => g_min(mu, nu, n)?,
        Some(r) => refinement(mu, nu, r as f64, n)?.g,
    };
    let first = -m * c_eps_delta(p.eps, delta) * mu * nu / (mu + nu);
    let second = -m * p.c * (1.0 - p.eps) * g;
    Ok(LogBound { ln: ln_add_exp(first, second) })
}

/// Union bound over all pairs.
///
/// Without `r`: `2 C(n, mu+nu) C(mu+nu, mu) exp(-m H)` with
/// `H = min(c(eps, delta) mu nu/(mu+nu), c (1 - eps) g(mu, nu))`.
/// With `r`: `C(n, mu+nu) C(mu, r) C(nu, r)` times the refined pair bound,
/// roles of `mu` and `nu` swapped if needed so that `r <= mu <= nu`.
pub fn pair_isolation_bound(p: &IsolationBoundParams) -> Result<LogBound> {
    let delta = p.validate()?;
    let (n, mu, nu) = (p.n, p.mu, p.nu);
    let ln_sets = ln_choose(n, mu + nu)?;
    match p.r {
        None => {
            let (muf, nuf) = (mu as f64, nu as f64);
            let hh = (c_eps_delta(p.eps, delta) * muf * nuf / (muf + nuf))
                .min(p.c * (1.0 - p.eps) * g_min(muf, nuf, n as f64)?);
            Ok(LogBound { ln: 2f64.ln() + ln_sets + ln_choose(mu + nu, mu)? - p.m as f64 * hh })
        }
        Some(r) => {
            let (small, large) = (mu.min(nu), mu.max(nu));
            ensure!(r <= small, "r = {r} exceeds min(mu, nu) = {small}");
            let pair = pair_probability_bound(p)?;
            Ok(LogBound { ln: ln_sets + ln_choose(small, r)? + ln_choose(large, r)? + pair.ln })
        }
    }
}
