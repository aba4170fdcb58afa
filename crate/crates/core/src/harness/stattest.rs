//! Goodness-of-fit tests and the log-scale regression.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::gamma::gamma_ur;

use crate::analytic::BetaMixture;
use crate::error::{ensure, Result};
use crate::oracle::ExactDistribution;

/// Smallest expected count per pooled chi-square bin.
pub const MIN_EXPECTED: f64 = 5.0;

/// Kolmogorov distribution tail `Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS statistic `D` and its asymptotic p-value, with the
/// Stephens small-sample correction `(sqrt(n) + 0.12 + 0.11/sqrt(n)) D`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    ensure!(samples.len() >= 30, "the KS test needs at least 30 samples, got {}", samples.len());
    ensure!(samples.iter().all(|x| x.is_finite()), "samples must be finite");
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // Ties: the empirical CDF jumps once past the whole run of equal values.
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max(f - i as f64 / n).max(j as f64 / n - f);
        i = j;
    }
    let sn = n.sqrt();
    Ok((d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)))
}

pub fn ks_test_mixture(samples: &[f64], mixture: &BetaMixture) -> Result<(f64, f64)> {
    ks_test(samples, |x| mixture.cdf(x))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p: f64,
    pub bins: usize,
    pub total_variation: f64,
    /// Observations outside the exact support.
    pub outside_support: u64,
}

/// `1/2 sum |empirical - exact|` over the union of supports.
pub fn total_variation(empirical: &BTreeMap<Vec<u32>, u64>, exact: &ExactDistribution) -> f64 {
    let runs: u64 = empirical.values().sum();
    let mut tv = 0.0;
    for (v, &c) in &exact.counts {
        let p = c as f64 / exact.total as f64;
        let e = empirical.get(v).copied().unwrap_or(0) as f64 / runs as f64;
        tv += (e - p).abs();
    }
    for (v, &c) in empirical {
        if !exact.counts.contains_key(v) {
            tv += c as f64 / runs as f64;
        }
    }
    tv / 2.0
}

/// Pearson chi-square against the exact law. Support points are taken in
/// increasing order of probability and merged until every pooled bin expects
/// at least [`MIN_EXPECTED`] observations; a short final remainder joins the
/// previous bin. Observations outside the exact support give `p = 0`.
pub fn chi_square(empirical: &BTreeMap<Vec<u32>, u64>, exact: &ExactDistribution) -> Result<ChiSquare> {
    let runs: u64 = empirical.values().sum();
    ensure!(runs > 0, "chi-square needs at least one observation");
    let outside_support: u64 = empirical.iter().filter(|(v, _)| !exact.counts.contains_key(*v)).map(|(_, &c)| c).sum();
    let total_variation = total_variation(empirical, exact);
    if outside_support > 0 {
        return Ok(ChiSquare { statistic: f64::INFINITY, df: 0, p: 0.0, bins: 0, total_variation, outside_support });
    }
    let mut cells: Vec<(f64, f64)> = exact
        .counts
        .iter()
        .map(|(v, &c)| {
            let expected = runs as f64 * c as f64 / exact.total as f64;
            (expected, empirical.get(v).copied().unwrap_or(0) as f64)
        })
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (e, o) in cells {
        acc = (acc.0 + e, acc.1 + o);
        if acc.0 >= MIN_EXPECTED {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 {
        match bins.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => bins.push(acc),
        }
    }
    let statistic: f64 = bins.iter().map(|&(e, o)| (o - e) * (o - e) / e).sum();
    let df = bins.len().saturating_sub(1);
    let p = if df == 0 || statistic <= 0.0 { 1.0 } else { gamma_ur(df as f64 / 2.0, statistic / 2.0) };
    Ok(ChiSquare { statistic, df, p, bins: bins.len(), total_variation, outside_support })
}

/// Regressor of the log-scale fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `y = alpha ln n + beta`.
    Log,
    /// `y = alpha ln^2 n + beta`.
    LogSquared,
}

impl FitModel {
    pub fn regressor(self, n: f64) -> f64 {
        match self {
            Self::Log => n.ln(),
            Self::LogSquared => n.ln().powi(2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_stderr: f64,
    /// 95% confidence interval for `alpha` from the Student-t quantile.
    pub band: (f64, f64),
}

/// Least-squares fit of `ys` on the model regressor of `ns`.
pub fn loglog_fit(ns: &[f64], ys: &[f64], model: FitModel) -> Result<Fit> {
    ensure!(ns.len() == ys.len(), "grid and means differ in length");
    ensure!(ns.len() >= 4, "a fit needs at least 4 grid points, got {}", ns.len());
    ensure!(ns.iter().all(|&n| n > 0.0 && n.is_finite()), "grid values must be positive");
    ensure!(ys.iter().all(|y| y.is_finite()), "means must be finite");
    let xs: Vec<f64> = ns.iter().map(|&n| model.regressor(n)).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    ensure!(sxx > 1e-12 * mx.abs().max(1.0), "grid values are all equal");
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let alpha = sxy / sxx;
    let beta = my - alpha * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - alpha * x - beta).powi(2)).sum();
    let alpha_stderr = (rss / (k - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, k - 2.0).expect("positive degrees of freedom").inverse_cdf(0.975);
    Ok(Fit { alpha, beta, alpha_stderr, band: (alpha - t * alpha_stderr, alpha + t * alpha_stderr) })
}
