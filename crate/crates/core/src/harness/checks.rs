//! Evaluation of declared tests against sampled cells.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::config::{Aggregate, Direction, FrequencyFormula, SlopeFormula, TestSpec, Threshold};
use super::report::{Summary, TestOutcome};
use super::run::{Cell, CellData, Prepared};
use super::stattest::{chi_square, ks_test_mixture, loglog_fit};
use crate::analytic::{
    beta_mixture, connect_probability, connected_g1_exact, eps_rho, example1_rate, example2_rate, x_m2, z_sigma,
};
use crate::error::Result;
use crate::oracle::{
    exact_distribution, martingale_step_check, recursive_tree_gf_check, stirling_identity_check, RootKind,
    MAX_TREE_SIZE,
};
use crate::rng;

pub fn expected_slope(formula: SlopeFormula, m: usize) -> f64 {
    let m = m as f64;
    match formula {
        SlopeFormula::Loops => (m + 1.0) / 4.0,
        SlopeFormula::ParallelPairs => (m * m - 1.0) / 16.0,
    }
}

pub fn threshold_value(t: Threshold, n: usize, m: usize) -> f64 {
    match t {
        Threshold::Constant { value } => value,
        Threshold::PrefixDegreeFloor { a } => {
            let m = m as f64;
            let eps = m / (m + 2.0) - a;
            (n as f64).powf(eps * (m + 2.0) / (2.0 * m))
        }
    }
}

fn aggregate(values: &[f64], how: Aggregate) -> Result<f64> {
    let s = Summary::of(values)?;
    Ok(match how {
        Aggregate::Mean => s.mean,
        Aggregate::Median => s.quantiles.q50,
    })
}

/// Selected cells grouped by everything but `n`, each ordered by `n`.
fn groups<'a>(selected: &[&'a Cell]) -> BTreeMap<String, Vec<&'a Cell>> {
    let mut out: BTreeMap<String, Vec<&Cell>> = BTreeMap::new();
    for &c in selected {
        out.entry(c.group_key()).or_default().push(c);
    }
    for v in out.values_mut() {
        v.sort_by_key(|c| c.n);
    }
    out
}

pub(crate) struct Context<'a> {
    pub seed: u64,
    pub cells: &'a [Cell],
    pub data: &'a [CellData],
    pub prepared: &'a [Vec<(String, Prepared)>],
}

impl Context<'_> {
    fn scalars(&self, c: &Cell, stat: &str) -> &[f64] {
        &self.data[c.index].scalars[stat]
    }

    fn prepared(&self, c: &Cell, stat: &str) -> &Prepared {
        &self.prepared[c.index].iter().find(|(id, _)| id == stat).expect("validated statistic").1
    }
}

pub(crate) fn evaluate(test: &TestSpec, ctx: &Context) -> Result<Vec<TestOutcome>> {
    let kind = test.kind();
    let selected: Vec<&Cell> = match test.filter() {
        Some(f) => ctx.cells.iter().filter(|c| c.selected_by(f)).collect(),
        None => Vec::new(),
    };
    let stat = test.statistic().unwrap_or_default();
    let mut out = Vec::new();
    let mut push = |mut o: TestOutcome| {
        if !stat.is_empty() {
            o.statistic = Some(stat.to_owned());
        }
        out.push(o);
    };
    match *test {
        TestSpec::ChiSquareVsOracle { min_p, max_tv, .. } => {
            for c in selected {
                let Prepared::Exact(s) = *ctx.prepared(c, stat) else { unreachable!("validated") };
                let exact = exact_distribution(c.n, c.m, s)?;
                let cs = chi_square(&ctx.data[c.index].histograms[stat], &exact)?;
                let pass = cs.p > min_p && cs.total_variation < max_tv;
                let mut o =
                    TestOutcome::new(kind, cs.total_variation, format!("TV < {max_tv}, p > {min_p}"), pass).on_cell(c);
                o.p = Some(cs.p);
                o.detail = format!(
                    "{s}: TV {:.5}, chi2 {:.2} on {} df, p {:.4}, support {}, outside support {}",
                    cs.total_variation,
                    cs.statistic,
                    cs.df,
                    cs.p,
                    exact.counts.len(),
                    cs.outside_support
                );
                push(o);
            }
        }
        TestSpec::KsVsMixture { r, max_distance, .. } => {
            for c in selected {
                let mix = beta_mixture(r, c.delta)?;
                let (d, p) = ks_test_mixture(ctx.scalars(c, stat), &mix)?;
                let mut o = TestOutcome::new(kind, d, format!("D < {max_distance}"), d < max_distance).on_cell(c);
                o.p = Some(p);
                o.detail = format!("r = {r}, delta = {:?}: D {d:.5}, p {p:.4}", c.delta);
                push(o);
            }
        }
        TestSpec::MomentsVsMixture { r, orders, rel_tol, .. } => {
            for c in selected {
                let mix = beta_mixture(r, c.delta)?;
                let xs = ctx.scalars(c, stat);
                for l in 1..=orders {
                    let empirical = xs.iter().map(|x| x.powi(l as i32)).sum::<f64>() / xs.len() as f64;
                    let exact = mix.moment(l);
                    let rel = (empirical - exact).abs() / exact;
                    let mut o =
                        TestOutcome::new(kind, rel, format!("relative error <= {rel_tol}"), rel <= rel_tol).on_cell(c);
                    o.group = Some(format!("order {l}"));
                    o.detail =
                        format!("r = {r}, delta = {:?}, l = {l}: empirical {empirical:.6}, limit {exact:.6}", c.delta);
                    push(o);
                }
            }
        }
        TestSpec::LoglogFit { model, expected, rel_tol, .. } => {
            for (key, cells) in groups(&selected) {
                let ns: Vec<f64> = cells.iter().map(|c| c.n as f64).collect();
                let ys: Vec<f64> =
                    cells.iter().map(|c| aggregate(ctx.scalars(c, stat), Aggregate::Mean)).collect::<Result<_>>()?;
                let fit = loglog_fit(&ns, &ys, model)?;
                let target = expected_slope(expected, cells[0].m);
                let pass = (fit.alpha - target).abs() <= rel_tol * target.abs();
                let mut o =
                    TestOutcome::new(kind, fit.alpha, format!("|slope - {target}| <= {rel_tol} * {target}"), pass);
                o.group = Some(key);
                o.m = Some(cells[0].m);
                o.method = Some(cells[0].method.to_string());
                o.band = Some(fit.band);
                o.detail = format!(
                    "{model:?} fit: slope {:.4} (95% band [{:.4}, {:.4}]), intercept {:.4}, expected {target:.4}, means {:?}",
                    fit.alpha, fit.band.0, fit.band.1, fit.beta, ys
                );
                push(o);
            }
        }
        TestSpec::FrequencyVsFormula { formula, max_se, .. } => {
            for c in selected {
                let xs = ctx.scalars(c, stat);
                let freq = xs.iter().sum::<f64>() / xs.len() as f64;
                let p = match formula {
                    FrequencyFormula::ConnectedG1 => connected_g1_exact(c.n as u64)?,
                    FrequencyFormula::SpanningRecursive => connect_probability(c.n as u64, c.m as u64)?,
                };
                let se = (p * (1.0 - p) / xs.len() as f64).sqrt();
                let z = if se > 0.0 {
                    (freq - p).abs() / se
                } else if freq == p {
                    0.0
                } else {
                    f64::INFINITY
                };
                let mut o = TestOutcome::new(kind, z, format!("|freq - p| <= {max_se} SE"), z <= max_se).on_cell(c);
                o.detail = format!("frequency {freq:.6}, formula {p:.6}, SE {se:.2e}, {z:.2} SE apart");
                push(o);
            }
        }
        TestSpec::ExactValue { value, .. } => {
            for c in selected {
                let xs = ctx.scalars(c, stat);
                let off = xs.iter().filter(|&&x| x != value).count();
                let frac = 1.0 - off as f64 / xs.len() as f64;
                let mut o = TestOutcome::new(kind, frac, format!("every run equals {value}"), off == 0).on_cell(c);
                o.detail = format!("{off} of {} runs differ from {value}", xs.len());
                push(o);
            }
        }
        TestSpec::FractionSatisfying { relation, threshold, min_fraction, .. } => {
            for c in selected {
                let xs = ctx.scalars(c, stat);
                let t = threshold_value(threshold, c.n, c.m);
                let ok = xs.iter().filter(|&&x| relation.holds(x, t)).count();
                let frac = ok as f64 / xs.len() as f64;
                let mut o = TestOutcome::new(
                    kind,
                    frac,
                    format!("fraction with value {} {t:.4} >= {min_fraction}", relation.symbol()),
                    frac >= min_fraction,
                )
                .on_cell(c);
                o.detail = format!("{ok} of {} runs satisfy value {} {t:.4}", xs.len(), relation.symbol());
                push(o);
            }
        }
        TestSpec::Trend { aggregate: how, direction, .. } => {
            for (key, cells) in groups(&selected) {
                let ys: Vec<f64> = cells.iter().map(|c| aggregate(ctx.scalars(c, stat), how)).collect::<Result<_>>()?;
                let monotone = ys.windows(2).all(|w| match direction {
                    Direction::Increasing => w[1] > w[0],
                    Direction::Decreasing => w[1] < w[0],
                });
                let pass = cells.len() >= 2 && monotone;
                let ns: Vec<usize> = cells.iter().map(|c| c.n).collect();
                let mut o = TestOutcome::new(
                    kind,
                    ys.last().copied().unwrap_or(f64::NAN) - ys.first().copied().unwrap_or(f64::NAN),
                    format!("{how:?} strictly {direction:?} in n").to_lowercase(),
                    pass,
                );
                o.group = Some(key);
                o.m = Some(cells[0].m);
                o.method = Some(cells[0].method.to_string());
                o.detail = format!("n {ns:?}: {how:?} {ys:?}");
                push(o);
            }
        }
        TestSpec::ConnectivityAsymptotic { n, rel_tol } => {
            let exact = connected_g1_exact(n)?;
            let approx = 0.5 * (std::f64::consts::PI / n as f64).sqrt();
            let rel = (exact - approx).abs() / approx;
            let mut o = TestOutcome::new(kind, rel, format!("relative difference <= {rel_tol}"), rel <= rel_tol);
            o.n = Some(n as usize);
            o.m = Some(1);
            o.detail = format!("P(connected) = {exact:.6e}, 0.5 sqrt(pi/n) = {approx:.6e}");
            push(o);
        }
        TestSpec::BoundsReproduction {} => {
            for o in bounds_reproduction()? {
                push(o);
            }
        }
        TestSpec::ExactCombinatorics { max_stirling, max_tree, max_t, max_order } => {
            for o in exact_combinatorics(ctx.seed, max_stirling, max_tree, max_t, max_order)? {
                push(o);
            }
        }
    }
    Ok(out)
}

fn labelled(label: &str, value: f64, threshold: &str, pass: bool, detail: String) -> TestOutcome {
    let mut o = TestOutcome::new("bounds_reproduction", value, threshold.into(), pass);
    o.group = Some(label.into());
    o.detail = detail;
    o
}

/// The fixed numerical claims with `c = 1/2`.
pub fn bounds_reproduction() -> Result<Vec<TestOutcome>> {
    let c = 0.5;
    let mut out = Vec::new();
    let (j1, _) = example1_rate(16.0, 0.492, 6.0 / 7.0, c)?;
    out.push(labelled("J_{16,1}(0.492)", j1, "> 0", j1 > 0.0, format!("eps = 6/7: J1 = {j1:.6}")));
    let (_, j2) = example1_rate(16.0, 0.43, 6.0 / 7.0, c)?;
    out.push(labelled("J_{16,2}(0.43)", j2, "> 0", j2 > 0.0, format!("eps = 6/7: J2 = {j2:.6}")));
    for (m, x) in [(500.0, 0.02), (500.0, 0.2), (500.0, 0.45), (39.0, 0.30)] {
        let (k1, k2) = example2_rate(m, 1.0, x, 0.6, c)?;
        out.push(labelled(
            &format!("K_{{{m},i}}(1, {x})"),
            k1.min(k2),
            "min(K1, K2) > 0",
            k1 > 0.0 && k2 > 0.0,
            format!("eps = 0.6: K1 = {k1:.6}, K2 = {k2:.6}"),
        ));
    }
    let x = x_m2(100.0, 1.0, 0.6)?;
    let inside = x.is_some_and(|x| x > 0.15 && x < 0.16);
    out.push(labelled(
        "x_{100,2}(1)",
        x.unwrap_or(f64::NAN),
        "in (0.15, 0.16)",
        inside,
        format!("eps = 0.6: root {x:?}"),
    ));
    let z = z_sigma(0.75)?.unwrap_or(f64::NAN);
    let e = std::f64::consts::E;
    out.push(labelled("z(0.75)", z, "|z - e| <= 1e-10", (z - e).abs() <= 1e-10, format!("z = {z:.15}")));
    let eps0 = eps_rho(0.0)?;
    out.push(labelled("eps(0)", eps0, "== 1", eps0 == 1.0, format!("eps(0) = {eps0}")));
    Ok(out)
}

/// Exhaustive exact checks of the combinatorial identities.
pub fn exact_combinatorics(
    seed: u64,
    max_stirling: usize,
    max_tree: usize,
    max_t: u64,
    max_order: u32,
) -> Result<Vec<TestOutcome>> {
    let row = |label: &str, checked: usize, failed: usize, detail: String| {
        let mut o =
            TestOutcome::new("exact_combinatorics", failed as f64, "0 failures".into(), failed == 0 && checked > 0);
        o.group = Some(label.into());
        o.detail = format!("{checked} cases checked, {failed} failed; {detail}");
        o
    };
    let mut out = Vec::new();

    let (mut checked, mut failed) = (0, 0);
    for l in 2..=max_stirling {
        for k in 1..l {
            checked += 1;
            failed += usize::from(!stirling_identity_check(l, k)?);
        }
    }
    out.push(row("stirling identity", checked, failed, format!("1 <= k < l <= {max_stirling}")));

    let (mut checked, mut failed) = (0, 0);
    let mut s = rng::stream(rng::derive_seed(seed, u64::MAX, 0));
    for nu in 1..=max_tree.min(MAX_TREE_SIZE) {
        for _ in 0..4 {
            let z: Vec<BigRational> = (0..nu)
                .map(|_| {
                    BigRational::new(BigInt::from(s.random_range(-30i64..=30)), BigInt::from(s.random_range(1i64..=12)))
                })
                .collect();
            checked += 1;
            failed += usize::from(!recursive_tree_gf_check(nu, &z)?);
        }
    }
    out.push(row(
        "recursive tree generating function",
        checked,
        failed,
        format!("nu <= {max_tree}, random rational z"),
    ));

    let (mut checked, mut failed) = (0, 0);
    for kind in [RootKind::Looped, RootKind::Attached] {
        for t in 1..=max_t {
            for x in 1..=t {
                for l in 0..=max_order {
                    checked += 1;
                    failed += usize::from(!martingale_step_check(kind, x, t, 1, l)?);
                }
            }
        }
    }
    out.push(row("martingale one-step", checked, failed, format!("t <= {max_t}, l <= {max_order}, X and X - 1/2")));
    Ok(out)
}
