use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{CellFilter, ExperimentConfig, OmegaRule, StatSpec, TestSpec};
use crate::analytic::z_sigma;
use crate::error::{Error, Result};
use crate::generators::{generate, GenMethod, Sample};
use crate::maxtree::{forest_m1, min_connector_count, prefix_maxtree_present, scaled_root_component};
use crate::oracle::{Statistic, MAX_CHORDS};
use crate::rng;
use crate::stats::{
    degree_cap_violations, degree_report, is_connected, loop_count, parallel_pair_count, prefix_length,
};

/// Runs handled by one task; results are merged in chunk order.
const CHUNK: usize = 256;

/// One point of the model grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub id: String,
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub method: GenMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub runs: usize,
}

impl Cell {
    pub fn selected_by(&self, f: &CellFilter) -> bool {
        f.n.as_ref().is_none_or(|v| v.contains(&self.n))
            && f.m.as_ref().is_none_or(|v| v.contains(&self.m))
            && f.methods.as_ref().is_none_or(|v| v.contains(&self.method))
    }

    /// Cells sharing everything but `n` form a group for fits and trends.
    pub fn group_key(&self) -> String {
        match self.delta {
            Some(d) => format!("m={} method={} delta={d}", self.m, self.method),
            None => format!("m={} method={}", self.m, self.method),
        }
    }
}

pub fn expand_cells(cfg: &ExperimentConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for block in &cfg.grid {
        let runs = block.runs.unwrap_or(cfg.runs);
        if runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        let deltas: Vec<Option<f64>> = match &block.delta {
            Some(ds) => ds.iter().map(|&d| Some(d)).collect(),
            None => vec![None],
        };
        for &n in &block.n {
            for &m in &block.m {
                for &method in &block.methods {
                    for &delta in &deltas {
                        let index = cells.len();
                        cells.push(Cell { id: format!("c{index}"), index, n, m, method, delta, runs });
                    }
                }
            }
        }
    }
    Ok(cells)
}

/// A per-run value.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Scalar(f64),
    Vector(Vec<u32>),
}

/// A statistic with its cell-dependent parameters resolved.
#[derive(Debug, Clone)]
pub(crate) enum Prepared {
    LoopCount,
    ParallelPairs,
    Connected,
    SpanningRecursive,
    LargestMaxTree,
    ScaledRootComponent(usize),
    DegreeL1(f64),
    MinPrefixDegree(f64),
    DegreeCaps { sigma: f64, z: f64, a: f64 },
    PrefixMaxtree(usize),
    ConnectorsExist(usize),
    MinConnectorCount(usize),
    Exact(Statistic),
}

fn config_error(id: &str, cell: &Cell, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!(
        "statistic {id:?} in cell {} (n={}, m={}, method={}): {msg}",
        cell.id, cell.n, cell.m, cell.method
    ))
}

pub fn resolve_omega(rule: OmegaRule, n: usize) -> usize {
    match rule {
        OmegaRule::Fixed(w) => w,
        OmegaRule::LogPower(p) => ((n as f64).ln().powf(p).floor() as usize).max(2),
    }
}

pub fn resolve_mu(exponent: f64, n: usize) -> usize {
    prefix_length(n, exponent)
}

pub(crate) fn prepare(id: &str, spec: &StatSpec, cell: &Cell) -> Result<Prepared> {
    let err = |msg: String| config_error(id, cell, msg);
    let needs_process = |what: &str| -> Result<()> {
        if cell.method != GenMethod::Exponential || cell.delta.is_some() {
            return Err(err(format!("{what} needs the exponential process (method exp, no delta)")));
        }
        Ok(())
    };
    let check_a = |a: f64| -> Result<()> {
        let top = cell.m as f64 / (cell.m as f64 + 2.0);
        if !(a > 0.0 && a < top) {
            return Err(err(format!("a = {a} must lie in (0, m/(m+2)) = (0, {top})")));
        }
        Ok(())
    };
    Ok(match *spec {
        StatSpec::LoopCount {} => Prepared::LoopCount,
        StatSpec::ParallelPairs {} => Prepared::ParallelPairs,
        StatSpec::Connected {} => Prepared::Connected,
        StatSpec::SpanningRecursive {} => Prepared::SpanningRecursive,
        StatSpec::LargestMaxTree {} => {
            if cell.m != 1 {
                return Err(err("largest_max_tree needs m = 1".into()));
            }
            Prepared::LargestMaxTree
        }
        StatSpec::ScaledRootComponent { r } => {
            if r < 1 || r > cell.n {
                return Err(err(format!("root r = {r} out of range 1..={}", cell.n)));
            }
            Prepared::ScaledRootComponent(r)
        }
        StatSpec::DegreeL1 { a } => {
            needs_process("degree_l1")?;
            check_a(a)?;
            Prepared::DegreeL1(a)
        }
        StatSpec::MinPrefixDegree { a } => {
            needs_process("min_prefix_degree")?;
            check_a(a)?;
            Prepared::MinPrefixDegree(a)
        }
        StatSpec::DegreeCapViolations { sigma, z_factor, a } => {
            if !(a > 0.0 && a < 1.0) {
                return Err(err(format!("a = {a} must lie in (0, 1)")));
            }
            let z = z_sigma(sigma)
                .map_err(|e| err(e.to_string()))?
                .ok_or_else(|| err(format!("z(sigma) does not exist for sigma = {sigma}")))?;
            let z = z_factor * z;
            if z <= 1.0 {
                return Err(err(format!("z = {z} must exceed 1")));
            }
            Prepared::DegreeCaps { sigma, z, a }
        }
        StatSpec::PrefixMaxtree { mu_exponent } => {
            if !(mu_exponent > 0.0 && mu_exponent <= 1.0) {
                return Err(err(format!("mu_exponent = {mu_exponent} must lie in (0, 1]")));
            }
            Prepared::PrefixMaxtree(resolve_mu(mu_exponent, cell.n))
        }
        StatSpec::ConnectorsExist { omega } | StatSpec::MinConnectorCount { omega } => {
            let w = resolve_omega(omega, cell.n);
            if w < 2 || w >= cell.n {
                return Err(err(format!("omega = {w} must satisfy 2 <= omega < n")));
            }
            if matches!(spec, StatSpec::ConnectorsExist { .. }) {
                Prepared::ConnectorsExist(w)
            } else {
                Prepared::MinConnectorCount(w)
            }
        }
        StatSpec::Exact { ref statistic, mu } => {
            let s = Statistic::from_name(statistic, mu).map_err(|e| err(e.to_string()))?;
            s.supports(cell.m).map_err(|e| err(e.to_string()))?;
            Prepared::Exact(s)
        }
    })
}

impl Prepared {
    pub(crate) fn is_vector(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    /// Whether every value is 0 or 1.
    pub(crate) fn is_indicator(&self) -> bool {
        matches!(self, Self::Connected | Self::SpanningRecursive | Self::PrefixMaxtree(_) | Self::ConnectorsExist(_))
    }

    fn evaluate(&self, s: &Sample) -> Result<Observation> {
        let g = &s.graph;
        let flag = |b: bool| Observation::Scalar(if b { 1.0 } else { 0.0 });
        Ok(match *self {
            Self::LoopCount => Observation::Scalar(loop_count(g) as f64),
            Self::ParallelPairs => Observation::Scalar(parallel_pair_count(g) as f64),
            Self::Connected => flag(is_connected(g)),
            Self::SpanningRecursive => flag(crate::maxtree::spanning_recursive_exists(g)),
            Self::LargestMaxTree => Observation::Scalar(forest_m1(g)?.largest() as f64),
            Self::ScaledRootComponent(r) => Observation::Scalar(scaled_root_component(g, r)?),
            Self::DegreeL1(a) => Observation::Scalar(degree_report(g, s.process.as_ref(), a)?.l1),
            Self::MinPrefixDegree(a) => {
                Observation::Scalar(degree_report(g, s.process.as_ref(), a)?.min_prefix_degree as f64)
            }
            Self::DegreeCaps { sigma, z, a } => Observation::Scalar(degree_cap_violations(g, sigma, z, a)? as f64),
            Self::PrefixMaxtree(mu) => flag(prefix_maxtree_present(g, mu)),
            Self::ConnectorsExist(w) => flag(min_connector_count(g, w)? >= 1),
            Self::MinConnectorCount(w) => Observation::Scalar(min_connector_count(g, w)? as f64),
            Self::Exact(stat) => Observation::Vector(stat.evaluate(g)?),
        })
    }
}

/// Raw per-cell results: scalar values in run order and vector histograms.
#[derive(Debug, Clone, Default)]
pub struct CellData {
    pub scalars: BTreeMap<String, Vec<f64>>,
    pub histograms: BTreeMap<String, BTreeMap<Vec<u32>, u64>>,
}

/// Checks everything that can be checked without sampling and returns the
/// resolved statistics of every cell.
pub(crate) fn validate(cfg: &ExperimentConfig, cells: &[Cell]) -> Result<Vec<Vec<(String, Prepared)>>> {
    if cfg.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let mut prepared = Vec::with_capacity(cells.len());
    for cell in cells {
        if cell.n == 0 || cell.m == 0 {
            return Err(Error::Config(format!("cell {} needs n >= 1 and m >= 1", cell.id)));
        }
        if let Some(d) = cell.delta {
            if cell.method != GenMethod::Sequential || cell.m != 1 || !d.is_finite() || d <= -1.0 {
                return Err(Error::Config(format!(
                    "cell {}: delta = {d} needs method seq, m = 1 and delta > -1",
                    cell.id
                )));
            }
        }
        let mut list = Vec::new();
        for (id, spec) in &cfg.statistics {
            list.push((id.clone(), prepare(id, spec, cell)?));
        }
        prepared.push(list);
    }
    for test in &cfg.tests {
        let Some(stat) = test.statistic() else {
            continue;
        };
        if !cfg.statistics.contains_key(stat) {
            return Err(Error::Config(format!("test {} refers to unknown statistic {stat:?}", test.kind())));
        }
        let filter = test.filter().expect("statistic tests carry a filter");
        let selected: Vec<(&Cell, &Prepared)> = cells
            .iter()
            .zip(&prepared)
            .filter(|(c, _)| c.selected_by(filter))
            .map(|(c, list)| (c, &list.iter().find(|(id, _)| id == stat).unwrap().1))
            .collect();
        if selected.is_empty() {
            return Err(Error::Config(format!("test {} on {stat:?} selects no cells", test.kind())));
        }
        let fail = |msg: String| Err(Error::Config(format!("test {} on {stat:?}: {msg}", test.kind())));
        for &(cell, p) in &selected {
            match test {
                TestSpec::ChiSquareVsOracle { .. } => {
                    if !p.is_vector() {
                        return fail("needs an exact statistic".into());
                    }
                    if cell.n * cell.m > MAX_CHORDS {
                        return fail(format!("cell {} has mn = {} > {MAX_CHORDS}", cell.id, cell.n * cell.m));
                    }
                }
                TestSpec::FrequencyVsFormula { formula, .. } => {
                    if !p.is_indicator() {
                        return fail("needs an indicator statistic".into());
                    }
                    if *formula == super::config::FrequencyFormula::ConnectedG1 && cell.m != 1 {
                        return fail(format!("connected_g1 needs m = 1, cell {} has m = {}", cell.id, cell.m));
                    }
                }
                TestSpec::KsVsMixture { .. } | TestSpec::MomentsVsMixture { .. } => {
                    if !matches!(p, Prepared::ScaledRootComponent(_)) {
                        return fail("needs scaled_root_component".into());
                    }
                    if cell.m != 1 {
                        return fail("the beta mixture describes m = 1".into());
                    }
                    if matches!(test, TestSpec::KsVsMixture { .. }) && cell.runs < 30 {
                        return fail(format!("cell {} has fewer than 30 runs", cell.id));
                    }
                }
                _ => {
                    if p.is_vector() {
                        return fail("needs a scalar statistic".into());
                    }
                }
            }
        }
        if matches!(test, TestSpec::LoglogFit { .. }) {
            let mut groups: BTreeMap<String, usize> = BTreeMap::new();
            for (c, _) in &selected {
                *groups.entry(c.group_key()).or_default() += 1;
            }
            if let Some((g, k)) = groups.iter().find(|(_, &k)| k < 4) {
                return fail(format!("group {g} has {k} grid points, a fit needs at least 4"));
            }
        }
    }
    Ok(prepared)
}

/// Per-statistic scalars and histograms of one chunk of runs.
type ChunkData = (Vec<Vec<f64>>, Vec<BTreeMap<Vec<u32>, u64>>);

fn run_chunk(
    master: u64,
    cell: &Cell,
    stats: &[(String, Prepared)],
    runs: std::ops::Range<usize>,
) -> Result<ChunkData> {
    let mut scalars = vec![Vec::with_capacity(runs.len()); stats.len()];
    let mut hists = vec![BTreeMap::new(); stats.len()];
    for run in runs {
        let mut s = rng::run_stream(master, cell.index as u64, run as u64);
        let sample = generate(cell.method, cell.n, cell.m, cell.delta, &mut s)?;
        for (k, (_, p)) in stats.iter().enumerate() {
            match p.evaluate(&sample)? {
                Observation::Scalar(x) => scalars[k].push(x),
                Observation::Vector(v) => *hists[k].entry(v).or_insert(0) += 1,
            }
        }
    }
    Ok((scalars, hists))
}

/// Samples one cell. Run `i` always uses the stream derived from
/// `(seed, cell index, i)`, and chunks are merged in order, so the result is
/// the same for any number of workers.
pub(crate) fn sample_cell(master: u64, cell: &Cell, stats: &[(String, Prepared)]) -> Result<CellData> {
    let chunks: Vec<std::ops::Range<usize>> =
        (0..cell.runs).step_by(CHUNK).map(|s| s..(s + CHUNK).min(cell.runs)).collect();
    let parts: Vec<Result<ChunkData>> = chunks.into_par_iter().map(|r| run_chunk(master, cell, stats, r)).collect();
    let mut data = CellData::default();
    for part in parts {
        let (scalars, hists) = part?;
        for (k, (id, p)) in stats.iter().enumerate() {
            if p.is_vector() {
                let h = data.histograms.entry(id.clone()).or_default();
                for (v, c) in &hists[k] {
                    *h.entry(v.clone()).or_insert(0) += c;
                }
            } else {
                data.scalars.entry(id.clone()).or_default().extend_from_slice(&scalars[k]);
            }
        }
    }
    Ok(data)
}
