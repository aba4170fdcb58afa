use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::run::Cell;
use crate::error::{Error, Result};
use crate::oracle::format_value;

pub const REPORT_SCHEMA: &str = "lcdgraph-report/1";
pub const CSV_SCHEMA: &str = "lcdgraph-report-csv/1";
pub const CSV_COLUMNS: [&str; 10] =
    ["cell_id", "n", "m", "method", "statistic", "mean", "stderr", "test", "value", "p_or_band"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantiles {
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
}

/// Aggregates of one scalar statistic in one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub quantiles: Quantiles,
}

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Summary {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("cannot summarize zero values".into()));
        }
        let count = values.len();
        let k = count as f64;
        let mean = values.iter().sum::<f64>() / k;
        let variance = if count > 1 { values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            count,
            mean,
            variance,
            stderr: (variance / k).sqrt(),
            min: sorted[0],
            max: sorted[count - 1],
            quantiles: Quantiles {
                q05: quantile(&sorted, 0.05),
                q25: quantile(&sorted, 0.25),
                q50: quantile(&sorted, 0.5),
                q75: quantile(&sorted, 0.75),
                q95: quantile(&sorted, 0.95),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramEntry {
    pub value: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    #[serde(flatten)]
    pub cell: Cell,
    pub statistics: BTreeMap<String, Summary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub histograms: BTreeMap<String, Vec<HistogramEntry>>,
}

pub fn histogram_entries(h: &BTreeMap<Vec<u32>, u64>) -> Vec<HistogramEntry> {
    h.iter().map(|(v, &count)| HistogramEntry { value: format_value(v), count }).collect()
}

/// The outcome of one declared check on one cell or group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutcome {
    pub test: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<String>,
    /// Cell id for per-cell tests.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    /// Group label (or check label) for fits, trends and fixed checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<(f64, f64)>,
    pub threshold: String,
    pub pass: bool,
    pub detail: String,
}

impl TestOutcome {
    pub fn new(test: &str, value: f64, threshold: String, pass: bool) -> Self {
        Self {
            test: test.into(),
            statistic: None,
            cell: None,
            group: None,
            n: None,
            m: None,
            method: None,
            value,
            p: None,
            band: None,
            threshold,
            pass,
            detail: String::new(),
        }
    }

    pub fn on_cell(mut self, cell: &Cell) -> Self {
        self.cell = Some(cell.id.clone());
        self.n = Some(cell.n);
        self.m = Some(cell.m);
        self.method = Some(cell.method.to_string());
        self
    }

    pub fn p_or_band(&self) -> String {
        match (self.p, self.band) {
            (Some(p), _) => format!("{p}"),
            (None, Some((a, b))) => format!("[{a},{b}]"),
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub seed: u64,
    pub version: String,
    pub rng: String,
    pub csv_schema: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub name: String,
    pub provenance: Provenance,
    pub cells: Vec<CellReport>,
    pub tests: Vec<TestOutcome>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &TestOutcome> {
        self.tests.iter().filter(|t| !t.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per (cell, statistic) aggregate, then one row per test outcome.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for c in &self.cells {
            for (stat, s) in &c.statistics {
                w.write_record([
                    c.cell.id.clone(),
                    c.cell.n.to_string(),
                    c.cell.m.to_string(),
                    c.cell.method.to_string(),
                    stat.clone(),
                    format!("{}", s.mean),
                    format!("{}", s.stderr),
                    String::new(),
                    String::new(),
                    String::new(),
                ])
                .map_err(csv_err)?;
            }
        }
        for t in &self.tests {
            w.write_record([
                t.cell.clone().or_else(|| t.group.clone()).unwrap_or_default(),
                t.n.map(|v| v.to_string()).unwrap_or_default(),
                t.m.map(|v| v.to_string()).unwrap_or_default(),
                t.method.clone().unwrap_or_default(),
                t.statistic.clone().unwrap_or_default(),
                String::new(),
                String::new(),
                t.test.clone(),
                format!("{}", t.value),
                t.p_or_band(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}
