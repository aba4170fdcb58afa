//! Declarative Monte Carlo experiments: a JSON config names a model grid,
//! per-run statistics and checks; the runner samples every cell with seeds
//! derived from the master seed and produces a deterministic report.

mod checks;
mod config;
mod report;
mod run;
mod stattest;

use rayon::ThreadPoolBuilder;

pub use checks::{bounds_reproduction, exact_combinatorics, expected_slope, threshold_value};
pub use config::{
    Aggregate, CellFilter, Direction, ExperimentConfig, FrequencyFormula, GridBlock, OmegaRule, OutputPaths, Relation,
    SlopeFormula, StatSpec, TestSpec, Threshold,
};
pub use report::{
    quantile, CellReport, HistogramEntry, Provenance, Quantiles, Report, Summary, TestOutcome, CSV_COLUMNS, CSV_SCHEMA,
    REPORT_SCHEMA,
};
pub use run::{expand_cells, resolve_mu, resolve_omega, Cell, CellData, Observation};
pub use stattest::{
    chi_square, kolmogorov_tail, ks_test, ks_test_mixture, loglog_fit, total_variation, ChiSquare, Fit, FitModel,
    MIN_EXPECTED,
};

use crate::error::{Error, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "LCDGRAPH_WORKERS";

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(Error::Config(format!("{WORKERS_ENV} = {v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Validates the config, samples every cell and evaluates every test.
/// The report depends only on the config and seed, never on `workers`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Report> {
    let cells = expand_cells(cfg)?;
    let prepared = run::validate(cfg, &cells)?;
    let body = || -> Result<Report> {
        let data = cells
            .iter()
            .zip(&prepared)
            .map(|(c, stats)| run::sample_cell(cfg.seed, c, stats))
            .collect::<Result<Vec<_>>>()?;
        let ctx = checks::Context { seed: cfg.seed, cells: &cells, data: &data, prepared: &prepared };
        let mut tests = Vec::new();
        for t in &cfg.tests {
            tests.extend(checks::evaluate(t, &ctx)?);
        }
        let cell_reports = cells
            .iter()
            .zip(&data)
            .map(|(c, d)| {
                Ok(CellReport {
                    cell: c.clone(),
                    statistics: d
                        .scalars
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), Summary::of(v)?)))
                        .collect::<Result<_>>()?,
                    histograms: d.histograms.iter().map(|(k, h)| (k.clone(), report::histogram_entries(h))).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let passed = tests.iter().all(|t| t.pass);
        Ok(Report {
            schema: REPORT_SCHEMA.into(),
            name: cfg.name.clone(),
            provenance: Provenance {
                config_sha256: cfg.hash(),
                seed: cfg.seed,
                version: env!("CARGO_PKG_VERSION").into(),
                rng: crate::rng::STREAM_NAME.into(),
                csv_schema: CSV_SCHEMA.into(),
            },
            cells: cell_reports,
            tests,
            passed,
        })
    };
    match workers {
        Some(k) => {
            let pool = ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} workers: {e}")))?;
            pool.install(body)
        }
        None => body(),
    }
}
