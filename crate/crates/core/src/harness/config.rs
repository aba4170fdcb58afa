//! Experiment configuration. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::stattest::FitModel;
use crate::error::{Error, Result};
use crate::generators::GenMethod;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub seed: u64,
    /// Runs per cell unless a grid block overrides it.
    pub runs: usize,
    #[serde(default)]
    pub grid: Vec<GridBlock>,
    #[serde(default)]
    pub statistics: BTreeMap<String, StatSpec>,
    #[serde(default)]
    pub tests: Vec<TestSpec>,
    #[serde(default)]
    pub output: OutputPaths,
}

/// The cartesian product `n x m x methods x deltas`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub methods: Vec<GenMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// File names inside the output directory; default `<name>.json` / `<name>.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

/// Vertices `[omega]` among which connectors are sought.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaRule {
    Fixed(usize),
    /// `max(2, floor(ln^p n))`.
    LogPower(f64),
}

/// A per-run statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StatSpec {
    LoopCount {},
    ParallelPairs {},
    Connected {},
    SpanningRecursive {},
    /// Size of the largest maximal recursive tree (`m = 1`).
    LargestMaxTree {},
    ScaledRootComponent {
        r: usize,
    },
    /// `n^{-1/2} sum_{j <= n^a} |D(j) - approx(j)|` (method `exp`).
    DegreeL1 {
        a: f64,
    },
    /// `min_{j <= n^a} D(j)`.
    MinPrefixDegree {
        a: f64,
    },
    /// Violations with `z = z_factor * z(sigma)`.
    DegreeCapViolations {
        sigma: f64,
        z_factor: f64,
        a: f64,
    },
    /// `mu = max(1, floor(n^mu_exponent))`.
    PrefixMaxtree {
        mu_exponent: f64,
    },
    /// Whether every pair in `[omega]` has a connector beyond `omega`.
    ConnectorsExist {
        omega: OmegaRule,
    },
    MinConnectorCount {
        omega: OmegaRule,
    },
    /// A discrete statistic with an exact law from the enumeration oracle.
    Exact {
        statistic: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<usize>,
    },
}

/// Restricts a test to some cells.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFilter {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<GenMethod>>,
}

impl CellFilter {
    pub fn is_empty(&self) -> bool {
        self == &Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeFormula {
    /// `(m + 1) / 4`.
    Loops,
    /// `(m^2 - 1) / 16`.
    ParallelPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyFormula {
    /// Exact connectivity probability of `G_1^n`.
    ConnectedG1,
    /// Probability that a spanning recursive tree exists in `G_m^n`.
    SpanningRecursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl Relation {
    pub fn holds(self, x: f64, t: f64) -> bool {
        match self {
            Self::Gt => x > t,
            Self::Ge => x >= t,
            Self::Lt => x < t,
            Self::Le => x <= t,
            Self::Eq => x == t,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Gt => ">",
            Self::Ge => ">=",
            Self::Lt => "<",
            Self::Le => "<=",
            Self::Eq => "==",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Threshold {
    Constant {
        value: f64,
    },
    /// `n^{eps (m+2) / (2m)}` with `eps = m/(m+2) - a`.
    PrefixDegreeFloor {
        a: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A declared check. Per-cell tests run on every selected cell; fits and
/// trends run on each `(m, method, delta)` group ordered by `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestSpec {
    ChiSquareVsOracle {
        statistic: String,
        min_p: f64,
        max_tv: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    KsVsMixture {
        statistic: String,
        r: u32,
        max_distance: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    MomentsVsMixture {
        statistic: String,
        r: u32,
        orders: u32,
        rel_tol: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    LoglogFit {
        statistic: String,
        model: FitModel,
        expected: SlopeFormula,
        rel_tol: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    FrequencyVsFormula {
        statistic: String,
        formula: FrequencyFormula,
        max_se: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    ExactValue {
        statistic: String,
        value: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    FractionSatisfying {
        statistic: String,
        relation: Relation,
        threshold: Threshold,
        min_fraction: f64,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    Trend {
        statistic: String,
        aggregate: Aggregate,
        direction: Direction,
        #[serde(default, skip_serializing_if = "CellFilter::is_empty")]
        only: CellFilter,
    },
    /// `connected_g1_exact(n)` against `0.5 sqrt(pi / n)`.
    ConnectivityAsymptotic { n: u64, rel_tol: f64 },
    /// The fixed numerical claims of the bound calculator.
    BoundsReproduction {},
    /// Stirling identity, recursive-tree generating function, martingale steps.
    ExactCombinatorics { max_stirling: usize, max_tree: usize, max_t: u64, max_order: u32 },
}

impl TestSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ChiSquareVsOracle { .. } => "chi_square_vs_oracle",
            Self::KsVsMixture { .. } => "ks_vs_mixture",
            Self::MomentsVsMixture { .. } => "moments_vs_mixture",
            Self::LoglogFit { .. } => "loglog_fit",
            Self::FrequencyVsFormula { .. } => "frequency_vs_formula",
            Self::ExactValue { .. } => "exact_value",
            Self::FractionSatisfying { .. } => "fraction_satisfying",
            Self::Trend { .. } => "trend",
            Self::ConnectivityAsymptotic { .. } => "connectivity_asymptotic",
            Self::BoundsReproduction {} => "bounds_reproduction",
            Self::ExactCombinatorics { .. } => "exact_combinatorics",
        }
    }

    pub fn statistic(&self) -> Option<&str> {
        match self {
            Self::ChiSquareVsOracle { statistic, .. }
            | Self::KsVsMixture { statistic, .. }
            | Self::MomentsVsMixture { statistic, .. }
            | Self::LoglogFit { statistic, .. }
            | Self::FrequencyVsFormula { statistic, .. }
            | Self::ExactValue { statistic, .. }
            | Self::FractionSatisfying { statistic, .. }
            | Self::Trend { statistic, .. } => Some(statistic),
            _ => None,
        }
    }

    pub fn filter(&self) -> Option<&CellFilter> {
        match self {
            Self::ChiSquareVsOracle { only, .. }
            | Self::KsVsMixture { only, .. }
            | Self::MomentsVsMixture { only, .. }
            | Self::LoglogFit { only, .. }
            | Self::FrequencyVsFormula { only, .. }
            | Self::ExactValue { only, .. }
            | Self::FractionSatisfying { only, .. }
            | Self::Trend { only, .. } => Some(only),
            _ => None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// SHA-256 of the canonical JSON serialization of the parsed config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("configs always serialize");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
