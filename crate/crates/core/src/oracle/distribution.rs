use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::generators::ChordDiagram;
use crate::graph::{diagram_to_graph, MultiGraph};
use crate::maxtree::{forest_m1, prefix_maxtree_present, spanning_recursive_exists};
use crate::stats::{is_connected, loop_count, parallel_pair_count};

use super::pairings::{double_factorial_odd, Pairings, MAX_CHORDS};

/// A graph statistic with a discrete value, encoded as a vector of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Statistic {
    LoopCount,
    DegreeSequence,
    /// `(L, D(1), ..., D(n))`.
    LoopsAndDegrees,
    Connected,
    SpanningRecursive,
    /// Component sizes of the max-tree forest, largest first (`m = 1`).
    MaxTreeSizes,
    ParallelPairs,
    PrefixMaxtree {
        mu: usize,
    },
}

impl Statistic {
    pub const NAMES: [&'static str; 8] = [
        "loop_count",
        "degree_sequence",
        "loops_and_degrees",
        "connected",
        "spanning_recursive",
        "max_tree_sizes",
        "parallel_pairs",
        "prefix_maxtree",
    ];

    /// Looks a statistic up by name; `prefix_maxtree` needs `mu`.
    pub fn from_name(name: &str, mu: Option<usize>) -> Result<Self> {
        Ok(match name {
            "loop_count" => Self::LoopCount,
            "degree_sequence" => Self::DegreeSequence,
            "loops_and_degrees" => Self::LoopsAndDegrees,
            "connected" => Self::Connected,
            "spanning_recursive" => Self::SpanningRecursive,
            "max_tree_sizes" => Self::MaxTreeSizes,
            "parallel_pairs" => Self::ParallelPairs,
            "prefix_maxtree" => {
                let mu = mu.ok_or_else(|| Error::InvalidArgument("prefix_maxtree needs mu".into()))?;
                ensure!(mu >= 1, "mu must be at least 1");
                Self::PrefixMaxtree { mu }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown statistic {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LoopCount => "loop_count",
            Self::DegreeSequence => "degree_sequence",
            Self::LoopsAndDegrees => "loops_and_degrees",
            Self::Connected => "connected",
            Self::SpanningRecursive => "spanning_recursive",
            Self::MaxTreeSizes => "max_tree_sizes",
            Self::ParallelPairs => "parallel_pairs",
            Self::PrefixMaxtree { .. } => "prefix_maxtree",
        }
    }

    /// Rejects statistics that are undefined for block size `m`.
    pub fn supports(&self, m: usize) -> Result<()> {
        ensure!(m == 1 || !matches!(self, Self::MaxTreeSizes), "statistic max_tree_sizes is only defined for m = 1");
        Ok(())
    }

    pub fn evaluate(&self, g: &MultiGraph) -> Result<Vec<u32>> {
        self.supports(g.m())?;
        let flag = |b: bool| vec![b as u32];
        Ok(match *self {
            Self::LoopCount => vec![loop_count(g) as u32],
            Self::DegreeSequence => g.degrees().to_vec(),
            Self::LoopsAndDegrees => {
                let mut v = Vec::with_capacity(g.n() + 1);
                v.push(loop_count(g) as u32);
                v.extend_from_slice(g.degrees());
                v
            }
            Self::Connected => flag(is_connected(g)),
            Self::SpanningRecursive => flag(spanning_recursive_exists(g)),
            Self::MaxTreeSizes => {
                let mut sizes: Vec<u32> = forest_m1(g)?.sizes.iter().map(|&s| s as u32).collect();
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                sizes
            }
            Self::ParallelPairs => vec![parallel_pair_count(g) as u32],
            Self::PrefixMaxtree { mu } => flag(prefix_maxtree_present(g, mu)),
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PrefixMaxtree { mu } => write!(f, "prefix_maxtree(mu={mu})"),
            s => f.write_str(s.name()),
        }
    }
}

/// Renders a statistic value: a scalar as a number, otherwise `(a,b,...)`.
pub fn format_value(v: &[u32]) -> String {
    match v {
        [x] => x.to_string(),
        _ => format!("({})", v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
    }
}

/// The exact law of a statistic of `G_m^n` under the uniform pairing.
///
/// Each of the `(2mn - 1)!!` matchings has weight `1 / total`, so every
/// probability is `count / total`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub statistic: Statistic,
    pub n: usize,
    pub m: usize,
    pub total: u64,
    pub counts: BTreeMap<Vec<u32>, u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactEntry {
    pub value: String,
    pub count: u64,
    pub probability: String,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSummary {
    pub statistic: String,
    pub n: usize,
    pub m: usize,
    pub total: u64,
    pub entries: Vec<ExactEntry>,
}

impl ExactDistribution {
    pub fn probability(&self, value: &[u32]) -> BigRational {
        let count = self.counts.get(value).copied().unwrap_or(0);
        BigRational::new(BigInt::from(count), BigInt::from(self.total))
    }

    pub fn probability_f64(&self, value: &[u32]) -> f64 {
        self.counts.get(value).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Sum of all probabilities, exactly.
    pub fn mass(&self) -> BigRational {
        self.counts
            .values()
            .fold(BigRational::zero(), |acc, &c| acc + BigRational::new(BigInt::from(c), BigInt::from(self.total)))
    }

    /// Exact mean of a scalar statistic.
    pub fn mean(&self) -> Result<BigRational> {
        let mut sum = BigRational::zero();
        for (v, &c) in &self.counts {
            ensure!(v.len() == 1, "mean needs a scalar statistic, {} is a vector", self.statistic);
            sum += BigRational::new(BigInt::from(v[0] as u64 * c), BigInt::from(self.total));
        }
        Ok(sum)
    }

    pub fn summary(&self) -> ExactSummary {
        let entries = self
            .counts
            .iter()
            .map(|(v, &c)| {
                let q = BigRational::new(BigInt::from(c), BigInt::from(self.total));
                ExactEntry {
                    value: format_value(v),
                    count: c,
                    probability: q.to_string(),
                    p: q.to_f64().unwrap_or(f64::NAN),
                }
            })
            .collect();
        ExactSummary { statistic: self.statistic.to_string(), n: self.n, m: self.m, total: self.total, entries }
    }
}

/// Pushes every matching of `2mn` points through `phi` and the block
/// collapse and tallies the statistic. Shards by the partner of point 0 run
/// in parallel; the merge is a sum of counts, so the result does not depend
/// on scheduling.
pub fn exact_distribution(n: usize, m: usize, statistic: Statistic) -> Result<ExactDistribution> {
    ensure!(n >= 1 && m >= 1, "need n >= 1 and m >= 1");
    statistic.supports(m)?;
    let chords = n * m;
    if chords > MAX_CHORDS {
        return Err(Error::ResourceLimit(format!("exact distribution needs mn <= {MAX_CHORDS}, got mn = {chords}")));
    }
    let shards: Vec<Result<BTreeMap<Vec<u32>, u64>>> = (1..2 * chords)
        .into_par_iter()
        .map(|q| {
            let mut counts = BTreeMap::new();
            let mut failure = None;
            Pairings::shard(chords, q)?.for_each(|partner| {
                if failure.is_some() {
                    return;
                }
                let value = ChordDiagram::from_partners(partner.to_vec())
                    .and_then(|d| diagram_to_graph(&d, m))
                    .and_then(|g| statistic.evaluate(&g));
                match value {
                    Ok(v) => *counts.entry(v).or_insert(0u64) += 1,
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(counts),
            }
        })
        .collect();
    let mut counts = BTreeMap::new();
    for shard in shards {
        for (v, c) in shard? {
            *counts.entry(v).or_insert(0) += c;
        }
    }
    Ok(ExactDistribution { statistic, n, m, total: double_factorial_odd(chords), counts })
}
