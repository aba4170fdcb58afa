//! Samplers for `G_m^n` and its chord-diagram precursors.
//!
//! All four methods produce the same law. Stream order for the exponential
//! method is `w_1..w_{mn+1}` followed by `U_1..U_{mn}`; redraws after a
//! floating-point tie consume further values from the same stream.

mod diagram;
mod process;
mod samplers;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use diagram::{Chord, ChordDiagram};
pub use process::{sample_unit_exponential, ExponentialProcess};
pub use samplers::{
    graph_sequential, graph_sequential_delta, pairing_from_exponential, pairing_from_matching, pairing_from_uniform,
};

use crate::error::{ensure, Error, Result};
use crate::graph::{diagram_to_graph, MultiGraph};

/// How a graph is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMethod {
    #[serde(rename = "seq")]
    Sequential,
    #[serde(rename = "uniform")]
    UniformCoords,
    #[serde(rename = "matching")]
    UniformMatching,
    #[serde(rename = "exp")]
    Exponential,
}

impl GenMethod {
    pub const ALL: [GenMethod; 4] =
        [GenMethod::Exponential, GenMethod::UniformCoords, GenMethod::UniformMatching, GenMethod::Sequential];

    pub fn token(self) -> &'static str {
        match self {
            GenMethod::Sequential => "seq",
            GenMethod::UniformCoords => "uniform",
            GenMethod::UniformMatching => "matching",
            GenMethod::Exponential => "exp",
        }
    }
}

impl fmt::Display for GenMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for GenMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenMethod::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| Error::UnsupportedMethod(format!("{s:?} (expected exp, uniform, matching or seq)")))
    }
}

/// A generated graph together with whatever latent structure the method has.
#[derive(Debug, Clone)]
pub struct Sample {
    pub graph: MultiGraph,
    pub diagram: Option<ChordDiagram>,
    pub process: Option<ExponentialProcess>,
}

/// Samples `G_m^n` with the given method; `delta` selects the
/// `G_{1,delta}^n` process and needs `Sequential` with `m = 1`.
pub fn generate<R: Rng + ?Sized>(
    method: GenMethod,
    n: usize,
    m: usize,
    delta: Option<f64>,
    rng: &mut R,
) -> Result<Sample> {
    if let Some(delta) = delta {
        ensure!(method == GenMethod::Sequential, "delta is only supported by the sequential method");
        ensure!(m == 1, "delta requires m = 1, got m = {m}");
        let graph = graph_sequential_delta(n, delta, rng)?;
        return Ok(Sample { graph, diagram: None, process: None });
    }
    let (diagram, process) = match method {
        GenMethod::Sequential => {
            let graph = graph_sequential(n, m, rng)?;
            return Ok(Sample { graph, diagram: None, process: None });
        }
        GenMethod::Exponential => {
            let (d, p) = pairing_from_exponential(n, m, rng)?;
            (d, Some(p))
        }
        GenMethod::UniformCoords => (pairing_from_uniform(n, m, rng)?, None),
        GenMethod::UniformMatching => (pairing_from_matching(n, m, rng)?, None),
    };
    let graph = diagram_to_graph(&diagram, m)?;
    Ok(Sample { graph, diagram: Some(diagram), process })
}
