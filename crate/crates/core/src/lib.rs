//! Random pairing (linearized chord diagram) preferential attachment graphs.
//!
//! The crate samples `G_m^n` four ways, measures the statistics the model's
//! limit theorems talk about, evaluates the closed-form bounds, and checks all
//! of it against exact enumeration of small pairings.

pub mod analytic;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod maxtree;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use generators::{generate, GenMethod, Sample};
pub use graph::MultiGraph;
