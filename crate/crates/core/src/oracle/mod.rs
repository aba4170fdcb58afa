//! Exact ground truth by enumeration: every pairing of up to 18 points,
//! recursive trees, Stirling numbers and the martingale step identities.

mod distribution;
mod martingale;
mod pairings;
mod rectree;
mod stirling;

pub use distribution::{exact_distribution, format_value, ExactDistribution, ExactEntry, ExactSummary, Statistic};
pub use martingale::{martingale_step_check, martingale_step_sides, RootKind};
pub use pairings::{double_factorial_odd, enumerate_pairings, Pairings, MAX_CHORDS};
pub use rectree::{
    recursive_tree_count, recursive_tree_gf, recursive_tree_gf_check, recursive_tree_gf_check_f64,
    recursive_tree_product, MAX_TREE_SIZE,
};
pub use stirling::{stirling_identity_check, stirling_identity_sides, stirling_s};
