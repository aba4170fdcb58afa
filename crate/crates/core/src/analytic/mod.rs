//! Closed-form bounds, rate functions, thresholds and limit laws.

mod beta;
mod chernoff;
mod connect;
mod isolation;
mod kantorovich;
mod multiplicity;
mod rates;
mod roots;
mod special;

pub use beta::{attached_root_moment, beta_mixture, looped_root_moment, BetaComponent, BetaMixture};
pub use chernoff::Chernoff;
pub use connect::{all_loops_probability, connect_probability, connect_probability_exact, connected_g1_exact};
pub use isolation::{
    c_eps_delta, g_min, h, pair_isolation_bound, pair_probability_bound, psi, refinement, IsolationBoundParams,
    LogBound, Refinement,
};
pub use kantorovich::kantorovich_schweitzer;
pub use multiplicity::expected_parallel_pairs;
pub use rates::{
    entropy_beta, entropy_cut, entropy_expansion, example1_rate, example2_g, example2_h, example2_rate, example3_rate,
    h_gamma, m1, m2, x_m1, xm2_lhs,
};
pub use roots::{
    bisect, degree_cap_rate, eps_rho, example1_thresholds, example2_thresholds, positive_intervals, scan_roots, x_m2,
    z_sigma, Grid, Thresholds, SCAN_POINTS, TOLERANCE,
};
pub use special::{gamma_rate, ln_choose, poisson_rate, xlogx};
