//! Empirical Palm oracles, identity checks and distribution comparisons.

pub mod identities;
pub mod oracle;
pub mod quadrature;
pub mod replicate;
pub mod stats;

pub use identities::{
    campbell_check, factorial_moment_check, first_moment_check, laplace_derivative_check,
    laplace_estimate, CheckReport, LaplaceEstimate, PatternFn, PointFn, DEFAULT_Z_CRIT,
};
pub use oracle::{
    palm_weighting_oracle, sampler_pmf, sampler_values, two_point_weighting_oracle, OracleEstimate,
    Statistic, WeightedEnsemble,
};
pub use stats::{ks_two_sample, tv_distance, CountPmf, KsResult};
