//! Cohomological equation `f = g - g o R_theta` for the circle rotation
//! `R_theta(t) = t + theta mod 1`.
//!
//! Coefficientwise the equation reads `f(n) = g(n) (1 - e^{2 pi i n theta})`, so a
//! zero-mean trigonometric polynomial is always a coboundary of another trigonometric
//! polynomial once every divisor is bounded away from zero. The interesting regime is a
//! Liouville-type `theta`, where the divisors at selected frequencies are as small as
//! `2^{-n}`: [`counterexample_pair`] builds a `g` that is continuous but not `C^1` while
//! `f = g - g o R_theta` is smooth.

mod cocycle;
mod series;
mod theta;

pub use cocycle::{
    birkhoff_sums, coboundary_residual, coboundary_solve, counterexample_pair,
    gottschalk_hedlund_test, regularity_report, BirkhoffTrace, GhReport, GhVerdict, GrowthFit,
    RegularityReport, DEFAULT_DENOM_FLOOR, GROWTH_SIGNIFICANCE, MEAN_TOL,
};
pub use series::{FourierSeries, REAL_SYMMETRY_TOL};
pub use theta::{
    build_liouville_theta, minimum_precision_bits, FrequencyLadder, OrbitAngles, RotationNumber,
    ThetaSummary, GOLDEN_THETA, MAX_LEVELS,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RotationError {
    #[error("series has nonzero mean {0:e}; Birkhoff sums grow linearly and no coboundary exists")]
    NonzeroMean(f64),
    #[error("small denominator |1 - e^(2 pi i n theta)| = {modulus:e} at n = {n}")]
    SmallDenominator { n: i64, modulus: f64 },
    #[error("series is not real-valued")]
    NotRealValued,
    #[error("cannot certify 0 < {{n_j theta}} <= 2^-n_j at j = {j}, n_j = {n}; raise the precision")]
    PrecisionExhausted { j: i64, n: i64 },
    #[error("rotation number {0} outside (0, 1)")]
    ThetaOutOfRange(f64),
    #[error("{0}")]
    InvalidArgument(String),
}
