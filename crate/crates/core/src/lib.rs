//! Stochastic submodular maximization over matroid constraints.
//!
//! Weighted coverage functions are lifted to a concave upper bound of their
//! multilinear extension, maximized by projected stochastic subgradient ascent
//! over the matroid base polytope, and rounded back to a set with randomized
//! pipage rounding. Discrete greedy baselines are provided for comparison.

pub mod baselines;
pub mod error;
pub mod facility;
pub mod influence;
pub mod matroid;
pub mod optimizer;
pub mod pipage;
pub mod point;
pub mod rng;
pub mod wcf;

pub use error::{Error, Result};
pub use matroid::{DiagonalMetric, Matroid};
pub use point::{FractionalPoint, Subgradient};
pub use wcf::WeightedCoverage;

/// The `1 - 1/e` approximation factor.
pub const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;
