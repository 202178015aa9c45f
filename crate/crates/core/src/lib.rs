//! Stability analysis for linear and logistic fractional difference equations
//! with one or two fractional orders.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: gamma ratios, the binomial family `phi_mu(n)` and memory weights.
//! - [`dynamics`]: time-domain simulation and trajectory classification.
//! - [`stability`]: boundary loci, winding numbers, bifurcation values, real intervals
//!   and planar region analysis.
//! - [`logistic`]: equilibria of the fractional logistic map and the empirical
//!   stability bound `a*`.
//! - [`export`]: CSV and SVG writers and the matching CSV readers.

pub mod dynamics;
pub mod error;
pub mod export;
pub mod logistic;
pub mod special;
pub mod stability;

pub use dynamics::{
    classify_trajectory, simulate_one_term, simulate_two_term, ClassifyThresholds, Forcing,
    OneTermSystem, ScalarKind, SimOptions, Trajectory, TrajectoryVerdict, TwoTermSystem,
    VerdictKind, WeightScheme,
};
pub use error::{Error, Result};
pub use logistic::{AStarConfig, AStarEstimate, Equilibrium, LogisticAnalysis};
pub use num_complex::Complex64;
pub use special::{FractionalOrderPair, WeightTable};
pub use stability::{
    BifurcationReport, BoundaryCurve, Family, RealInterval, Regime, StabilityConfig,
    StabilityVerdict, VerdictClass,
};
