//! Nonparametric k-sample tests for equality of covariance operators of
//! functional data, built on functional depth ranks (FKWC tests).
//!
//! The crate is organised bottom-up:
//!
//! * [`fda`] grid representation of curves, L² geometry, differentiation, I/O.
//! * [`depth`] functional depths and depth-based ranking of a pooled sample.
//! * [`fkwc`] the Kruskal–Wallis type statistics, χ² calibration and
//!   pairwise Steel-type comparisons.
//! * [`power`] noncentrality-based power and sample-size computation.
//! * [`sim`] generative process models and replicated size/power studies.

pub mod depth;
pub mod dist;
pub mod error;
pub mod fda;
pub mod fkwc;
pub mod power;
pub mod rng;
pub mod sim;

pub use depth::{depth_ranks, compute_depth, DepthKind, DepthSpec, DepthVector, RankVector};
pub use error::{Error, Result};
pub use fda::{Curve, FunctionalDataset, Grid};
pub use fkwc::{fkwc_test, steel_mc, test_from_ranks, TestConfig, TestResult};
