//! Online selection under matroid and matroid-intersection constraints.
//!
//! The library is organized around a small pipeline:
//!
//! * [`matroid`] — finite matroids with independence/rank/closure oracles,
//!   contraction and deletion views, greedy max-weight bases, and the
//!   exchange bijection used by the verification suites.
//! * [`weights`] — per-element weight distributions with seeded sampling and
//!   exact enumeration of finite outcome spaces.
//! * [`remainder`] — the remainder/cost partition of a max-weight basis and
//!   estimators for its expected weight, the quantity inside every threshold.
//! * [`policy`] — threshold policies (half-of-expected-max for rank one,
//!   balanced thresholds for one matroid and for intersections, plus a
//!   median baseline) and the balanced-threshold property checker.
//! * [`harness`] — adversaries, end-to-end simulations, tight-instance
//!   generators, and the invariant suites.
//! * [`mechanism`] — sequential posted-price mechanisms driven by the
//!   threshold policies through virtual valuations.
//!
//! Exact computations are carried out in arbitrary-precision rationals so
//! that guarantee inequalities can be asserted with zero tolerance; Monte
//! Carlo paths use `f64` with reported standard errors.

pub mod estimate;
pub mod harness;
pub mod io;
pub mod matroid;
pub mod mechanism;
pub mod policy;
pub mod remainder;
pub mod scalar;
pub mod set;
pub mod weights;

pub use matroid::Matroid;
pub use scalar::{Rat, Scalar, Threshold};
pub use set::{ElemSet, GroundSet};
pub use weights::{WeightDistribution, WeightProfile};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller violated an input contract (unknown element, negative
    /// weight, malformed distribution, ...).
    #[error("input error: {0}")]
    Input(String),
    /// The requested computation is too large for the exhaustive method
    /// that backs it. Callers can retry with a Monte Carlo estimator.
    #[error("refused: {0}")]
    Refused(String),
    /// An internal invariant failed; indicates a bug in an oracle.
    #[error("internal error: {0}")]
    Internal(String),
    /// A configuration value is out of range.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub(crate) fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
