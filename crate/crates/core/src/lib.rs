//! Constructions, property checkers and length bounds for λ-curves and
//! λ-eels in Euclidean space.
//!
//! A curve is handled as a [`SampledCurve`]: a strictly increasing parameter
//! grid with one point per parameter, optionally carrying the unit tangents of
//! the analytic curve it was sampled from. Every checker returns a
//! [`CheckReport`] holding the verdict, the signed worst margin and the
//! witness indices realizing it.
//!
//! ```
//! use eelkit::constructions::{derive_mu, helix};
//! use eelkit::checks::check_self_expanded;
//!
//! let mu = derive_mu();
//! let c = helix(1.0, mu, 0.0, 4.0 * std::f64::consts::PI, 0.05).unwrap();
//! let report = check_self_expanded(&c, 1e-9).unwrap();
//! assert!(report.passed);
//! ```

// Range checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod config;
pub mod constructions;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod par;
pub mod rectifiability;

pub use checks::{CheckReport, Checker, DirectionSource, Property};
pub use curve::SampledCurve;
pub use error::{EelError, Result};
pub use par::Execution;
