//! Numerical toolkit for scalar-curvature width inequalities of bands.
//!
//! The crate evaluates and cross-checks the explicit geometry behind the
//! `2π/n` band-width bound and its relatives:
//!
//! * [`profiles`]: one-variable warping functions with analytic or
//!   finite-difference derivatives.
//! * [`warped`]: scalar, mean and Ricci curvature of torical warped products
//!   `dt² + Σ φᵢ(t)² dτᵢ²`.
//! * [`extremal`]: the Riccati extremal-profile solver, band-width constants,
//!   boundary-value feasibility, hyperbolic rigidity and the one-step
//!   symmetrization toy.
//! * [`torus`]: recursive codimension-one tori in Euclidean balls with exact
//!   focal radii and a brute-force normal-injectivity oracle.
//! * [`hypersurface`]: Gauss-equation bookkeeping and principal-curvature
//!   lower bounds for submanifolds of spheres.
//! * [`smoothing`]: the bending family, edge-rounding tube curvatures and
//!   quadratic-decay metrics.
//! * [`cli`] / [`report`]: the deterministic CSV/JSON front end used by the
//!   `torical` binary, and [`checks`] which backs `torical verify-all`.
//!
//! Everything is deterministic; there is no randomness anywhere in the crate.

// NaN inputs must fail the `!(x > 0.0)` style guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod hypersurface;
pub mod ode;
pub mod profiles;
pub mod report;
pub mod shape;
pub mod smoothing;
pub mod torus;
pub mod warped;

pub use error::{Error, Result};
pub use profiles::{DerivativeBundle, Interval, Profile};
pub use warped::WarpedBandMetric;
