//! Exact characterization of multivariate Bernoulli distributions with given
//! margins.
//!
//! Every member of a Fréchet class `F(p_1, …, p_m)` is a convex combination of
//! finitely many *ray densities*, the normalized extreme rays of the cone
//! `{f >= 0 : H f = 0}`. On top of that representation the crate computes
//! attainable moment and correlation bounds, decides whether a target
//! correlation matrix is compatible with the margins, constructs joint
//! densities, projects incompatible targets onto the nearest compatible ones,
//! and samples from the result. Core arithmetic is exact.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod lp;
pub mod model;
pub mod rays;
pub mod sampler;
pub mod solvers;

pub use error::{Error, Result};
