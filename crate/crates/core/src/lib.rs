//! Power allocation and channel assignment for D2D pairs that reuse
//! cellular uplink channels, with optional full-duplex operation and mutual
//! successive interference cancellation between the pair and the base
//! station.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: link gains, limits, SINR and rate expressions.
//! - [`geometry`]: the exact full-duplex SIC solver.
//! - [`solvers`]: per-scenario entry points with their fallbacks.
//! - [`oracle`]: brute-force grid search used to validate the solvers.
//! - [`assignment`]: optimal one-to-one pairing of D2D pairs with CUs.
//! - [`sim`]: Monte Carlo campaigns over random cell deployments.

pub mod assignment;
pub mod error;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod sim;
pub mod solvers;

pub use error::{Error, Result};
