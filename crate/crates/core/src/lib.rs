//! # qstatlab
//!
//! A finite-dimensional laboratory for quantum statistical inference.
//!
//! - [`matcore`]: Hermitian matrices, density matrices, measurements, Born rule.
//! - [`divergence`]: classical and quantum relative entropies, α-divergences,
//!   the overlap `F_t` and Chernoff exponents.
//! - [`largedev`]: Neyman-Pearson testing with exact method-of-types oracles,
//!   Stein, Sanov and Chernoff rates.
//! - [`modelsel`]: parametric models, escort posteriors, AIC/WAIC and
//!   Bayesian α-predictive distributions with exact risk enumeration.
//! - [`harness`]: JSON experiment configs, execution and report output.
//!
//! All logarithms are natural (nats).

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergence;
mod error;
pub mod exec;
pub mod harness;
pub mod largedev;
pub mod matcore;
pub mod modelsel;

pub use error::{Error, Result};
pub use exec::Execution;

/// Library version, recorded in experiment reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
