//! Numerical toolkit for rank-one and radial Dunkl harmonic analysis: the radial
//! and one-dimensional Dunkl transforms, oscillating multipliers and their
//! kernels, the Dunkl wave propagator, maximal operators and empirical
//! operator-norm probes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dunkl;
pub mod error;
pub mod fit;
pub mod io;
pub mod maximal;
pub mod multiplier;
pub mod probe;
pub mod quadrature;
pub mod specfun;
pub mod wave;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
