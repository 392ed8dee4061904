//! Numerical laboratory for the spectra of symmetric random matrices whose
//! entries are martingale differences.
//!
//! The crate builds the ensembles (Wigner-type, sample covariance and the
//! symmetrized block matrix), computes empirical spectral distributions and
//! Stieltjes transforms, compares them with the semicircle, Marchenko-Pastur
//! and variance-profile limits, and exposes the numerical diagnostics behind
//! the Lindeberg replacement argument.
//!
//! Runnable walk-throughs live in `examples/`; the `rmtlab` binary in
//! `crates/cli` drives config-based Monte Carlo sweeps.

// `!(x > 0.0)` is used on purpose so that NaN fails validation; index loops
// mirror the matrix formulas they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cdf;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod harness;
pub mod index_lattice;
pub mod laws;
pub mod matrix;
pub mod point;
pub mod spectra;

pub use cdf::{Cdf, StepCdf};
pub use error::{Error, Result};
pub use field::{FieldSample, RngStream};
pub use index_lattice::LatticeIndex;
pub use laws::{LimitLaw, MarchenkoPastur, Semicircle};
pub use matrix::{RectMatrix, SymMatrix};
pub use point::UpperPoint;
pub use spectra::SpectralSample;
