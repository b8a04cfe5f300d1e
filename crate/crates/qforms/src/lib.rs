//! qforms: exact q-series and high-precision numerics for the Fourier
//! coefficients of the negative-index Jacobi forms
//! `φ_{M,N}(z;τ) = ϑ(z+1/2;τ)^M / ϑ(z;τ)^N`.
//!
//! Exact pipelines (rational truncated q-series) live in [`series`], [`gens`],
//! [`theta`], [`jacobi`], [`lattice`] and [`fourier`]. The independent
//! high-precision numerical side lives in [`numeric`]; [`quantum`] covers the
//! behaviour of the partial theta functions near rationals. [`io`] holds the
//! JSON/CSV formats and the on-disk cache, [`cli`] the command-line front end.

pub mod arith;
pub mod cli;
pub mod error;
pub mod fourier;
pub mod gens;
pub mod io;
pub mod jacobi;
pub mod linalg;
pub mod lattice;
pub mod numeric;
pub mod phased;
pub mod quantum;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use phased::Phased;
pub use series::{QSeries, SeriesError};

/// Shorthand for exact rationals.
pub fn q(n: i64, d: i64) -> rug::Rational {
    rug::Rational::from((n, d))
}
