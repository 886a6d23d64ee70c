//! Numerics for q-Bessel functions as recoupling coefficients of a quantum
//! group: basic hypergeometric series, Wall polynomials, Clebsch–Gordan and
//! 6j-coefficients on a truncated Fock model, 3nj-symbols, multivariate
//! q-Bessel functions and their Askey–Wilson limit, plus an identity-checking
//! campaign engine.

pub mod askey_wilson;
pub mod check;
pub mod coupling;
pub mod error;
pub mod multivariate;
pub mod qcore;
pub mod qfunctions;
pub mod repr;
pub mod scalar;
pub mod verifier;

pub use check::Check;
pub use error::{QError, Result};
pub use qcore::{QContext, SeriesResult, TruncationPolicy, Window};
pub use scalar::{Real, BigFloat};
