//! Exact asymptotic-expansion coefficients for the zeros of the deformed
//! exponential function `f(x) = sum_n x^n q^{n(n-1)/2} / n!`, their
//! representations in the `A_i` and Eisenstein bases, q-series evaluation,
//! and an arbitrary-precision zero finder used to validate the expansion.

pub mod cli;
pub mod error;
pub mod exactmath;
pub mod jpoly;
pub mod precreal;
pub mod qseries;
pub mod symcoeff;
pub mod validate;
pub mod zeros;

pub use error::{Error, Result};
pub use exactmath::Rational;
pub use jpoly::{JPoly, UVForm};
