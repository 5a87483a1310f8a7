//! Numerical q-calculus.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: q-integers, q-factorials, q-shifted factorials, exact Gaussian
//!   binomial polynomials and the q-addition / q-subtraction power expansions.
//! - [`series`]: a truncated power-series engine with adaptive stopping,
//!   divergence detection and truncation-error estimates.
//! - [`qfunctions`]: the q-exponentials `e_q` and `E_q`, the q-trigonometric
//!   family, the Daehee constant and evaluation at formal q-sums.
//! - [`qcalculus`]: the Jackson derivative and integral with the product,
//!   quotient and integration-by-parts rules.
//! - [`identities`]: seeded sweeps that check every identity numerically and
//!   produce [`IdentityReport`]s.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod error;
pub mod identities;
pub mod qcalculus;
pub mod qcore;
pub mod qfunctions;
pub mod report;
pub mod scalar;
pub mod series;

pub use error::{QError, Result};
pub use num_complex::Complex;
pub use qcalculus::{Evaluable, QuadratureConfig};
pub use qcore::{QParam, QPolynomial};
pub use qfunctions::{DaeheeSequenceTerm, QFunction, QFunctionKind, QSign, SeriesKind};
pub use report::IdentityReport;
pub use scalar::Scalar;
pub use series::{EvalConfig, SeriesSpec, ValueWithError};

pub type Complex64 = Complex<f64>;
pub type QParam64 = QParam<f64>;
pub type EvalConfig64 = EvalConfig<f64>;
pub type QuadratureConfig64 = QuadratureConfig<f64>;
pub type ValueWithError64 = ValueWithError<f64>;
pub type QFunction64 = QFunction<f64>;

pub type Complex32 = Complex<f32>;
pub type QParam32 = QParam<f32>;
pub type EvalConfig32 = EvalConfig<f32>;
