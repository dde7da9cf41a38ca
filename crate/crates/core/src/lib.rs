//! Exact coefficients of the Stirling series for Γ(s+1) and the numerical
//! machinery used to cross-check them.
//!
//! The smooth factor `y(v) = v/f(v)` of the Laplace substitution has a
//! MacLaurin series whose coefficients live in Q(√2). [`series`] computes
//! them with an exact cubic recurrence, [`oracle`] recomputes them by two
//! independent routes, and [`quadrature`] / [`approximant`] verify the
//! integral identities and the remainder order numerically.

pub mod analytic;
pub mod approximant;
pub mod error;
pub mod exactfield;
pub mod oracle;
pub mod precision;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exactfield::{BigRational, QSqrt2};
pub use precision::{BigFloat, PrecisionContext};
pub use series::{CoeffTable, StirlingSeries};
