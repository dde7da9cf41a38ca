//! Exact arithmetic: big rationals and the quadratic field Q(√2).
//!
//! Rationals are `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the canonical text
//! rendering used by the CLI and the tests, plus the [`QSqrt2`] field type.

mod qsqrt2;
mod rational;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use qsqrt2::{qsqrt2_arith, FieldOp, QSqrt2};
pub use rational::{factorial, parse_rational, render_rational};
