//! Configurable-precision floating evaluation.
//!
//! [`BigFloat`] is a binary floating-point number with an arbitrary-precision
//! mantissa. Every value carries its own precision in bits; binary operations
//! round to the larger of the two operand precisions. [`PrecisionContext`]
//! maps a decimal digit count onto a bit precision and hands out constants.

mod constants;
mod elementary;
mod float;

pub use float::BigFloat;

use crate::error::{Error, Result};

/// Smallest supported working precision, in significant decimal digits.
pub const MIN_DIGITS: u32 = 16;

/// Default working precision for verification runs.
pub const DEFAULT_DIGITS: u32 = 64;

const GUARD_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::PrecisionTooLow {
                digits,
                min: MIN_DIGITS,
            });
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa width used for values created in this context.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Same context with `extra` more decimal digits.
    pub fn widen(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
        }
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.bits())
    }

    pub fn f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits())
    }

    pub fn ratio(&self, r: &num_rational::BigRational) -> BigFloat {
        BigFloat::from_rational(r, self.bits())
    }

    pub fn pi(&self) -> BigFloat {
        constants::pi(self.bits())
    }

    pub fn sqrt2(&self) -> BigFloat {
        constants::sqrt2(self.bits())
    }

    pub fn ln2(&self) -> BigFloat {
        constants::ln2(self.bits())
    }

    /// √(2π) at context precision.
    pub fn sqrt_two_pi(&self) -> BigFloat {
        (self.pi() * self.int(2)).sqrt()
    }

    /// 10^-digits, the nominal resolution of this context.
    pub fn epsilon(&self) -> BigFloat {
        self.int(10).powi(-(self.digits as i64))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: DEFAULT_DIGITS,
        }
    }
}
