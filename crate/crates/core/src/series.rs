//! MacLaurin coefficients of `y(v)` and the Stirling-series coefficients
//! derived from them.
//!
//! `y` satisfies `v·y' = y − 2y² − 2v·y²`. Comparing the coefficients of `v^n`
//! on both sides gives
//!
//! ```text
//! a_n = −2/(n+2) · [ Σ_{k+j+l=n; k,j,l<n} a_k a_j a_l + Σ_{k+j=n−1} a_k a_j ]
//! ```
//!
//! seeded with `a_0 = √2/2`. Every `a_n` lies in Q(√2); the even ones turn
//! out to be rational multiples of √2 and the odd ones rational, which is
//! checked rather than assumed.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{factorial, QSqrt2};
use crate::precision::{BigFloat, PrecisionContext};

/// Largest index kept in the shared table.
pub const CACHED_MAX_INDEX: usize = 40;

/// `a_0..a_N` of the MacLaurin series of `y(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    coeffs: Vec<QSqrt2>,
}

impl CoeffTable {
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&QSqrt2> {
        self.coeffs.get(n)
    }

    pub fn as_slice(&self) -> &[QSqrt2] {
        &self.coeffs
    }

    /// `a_0..a_m`; None if `m` exceeds the table.
    pub fn prefix(&self, m: usize) -> Option<CoeffTable> {
        (m < self.coeffs.len()).then(|| CoeffTable {
            coeffs: self.coeffs[..=m].to_vec(),
        })
    }

    /// Even-index entries are pure √2 multiples, odd-index entries pure
    /// rationals. Returns the first index that breaks the pattern.
    pub fn check_parity(&self) -> Result<()> {
        for (n, a) in self.coeffs.iter().enumerate() {
            let ok = if n % 2 == 0 {
                a.is_pure_sqrt2()
            } else {
                a.is_pure_rational()
            };
            if !ok {
                return Err(Error::ParityViolation { index: n });
            }
        }
        Ok(())
    }

    /// Coefficients rounded to the context precision.
    pub fn to_floats(&self, ctx: &PrecisionContext) -> Vec<BigFloat> {
        self.coeffs.iter().map(|a| a.to_decimal(ctx)).collect()
    }
}

/// Exact `c_0..c_N` with `Γ(s+1) ~ (s/e)^s √(2πs) Σ c_k s^{−k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingSeries {
    coeffs: Vec<BigRational>,
}

impl StirlingSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "empty Stirling series");
        Self { coeffs }
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<&BigRational> {
        self.coeffs.get(k)
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncated(&self, max_k: usize) -> Option<StirlingSeries> {
        (max_k < self.coeffs.len()).then(|| StirlingSeries {
            coeffs: self.coeffs[..=max_k].to_vec(),
        })
    }
}

/// `a_0..a_{n_max}` by the cubic recurrence.
///
/// Partial sums of the square `Σ_{j+l=m} a_j a_l` are kept, so each new
/// coefficient costs O(n) field products instead of O(n²).
pub fn compute_coefficients(n_max: usize) -> CoeffTable {
    let a0 = QSqrt2::sqrt2_multiple(BigRational::new(1.into(), 2.into()));
    let mut a = vec![a0];
    // squares[m] = Σ_{j+l=m} a_j a_l, complete for m < a.len()
    let mut squares = vec![&a[0] * &a[0]];
    for n in 1..=n_max {
        // square terms of order n that avoid the unknown a_n
        let partial_square = (1..n).fold(QSqrt2::zero(), |acc, j| &acc + &(&a[j] * &a[n - j]));
        let mut cubic = &a[0] * &partial_square;
        for k in 1..n {
            cubic = &cubic + &(&a[k] * &squares[n - k]);
        }
        let bracket = &cubic + &squares[n - 1];
        let factor = BigRational::new(BigInt::from(-2), BigInt::from(n as u64 + 2));
        let an = bracket.scale(&factor);
        let full_square =
            &partial_square + &(&a[0] * &an).scale(&BigRational::from_integer(2.into()));
        a.push(an);
        squares.push(full_square);
    }
    CoeffTable { coeffs: a }
}

/// Shared table `a_0..a_40`, computed on first use.
pub fn standard_table() -> &'static CoeffTable {
    static TABLE: OnceLock<CoeffTable> = OnceLock::new();
    TABLE.get_or_init(|| compute_coefficients(CACHED_MAX_INDEX))
}

/// Γ(k+1/2)/Γ(1/2) = (2k)!/(4^k k!).
pub fn gamma_half_integer_ratio(k: usize) -> BigRational {
    let num = factorial(2 * k as u64);
    let den = (BigInt::one() << (2 * k)) * factorial(k as u64);
    BigRational::new(num, den)
}

/// `c_k = 2·a_{2k}·Γ(k+1/2)/√(2π) = 2·q_{2k}·(2k)!/(4^k k!)` for
/// `k = 0..⌊max_index/2⌋`, where `a_{2k} = q_{2k}·√2`.
pub fn stirling_coefficients(table: &CoeffTable) -> Result<StirlingSeries> {
    let two = BigRational::from_integer(2.into());
    let coeffs = (0..=table.max_index() / 2)
        .map(|k| {
            let a = &table.coeffs[2 * k];
            if !a.is_pure_sqrt2() {
                return Err(Error::ParityViolation { index: 2 * k });
            }
            Ok(&two * a.sqrt2_part() * gamma_half_integer_ratio(k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StirlingSeries { coeffs })
}

/// Horner evaluation of `Σ_{k≤n} a_k v^k`.
pub fn maclaurin_eval(
    table: &CoeffTable,
    v: &BigFloat,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<BigFloat> {
    if n > table.max_index() {
        return Err(Error::InvalidArgument(format!(
            "order {n} exceeds table maximum {}",
            table.max_index()
        )));
    }
    let mut acc = BigFloat::zero(ctx.bits());
    for a in table.coeffs[..=n].iter().rev() {
        acc = &acc * v + a.to_decimal(ctx);
    }
    Ok(acc)
}

/// Horner evaluation with coefficients already converted to floats.
pub(crate) fn horner(coeffs: &[BigFloat], v: &BigFloat) -> BigFloat {
    let mut acc = BigFloat::zero(v.prec());
    for c in coeffs.iter().rev() {
        acc = &acc * v + c;
    }
    acc
}

impl StirlingSeries {
    pub fn is_zero_at(&self, k: usize) -> bool {
        self.coeffs.get(k).is_none_or(Zero::is_zero)
    }
}
