//! Independent checks on the recurrence output.
//!
//! * The limit route recovers `a_n` numerically from
//!   `2^{n/2}·(√g(x)/x − Σ_{k<n} a_k g(x)^{k/2}) / x^n` as `x → 0⁺`, with
//!   `g(x) = x − ln(1+x)`. It only settles if the supplied `a_0..a_{n−1}`
//!   are right, so it doubles as a check on the prefix.
//! * The Bernoulli route exponentiates the classical `ln Γ` asymptotic
//!   series as a formal power series in `1/s`, sharing nothing with the
//!   recurrence.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::QSqrt2;
use crate::precision::{BigFloat, PrecisionContext};
use crate::series::{horner, StirlingSeries};

/// Agreement (in digits) required before a limit estimate is accepted.
pub const MIN_STABILIZED_DIGITS: u32 = 4;

/// Digits held back from the sample schedule to absorb the cancellation in
/// the numerator.
const GUARD_DIGITS: f64 = 25.0;

const MAX_SAMPLES: u32 = 40;

#[derive(Debug, Clone)]
pub struct Method1Estimate {
    pub n: usize,
    pub value: BigFloat,
    /// Leading digits on which the last two estimates agree.
    pub stabilized_digits: u32,
    /// `(x_m, estimate_m)` for `x_m = 4^{−m}`, largest `x` first.
    pub samples: Vec<(BigFloat, BigFloat)>,
}

/// x − ln(1+x) for 0 < x ≤ 1/4 from the alternating series
/// `x²/2 − x³/3 + …`, cut off relative to the leading term.
fn g_series(x: &BigFloat) -> BigFloat {
    let prec = x.prec();
    let mut power = x * x;
    let lead = power.top().unwrap();
    let cutoff = lead - prec as i64 - 8;
    let mut sum = BigFloat::zero(prec);
    for k in 2i64.. {
        let term = &power / BigFloat::from_i64(k, prec);
        if term.top().is_none_or(|t| t < cutoff) {
            break;
        }
        sum = if k % 2 == 0 {
            &sum + &term
        } else {
            &sum - &term
        };
        power = &power * x;
    }
    sum
}

fn agreeing_digits(a: &BigFloat, b: &BigFloat) -> u32 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return a.prec();
    }
    let scale = BigFloat::max_of(&a.abs(), &b.abs());
    if scale.is_zero() {
        return 0;
    }
    let rel = (&diff / &scale).to_f64();
    if rel >= 1.0 {
        0
    } else {
        (-rel.log10()).floor().max(0.0) as u32
    }
}

/// Number of sample points `x_m = 4^{−m}`, `m = 2..=M`, affordable at this
/// precision: the numerator shrinks like `x^n`, so `n·m·log10(4)` digits
/// are lost to cancellation.
fn sample_count(n: usize, digits: u32) -> u32 {
    if n == 0 {
        return MAX_SAMPLES;
    }
    let usable = digits as f64 - GUARD_DIGITS;
    let m = (usable / (n as f64 * 4f64.log10())).floor();
    (m.max(0.0) as u32).min(MAX_SAMPLES)
}

/// Estimates `a_n` from the limit formula using the supplied `a_0..a_{n−1}`.
pub fn method1_coefficient(
    n: usize,
    known: &[QSqrt2],
    ctx: &PrecisionContext,
) -> Result<Method1Estimate> {
    if known.len() < n {
        return Err(Error::InvalidArgument(format!(
            "a_{n} needs {n} known coefficients, got {}",
            known.len()
        )));
    }
    let min_digits = 10 * (n as u32 + 2);
    if ctx.digits() < min_digits {
        return Err(Error::PrecisionTooLow {
            digits: ctx.digits(),
            min: min_digits,
        });
    }
    let last_m = sample_count(n, ctx.digits());
    if last_m < 3 {
        return Err(Error::PrecisionTooLow {
            digits: ctx.digits(),
            min: ctx.digits() + 1,
        });
    }

    let prefix: Vec<BigFloat> = known[..n].iter().map(|a| a.to_decimal(ctx)).collect();
    let mut scale = ctx.int(1).ldexp((n / 2) as i64);
    if n % 2 == 1 {
        scale = scale * ctx.sqrt2();
    }

    let samples: Vec<(BigFloat, BigFloat)> = (2..=last_m as i64)
        .map(|m| {
            let x = ctx.int(1).ldexp(-2 * m);
            let v = g_series(&x).sqrt();
            let partial = horner(&prefix, &v);
            let numerator = &v / &x - partial;
            let est = &scale * numerator / x.powi(n as i64);
            (x, est)
        })
        .collect();

    let (_, last) = &samples[samples.len() - 1];
    let (_, before) = &samples[samples.len() - 2];
    let estimate = Method1Estimate {
        n,
        value: last.clone(),
        stabilized_digits: agreeing_digits(last, before).min(ctx.digits()),
        samples,
    };
    if estimate.stabilized_digits < MIN_STABILIZED_DIGITS {
        return Err(Error::Unstabilized(Box::new(estimate)));
    }
    Ok(estimate)
}

/// `B_0..B_{m_max}` with `B_1 = −1/2`, from `Σ_{j≤m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(m_max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m_max + 1);
    b.push(BigRational::one());
    for m in 1..=m_max {
        let sum = (0..m).fold(BigRational::zero(), |acc, j| {
            acc + &b[j] * BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(j)))
        });
        b.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `c_0..c_{n_max}` as the power series `exp(μ(t))`, `t = 1/s`, where
/// `μ(t) = Σ_{j≥1} B_{2j} t^{2j−1} / (2j(2j−1))`.
pub fn stirling_from_bernoulli(n_max: usize) -> StirlingSeries {
    let bern = bernoulli_numbers(n_max + 1);
    let mu: Vec<BigRational> = (0..=n_max)
        .map(|i| {
            if i % 2 == 1 {
                let two_j = i + 1;
                &bern[two_j] / BigRational::from_integer(BigInt::from(two_j * (two_j - 1)))
            } else {
                BigRational::zero()
            }
        })
        .collect();
    // E = exp(μ) ⇒ E' = μ'E ⇒ k·e_k = Σ_{i=1}^{k} i·μ_i·e_{k−i}
    let mut e = vec![BigRational::one()];
    for k in 1..=n_max {
        let sum = (1..=k).fold(BigRational::zero(), |acc, i| {
            acc + &mu[i] * &e[k - i] * BigRational::from_integer(BigInt::from(i))
        });
        e.push(sum / BigRational::from_integer(BigInt::from(k)));
    }
    StirlingSeries::from_coeffs(e)
}
