//! Truncated Stirling approximations and their error tables.
//!
//! With `R(s) = Γ(s+1) / ((s/e)^s √(2πs))`, the truncation error after `n`
//! terms is measured on the bracketed series,
//! `|R(s) − Σ_{k≤n} c_k s^{−k}|`, so every quantity stays O(1).

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::factorial;
use crate::precision::{BigFloat, PrecisionContext};
use crate::quadrature::gamma_reference;
use crate::series::StirlingSeries;

const GUARD_DIGITS: u32 = 10;

/// Largest integer `s` for which the exact power route cross-checks `(s/e)^s`.
pub const EXACT_POWER_LIMIT: u64 = 170;

/// Scaling band, as multiples of `2^{n+1}`.
pub const SCALING_BAND: (f64, f64) = (0.8, 1.25);

/// Smallest `s` at which the scaling band is enforced.
pub const SCALING_MIN_S: f64 = 20.0;

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("s = {s} is not > 0")))
    }
}

fn integer_arg(s: f64) -> Option<u64> {
    (s.fract() == 0.0 && s >= 1.0 && s <= EXACT_POWER_LIMIT as f64).then_some(s as u64)
}

/// `(s/e)^s = exp(s(ln s − 1))`.
pub fn power_factor(s: f64, ctx: &PrecisionContext) -> Result<BigFloat> {
    check_s("power_factor", s)?;
    let sb = ctx.f64(s);
    Ok((&sb * (sb.ln() - ctx.int(1))).exp())
}

/// `(s/e)^s` for integer `s` as the exact integer `s^s` times `e^{−s}`.
pub fn power_factor_exact(s: u64, ctx: &PrecisionContext) -> BigFloat {
    let sb = BigInt::from(s);
    let power = num_traits::pow(sb, s as usize);
    BigFloat::from_bigint(&power, ctx.bits()) * (-ctx.int(s as i64)).exp()
}

/// Relative gap between the two `(s/e)^s` routes; None outside
/// `1 ≤ s ≤ 170` integer.
pub fn power_factor_discrepancy(s: f64, ctx: &PrecisionContext) -> Option<f64> {
    let k = integer_arg(s)?;
    let a = power_factor(s, ctx).ok()?;
    let b = power_factor_exact(k, ctx);
    Some(((&a - &b) / &b).abs().to_f64())
}

/// `(s/e)^s √(2πs)`.
pub fn prefactor(s: f64, ctx: &PrecisionContext) -> Result<BigFloat> {
    let root = (ctx.sqrt_two_pi() * ctx.f64(s).sqrt()).with_prec(ctx.bits());
    Ok(power_factor(s, ctx)? * root)
}

/// `Σ_{k≤n} c_k s^{−k}`.
fn bracket(s: f64, n: usize, series: &StirlingSeries, ctx: &PrecisionContext) -> BigFloat {
    let inv = ctx.int(1) / ctx.f64(s);
    let mut acc = BigFloat::zero(ctx.bits());
    for c in series.as_slice()[..=n].iter().rev() {
        acc = &acc * &inv + ctx.ratio(c);
    }
    acc
}

fn check_order(n: usize, series: &StirlingSeries) -> Result<()> {
    if n > series.max_index() {
        return Err(Error::InvalidArgument(format!(
            "order {n} exceeds series maximum {}",
            series.max_index()
        )));
    }
    Ok(())
}

/// `(s/e)^s √(2πs) Σ_{k=0}^{n} c_k s^{−k}`.
pub fn stirling_approx(
    s: f64,
    n: usize,
    series: &StirlingSeries,
    ctx: &PrecisionContext,
) -> Result<BigFloat> {
    check_s("stirling_approx", s)?;
    check_order(n, series)?;
    let wctx = ctx.widen(GUARD_DIGITS);
    let value = prefactor(s, &wctx)? * bracket(s, n, series, &wctx);
    Ok(value.with_prec(ctx.bits()))
}

#[derive(Debug, Clone)]
pub struct ApproxRow {
    pub s: f64,
    pub n: usize,
    pub reference: BigFloat,
    /// `s!` when `s` is a small integer.
    pub reference_exact: Option<BigInt>,
    pub approx: BigFloat,
    pub abs_error: BigFloat,
    pub rel_error: f64,
    /// `|R(s) − Σ_{k≤n} c_k s^{−k}|·s^n`
    pub scaled_error: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ApproximationReport {
    /// Sorted by `(n, s)`.
    pub rows: Vec<ApproxRow>,
}

impl ApproximationReport {
    pub fn row(&self, s: f64, n: usize) -> Option<&ApproxRow> {
        self.rows.iter().find(|r| r.s == s && r.n == n)
    }

    /// Rows of order `n`, in increasing `s`.
    pub fn order(&self, n: usize) -> Vec<&ApproxRow> {
        self.rows.iter().filter(|r| r.n == n).collect()
    }
}

struct Reference {
    gamma: BigFloat,
    exact: Option<BigInt>,
    ratio: BigFloat,
}

/// Γ(s+1) and `R(s)` at the widened precision.
fn reference(s: f64, wctx: &PrecisionContext) -> Result<Reference> {
    let exact = (s.fract() == 0.0 && s <= 100_000.0).then(|| factorial(s as u64));
    let gamma = match &exact {
        Some(f) => BigFloat::from_bigint(f, wctx.bits()),
        None => gamma_reference(s + 1.0, wctx)?.value,
    };
    let ratio = &gamma / prefactor(s, wctx)?;
    Ok(Reference {
        gamma,
        exact,
        ratio,
    })
}

fn build_row(
    s: f64,
    n: usize,
    r: &Reference,
    series: &StirlingSeries,
    ctx: &PrecisionContext,
    wctx: &PrecisionContext,
) -> Result<ApproxRow> {
    let b = bracket(s, n, series, wctx);
    let remainder = (&r.ratio - &b).abs();
    let approx = prefactor(s, wctx)? * &b;
    let abs_error = (&approx - &r.gamma).abs();
    let rel_error = (&abs_error / &r.gamma).to_f64();
    let scaled = remainder * wctx.f64(s).powi(n as i64);
    Ok(ApproxRow {
        s,
        n,
        reference: r.gamma.with_prec(ctx.bits()),
        reference_exact: r.exact.clone(),
        approx: approx.with_prec(ctx.bits()),
        abs_error: abs_error.with_prec(ctx.bits()),
        rel_error,
        scaled_error: scaled.to_f64(),
    })
}

/// One row per `(s, n)`; references come from exact factorials where `s` is
/// an integer and from quadrature otherwise.
pub fn error_table(
    s_list: &[f64],
    n_list: &[usize],
    series: &StirlingSeries,
    ctx: &PrecisionContext,
) -> Result<ApproximationReport> {
    for &s in s_list {
        check_s("error_table", s)?;
    }
    for &n in n_list {
        check_order(n, series)?;
    }
    let wctx = ctx.widen(GUARD_DIGITS);
    let refs = s_list
        .par_iter()
        .map(|&s| reference(s, &wctx))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(s_list.len() * n_list.len());
    for (&s, r) in s_list.iter().zip(&refs) {
        for &n in n_list {
            rows.push(build_row(s, n, r, series, ctx, &wctx)?);
        }
    }
    rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.s.total_cmp(&b.s)));
    Ok(ApproximationReport { rows })
}

/// True when `scaled_error` strictly decreases in `s` for every order.
pub fn scaled_error_decreasing(report: &ApproximationReport) -> Vec<(usize, bool)> {
    let mut orders: Vec<usize> = report.rows.iter().map(|r| r.n).collect();
    orders.dedup();
    orders
        .into_iter()
        .map(|n| {
            let rows = report.order(n);
            (
                n,
                rows.windows(2)
                    .all(|w| w[1].scaled_error < w[0].scaled_error),
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub s: f64,
    pub s2: f64,
    pub error_s: f64,
    pub error_s2: f64,
    pub ratio: f64,
    /// False below the enforcement threshold, where the ratio is reported only.
    pub enforced: bool,
    pub within_band: bool,
}

#[derive(Debug, Clone)]
pub struct ScalingCheck {
    pub n: usize,
    pub expected: f64,
    pub band: (f64, f64),
    pub rows: Vec<ScalingRow>,
    pub passed: bool,
}

/// Error after `n` terms at `s` against `2s`: the next term dominates, so
/// the ratio sits near `2^{n+1}`.
pub fn scaling_check(
    n: usize,
    s_pairs: &[(f64, f64)],
    series: &StirlingSeries,
    ctx: &PrecisionContext,
) -> Result<ScalingCheck> {
    check_order(n + 1, series)?;
    if series.is_zero_at(n + 1) {
        return Err(Error::InvalidArgument(format!("c_{} is zero", n + 1)));
    }
    let wctx = ctx.widen(GUARD_DIGITS);
    let remainder = |s: f64| -> Result<f64> {
        check_s("scaling_check", s)?;
        let r = reference(s, &wctx)?;
        Ok((&r.ratio - bracket(s, n, series, &wctx)).abs().to_f64())
    };
    let expected = 2f64.powi(n as i32 + 1);
    let band = (expected * SCALING_BAND.0, expected * SCALING_BAND.1);
    let rows = s_pairs
        .par_iter()
        .map(|&(s, s2)| {
            let error_s = remainder(s)?;
            let error_s2 = remainder(s2)?;
            let ratio = error_s / error_s2;
            Ok(ScalingRow {
                s,
                s2,
                error_s,
                error_s2,
                ratio,
                enforced: s >= SCALING_MIN_S,
                within_band: ratio >= band.0 && ratio <= band.1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| !r.enforced || r.within_band);
    Ok(ScalingCheck {
        n,
        expected,
        band,
        rows,
        passed,
    })
}
