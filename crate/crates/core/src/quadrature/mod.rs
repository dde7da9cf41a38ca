//! Numerical checks of the integral identities behind the proof:
//!
//! ```text
//! Γ(s)   = ∫_0^∞ t^{s−1} e^{−t} dt
//! Γ(s+1) = s^{s+1} e^{−s} ∫_{−1}^{∞} e^{−s·g(x)} dx
//!        = (s/e)^s √s ∫_0^∞ 2(y(u/√s) + y(−u/√s)) e^{−u²} du
//! ```
//!
//! and the limit of the last integral, √(2π), as `s → ∞`.
//!
//! All integrals use composite 32-point Gauss–Legendre panels on a finite
//! window. Each panel is also integrated as two halves; the difference
//! between the two estimates is reported as `estimated_error`. Panels are
//! evaluated in parallel and summed in a fixed order.

mod gauss;

use rayon::prelude::*;

pub use gauss::{gauss_legendre, GaussRule};

use crate::analytic::{solve_g_f64, solve_w_f64, y_of_v};
use crate::error::{Error, Result};
use crate::exactfield::factorial;
use crate::precision::{BigFloat, PrecisionContext};

pub const GAUSS_POINTS: usize = 32;

/// Extra decimal digits carried inside the quadrature routines.
const QUAD_GUARD_DIGITS: u32 = 10;

/// Largest integer argument for which Γ is taken from an exact factorial.
const EXACT_FACTORIAL_LIMIT: f64 = 100_000.0;

#[derive(Debug, Clone)]
pub struct IntegralResult {
    pub value: BigFloat,
    pub estimated_error: f64,
    pub panels: usize,
    /// Upper end of the integration window (for two-sided windows, the
    /// larger of the two extents).
    pub truncation_point: f64,
}

fn panel_sum(
    rule: &GaussRule,
    a: &BigFloat,
    b: &BigFloat,
    f: &(impl Fn(&BigFloat) -> Result<BigFloat> + Sync),
) -> Result<BigFloat> {
    let half = (b - a).ldexp(-1);
    let mid = (a + b).ldexp(-1);
    let mut acc = BigFloat::zero(a.prec());
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc = acc + w * f(&(&mid + &half * x))?;
    }
    Ok(acc * half)
}

/// Composite Gauss–Legendre over consecutive `breakpoints`.
pub fn integrate(
    breakpoints: &[BigFloat],
    f: impl Fn(&BigFloat) -> Result<BigFloat> + Sync,
    ctx: &PrecisionContext,
) -> Result<IntegralResult> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidArgument("need at least one panel".into()));
    }
    let rule = gauss_legendre(GAUSS_POINTS, ctx.bits());
    let per_panel = breakpoints
        .par_windows(2)
        .map(|ab| {
            let (a, b) = (&ab[0], &ab[1]);
            let m = (a + b).ldexp(-1);
            let coarse = panel_sum(&rule, a, b, &f)?;
            let fine = panel_sum(&rule, a, &m, &f)? + panel_sum(&rule, &m, b, &f)?;
            Ok((coarse, fine))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coarse = BigFloat::zero(ctx.bits());
    let mut fine = BigFloat::zero(ctx.bits());
    for (c, f) in per_panel {
        coarse = coarse + c;
        fine = fine + f;
    }
    Ok(IntegralResult {
        estimated_error: (&coarse - &fine).abs().to_f64(),
        value: fine,
        panels: breakpoints.len() - 1,
        truncation_point: breakpoints.last().unwrap().to_f64(),
    })
}

/// `0, h, 2h, …` up to and including `end`.
fn uniform(end: f64, h: f64, ctx: &PrecisionContext) -> Vec<BigFloat> {
    let n = (end / h).ceil().max(1.0) as usize;
    let step = ctx.f64(end) / ctx.int(n as i64);
    (0..=n).map(|i| &step * ctx.int(i as i64)).collect()
}

/// How the reference value was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaMethod {
    ExactFactorial,
    Quadrature { panels: usize },
}

#[derive(Debug, Clone)]
pub struct GammaReference {
    pub value: BigFloat,
    pub estimated_error: f64,
    pub method: GammaMethod,
}

/// Lower bound on ln Γ(s) used to size the truncation window.
fn ln_gamma_lower_bound(s: f64) -> f64 {
    if s >= 1.0 {
        (s - 0.5) * s.ln() - s
    } else {
        // Γ(s) ≥ 0.885 on (0, 1], and Γ(s) > 1/s − γ there
        (-0.13f64).max((1.0 / s - 0.58).ln())
    }
}

/// Γ(s) for s > 0. Integers use the exact factorial; otherwise the integral
/// is split at t = 1: `∫_0^1` by termwise integration of the exponential
/// series, `∫_1^T` by Gauss–Legendre with a tail below the context
/// resolution.
pub fn gamma_reference(s: f64, ctx: &PrecisionContext) -> Result<GammaReference> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(
            "gamma_reference",
            format!("s = {s} is not > 0"),
        ));
    }
    if s.fract() == 0.0 && s <= EXACT_FACTORIAL_LIMIT {
        let f = factorial(s as u64 - 1);
        return Ok(GammaReference {
            value: BigFloat::from_bigint(&f, ctx.bits()),
            estimated_error: 0.0,
            method: GammaMethod::ExactFactorial,
        });
    }
    let wctx = ctx.widen(QUAD_GUARD_DIGITS);
    let sb = wctx.f64(s);

    // ∫_0^1 t^{s−1} e^{−t} dt = Σ_k (−1)^k / (k!·(s+k))
    let mut head = BigFloat::zero(wctx.bits());
    let mut inv_fact = wctx.int(1);
    let cutoff = -(wctx.bits() as i64) - 8;
    for k in 0i64.. {
        let term = &inv_fact / (&sb + wctx.int(k));
        if k > 0 && term.top().is_none_or(|t| t < cutoff) {
            break;
        }
        head = if k % 2 == 0 { head + term } else { head - term };
        inv_fact = inv_fact / wctx.int(k + 1);
    }

    // window end: past the peak and with integrand below the resolution
    let budget = ln_gamma_lower_bound(s) - (wctx.digits() as f64 + 2.0) * std::f64::consts::LN_10;
    let mut end = (2.0 * s).max(2.0);
    while (s - 1.0) * end.ln() - end > budget {
        end += (end / 8.0).max(1.0);
    }
    let max_width = s.sqrt().max(4.0);
    let mut points = vec![1.0];
    while *points.last().unwrap() < end {
        let a = *points.last().unwrap();
        points.push((a * 1.5).min(a + max_width).min(end));
    }
    let breaks: Vec<BigFloat> = points.iter().map(|&t| wctx.f64(t)).collect();
    let sm1 = &sb - wctx.int(1);
    let body = integrate(&breaks, |t| Ok((&sm1 * t.ln() - t).exp()), &wctx)?;
    let value = (head + &body.value).with_prec(ctx.bits());
    Ok(GammaReference {
        estimated_error: body.estimated_error,
        value,
        method: GammaMethod::Quadrature {
            panels: body.panels,
        },
    })
}

/// Exponent budget: integrands below e^{−cutoff} are dropped.
fn exponent_cutoff(ctx: &PrecisionContext) -> f64 {
    (ctx.digits() as f64 + 10.0) * std::f64::consts::LN_10
}

/// `∫_{−1}^{∞} e^{−s·g(x)} dx`.
///
/// The negative half uses `x = e^{−w} − 1`, so that
/// `∫_{−1}^0 e^{−s·g(x)} dx = ∫_0^∞ e^{−s(e^{−w} − 1 + w)} e^{−w} dw`.
pub fn laplace_integral(s: f64, ctx: &PrecisionContext) -> Result<IntegralResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(
            "laplace_integral",
            format!("s = {s} is not > 0"),
        ));
    }
    let wctx = ctx.widen(QUAD_GUARD_DIGITS);
    let target = exponent_cutoff(&wctx) / s;
    let x_end = solve_g_f64(target).ok_or_else(|| Error::domain("laplace_integral", "window"))?;
    let w_end = solve_w_f64(target).ok_or_else(|| Error::domain("laplace_integral", "window"))?;
    let width = (1.0 / s.sqrt()).min(4.0);
    let sb = wctx.f64(s);
    let one = wctx.int(1);

    let positive = integrate(
        &uniform(x_end, width, &wctx),
        |x| Ok((-(&sb * (x - x.ln_1p()))).exp()),
        &wctx,
    )?;
    let negative = integrate(
        &uniform(w_end, width, &wctx),
        |w| {
            let e = (-w).exp();
            let tail = &e - &one + w;
            Ok((-(&sb * tail)).exp() * e)
        },
        &wctx,
    )?;
    Ok(IntegralResult {
        value: (positive.value + negative.value).with_prec(ctx.bits()),
        estimated_error: positive.estimated_error + negative.estimated_error,
        panels: positive.panels + negative.panels,
        truncation_point: x_end.max(w_end),
    })
}

/// `∫_0^∞ 2(y(u/√s) + y(−u/√s)) e^{−u²} du`.
pub fn substituted_integral(s: f64, ctx: &PrecisionContext) -> Result<IntegralResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(
            "substituted_integral",
            format!("s = {s} is not > 0"),
        ));
    }
    let wctx = ctx.widen(QUAD_GUARD_DIGITS);
    let u_end = exponent_cutoff(&wctx).sqrt();
    let root_s = wctx.f64(s).sqrt();
    let result = integrate(
        &uniform(u_end, 0.5, &wctx),
        |u| {
            let v = u / &root_s;
            let pair = y_of_v(&v, &wctx)? + y_of_v(&-v, &wctx)?;
            Ok(pair.ldexp(1) * (-(u * u)).exp())
        },
        &wctx,
    )?;
    Ok(IntegralResult {
        value: result.value.with_prec(ctx.bits()),
        ..result
    })
}

/// `s^{s+1} e^{−s}`, the factor turning the Laplace integral into Γ(s+1).
pub fn laplace_prefactor(s: f64, ctx: &PrecisionContext) -> BigFloat {
    let sb = ctx.f64(s);
    ((&sb + ctx.int(1)) * sb.ln() - &sb).exp()
}

/// `(s/e)^s √s`, the factor turning the substituted integral into Γ(s+1).
pub fn substituted_prefactor(s: f64, ctx: &PrecisionContext) -> BigFloat {
    let sb = ctx.f64(s);
    (&sb * (sb.ln() - ctx.int(1))).exp() * sb.sqrt()
}

#[derive(Debug, Clone)]
pub struct LimitRow {
    pub s: f64,
    pub value: BigFloat,
    /// |value − √(2π)|
    pub deviation: BigFloat,
}

/// Substituted integral at each `s`, with its distance from √(2π).
pub fn limit_check(s_list: &[f64], ctx: &PrecisionContext) -> Result<Vec<LimitRow>> {
    if s_list.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidArgument("every s must be > 0".into()));
    }
    if s_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "s values must be strictly increasing".into(),
        ));
    }
    let target = ctx.sqrt_two_pi();
    s_list
        .iter()
        .map(|&s| {
            let value = substituted_integral(s, ctx)?.value;
            let deviation = (&value - &target).abs();
            Ok(LimitRow {
                s,
                value,
                deviation,
            })
        })
        .collect()
}

pub fn deviations_strictly_decreasing(rows: &[LimitRow]) -> bool {
    rows.windows(2).all(|w| w[1].deviation < w[0].deviation)
}
