//! Verification suites behind `stirling verify`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::QSqrt2;
use crate::oracle::{method1_coefficient, stirling_from_bernoulli, MIN_STABILIZED_DIGITS};
use crate::precision::{BigFloat, PrecisionContext};
use crate::quadrature::{
    deviations_strictly_decreasing, gamma_reference, laplace_integral, laplace_prefactor,
    limit_check, substituted_integral, substituted_prefactor,
};
use crate::report::format_error;
use crate::series::{standard_table, stirling_coefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Oracles,
    Limits,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Oracles => "oracles",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub tolerance: String,
    pub measured: String,
    pub passed: bool,
}

/// Values of `s` at which the integral identities are checked.
pub const IDENTITY_S: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 20.0];
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Orders recovered by the limit route, and the agreement required.
pub const METHOD1_ORDERS: std::ops::RangeInclusive<usize> = 1..=8;
pub const METHOD1_DIGITS: u32 = 120;
pub const METHOD1_MIN_AGREEMENT: f64 = 8.0;

pub const LIMIT_S: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
pub const LIMIT_BAND: f64 = 0.15;

fn rel_gap(a: &BigFloat, b: &BigFloat) -> f64 {
    ((a - b) / b).abs().to_f64()
}

/// Relative residuals of both integral forms of Γ(s+1).
pub fn identity_residuals(s: f64, ctx: &PrecisionContext) -> Result<(f64, f64)> {
    let gamma = gamma_reference(s + 1.0, ctx)?.value;
    let laplace = laplace_prefactor(s, ctx) * laplace_integral(s, ctx)?.value;
    let substituted = substituted_prefactor(s, ctx) * substituted_integral(s, ctx)?.value;
    Ok((rel_gap(&laplace, &gamma), rel_gap(&substituted, &gamma)))
}

pub fn identities(ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for s in IDENTITY_S {
        let (laplace, substituted) = identity_residuals(s, ctx)?;
        for (form, residual) in [("laplace", laplace), ("substituted", substituted)] {
            checks.push(Check {
                suite: "identities",
                name: format!("{form} integral = Γ(s+1) at s = {s}"),
                tolerance: format_error(IDENTITY_TOLERANCE),
                measured: format_error(residual),
                passed: residual <= IDENTITY_TOLERANCE,
            });
        }
    }
    let parity = standard_table().check_parity();
    checks.push(Check {
        suite: "identities",
        name: "parity of a_n (n≤40)".into(),
        tolerance: "exact".into(),
        measured: match &parity {
            Ok(()) => "even: pure sqrt(2), odd: rational".into(),
            Err(e) => e.to_string(),
        },
        passed: parity.is_ok(),
    });
    Ok(checks)
}

/// Leading decimal digits on which `estimate` and `exact` agree.
pub fn agreement_digits(estimate: &BigFloat, exact: &BigFloat) -> f64 {
    let rel = rel_gap(estimate, exact);
    if rel == 0.0 {
        f64::INFINITY
    } else {
        -rel.log10()
    }
}

pub fn oracles(ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let table = standard_table();
    let ours = stirling_coefficients(&table.prefix(20).expect("cached table covers 20"))?;
    let theirs = stirling_from_bernoulli(10);
    let same = ours == theirs;
    checks.push(Check {
        suite: "oracles",
        name: "stirling_from_bernoulli == stirling_coefficients (k≤10)".into(),
        tolerance: "exact".into(),
        measured: if same {
            "EXACT MATCH".into()
        } else {
            "MISMATCH".into()
        },
        passed: same,
    });

    let wide = PrecisionContext::new(ctx.digits().max(METHOD1_DIGITS))?;
    for n in METHOD1_ORDERS {
        let (measured, passed) = match method1_coefficient(n, table.as_slice(), &wide) {
            Ok(est) => {
                let exact = table.get(n).expect("cached").to_decimal(&wide);
                let digits = agreement_digits(&est.value, &exact);
                (
                    format!(
                        "{:.1} digits (stabilized {})",
                        digits.min(wide.digits() as f64),
                        est.stabilized_digits
                    ),
                    digits >= METHOD1_MIN_AGREEMENT,
                )
            }
            Err(e) => (e.to_string(), false),
        };
        checks.push(Check {
            suite: "oracles",
            name: format!("limit route a_{n} at {} digits", wide.digits()),
            tolerance: format!("≥ {METHOD1_MIN_AGREEMENT} digits"),
            measured,
            passed,
        });
    }

    let n = *METHOD1_ORDERS.end();
    let mut settled = Vec::new();
    for k in 0..n {
        let mut prefix = table.as_slice()[..n].to_vec();
        prefix[k] = &prefix[k] + &QSqrt2::from_ints(1, 1_000_000, 0, 1);
        match method1_coefficient(n, &prefix, &wide) {
            Err(Error::Unstabilized(_)) => {}
            Err(e) => settled.push(format!("a_{k}: {e}")),
            Ok(est) => settled.push(format!(
                "a_{k}: settled to {} digits",
                est.stabilized_digits
            )),
        }
    }
    checks.push(Check {
        suite: "oracles",
        name: format!("limit route for a_{n} rejects each prefix entry perturbed by 1e-6"),
        tolerance: format!("stabilized digits < {MIN_STABILIZED_DIGITS}"),
        measured: if settled.is_empty() {
            format!("all {n} perturbations unstabilized")
        } else {
            settled.join("; ")
        },
        passed: settled.is_empty(),
    });
    Ok(checks)
}

pub fn limits(ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let rows = limit_check(&LIMIT_S, ctx)?;
    let decreasing = deviations_strictly_decreasing(&rows);
    let listed: Vec<String> = rows
        .iter()
        .map(|r| format!("s={}: {}", r.s, format_error(r.deviation.to_f64())))
        .collect();
    let last = rows.last().expect("non-empty");
    let predicted = ctx.sqrt_two_pi() / ctx.int(12);
    let scaled = &last.deviation * ctx.f64(last.s);
    let ratio = (scaled / predicted).to_f64();
    Ok(vec![
        Check {
            suite: "limits",
            name: "deviation from sqrt(2π) strictly decreasing".into(),
            tolerance: "strict".into(),
            measured: listed.join(", "),
            passed: decreasing,
        },
        Check {
            suite: "limits",
            name: format!("deviation·s / (sqrt(2π)/12) at s = {}", last.s),
            tolerance: format!("within {LIMIT_BAND}"),
            measured: format!("{ratio:.6}"),
            passed: (ratio - 1.0).abs() <= LIMIT_BAND,
        },
    ])
}

pub fn run(suite: Suite, ctx: &PrecisionContext) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Identities => identities(ctx)?,
        Suite::Oracles => oracles(ctx)?,
        Suite::Limits => limits(ctx)?,
        Suite::All => {
            let mut all = identities(ctx)?;
            all.extend(oracles(ctx)?);
            all.extend(limits(ctx)?);
            all
        }
    })
}
