use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stirling_core::approximant::error_table;
use stirling_core::precision::DEFAULT_DIGITS;
use stirling_core::report::{approx_output, coeffs_output, stirling_output, verify_output, Format};
use stirling_core::series::{compute_coefficients, stirling_coefficients};
use stirling_core::verify::{run, Suite};
use stirling_core::{Error, PrecisionContext};

/// Guard rail on the number of coefficients a single run may request.
const MAX_INDEX: usize = 200;

#[derive(Parser)]
#[command(name = "stirling")]
#[command(about = "Exact Stirling-series coefficients and numerical checks")]
#[command(version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Working precision in significant decimal digits
    #[arg(long, global = true, env = "STIRLING_DIGITS", default_value_t = DEFAULT_DIGITS)]
    digits: u32,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// MacLaurin coefficients a_0..a_max of y(v)
    Coeffs {
        #[arg(long)]
        max: usize,
    },
    /// Stirling-series coefficients c_0..c_max
    Stirling {
        #[arg(long)]
        max: usize,
    },
    /// Truncated Stirling approximation against Γ(s+1)
    Approx {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        order: usize,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Error table over several s values and orders
    Table {
        #[arg(long, value_delimiter = ',', required = true)]
        s_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::InvalidArgument(_) | Error::PrecisionTooLow { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn check_max(max: usize) -> Result<(), Failure> {
    if max > MAX_INDEX {
        return Err(Failure::Usage(format!("--max must be at most {MAX_INDEX}")));
    }
    Ok(())
}

/// Stirling coefficients up to `c_k` need `a_0..a_{2k}`.
fn series_for(k: usize) -> Result<stirling_core::StirlingSeries, Failure> {
    Ok(stirling_coefficients(&compute_coefficients(2 * k))?)
}

fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    let ctx = PrecisionContext::new(cli.digits)?;
    let (output, passed) = match &cli.command {
        Commands::Coeffs { max } => {
            check_max(*max)?;
            (coeffs_output(&compute_coefficients(*max)), true)
        }
        Commands::Stirling { max } => {
            check_max(*max)?;
            (stirling_output(&series_for(*max)?), true)
        }
        Commands::Approx { s, order } => {
            check_max(*order)?;
            let report = error_table(&[*s], &[*order], &series_for(*order)?, &ctx)?;
            (approx_output("approx", &report.rows, ctx.digits()), true)
        }
        Commands::Table { s_list, orders } => {
            let top = orders.iter().copied().max().unwrap_or(0);
            check_max(top)?;
            let report = error_table(s_list, orders, &series_for(top)?, &ctx)?;
            (approx_output("table", &report.rows, ctx.digits()), true)
        }
        Commands::Verify { suite } => {
            let checks = run(*suite, &ctx)?;
            let passed = checks.iter().all(|c| c.passed);
            (verify_output(suite.name(), &checks, ctx.digits()), passed)
        }
    };
    Ok((output.render(cli.format)?, passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
