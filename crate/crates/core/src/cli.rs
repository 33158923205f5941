//! The `elliptic` command line.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::eisenstein::{eisenstein_series, Eisenstein};
use crate::ellf::{f_mero, FContext};
use crate::format::{fmt_complex, fmt_g12, parse_complex};
use crate::hyper::{hyp2f1_taylor, HypParams};
use crate::inversion::q_of_x;
use crate::jacobi::{jacobi_eval, JacobiContext, JacobiFn};
use crate::qseries::QSeries;
use crate::report::VerificationReport;
use crate::suites::{run_suite, Suite, SuiteOptions};
use crate::theta::{theta_num, theta_series, x_num, x_series, Level, ThetaKind, ThetaSeriesKind};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const TOL_ENV: &str = "ELLIPTIC_DEFAULT_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "elliptic", version, about = "Exact q-series and numeric checks for elliptic-function identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print exact q-series coefficients.
    Series {
        #[arg(value_enum)]
        name: SeriesName,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Text)]
        format: SeriesFormat,
    },
    /// Run a named verification suite, or `all`.
    Verify(VerifyArgs),
    /// Evaluate a function numerically.
    Eval(EvalArgs),
    /// Recover the nome from a modulus.
    Invert {
        #[arg(long, value_parser = ["3", "4"])]
        level: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
    #[value(name = "R")]
    R,
    #[value(name = "theta3")]
    Theta3,
    #[value(name = "cubic_a")]
    CubicA,
    #[value(name = "x4")]
    X4,
    #[value(name = "x3")]
    X3,
    #[value(name = "2f1_half")]
    Hyp2f1Half,
    #[value(name = "2f1_third")]
    Hyp2f1Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    suite: String,
    /// Truncation order for the exact suites.
    #[arg(long)]
    order: Option<usize>,
    /// Replace every pass threshold of the suite.
    #[arg(long)]
    tol: Option<f64>,
    /// One JSON object per line.
    #[arg(long)]
    json: bool,
    /// Run suites one after another, printing each as it finishes.
    #[arg(long)]
    serial: bool,
    /// Report runtime_ms as 0 so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalFn {
    #[value(name = "S")]
    S,
    #[value(name = "C")]
    C,
    #[value(name = "C1")]
    C1,
    #[value(name = "f")]
    F,
    #[value(name = "theta3")]
    Theta3,
    #[value(name = "cubic_a")]
    CubicA,
    #[value(name = "x4")]
    X4,
    #[value(name = "x3")]
    X3,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: EvalFn,
    #[arg(long, conflicts_with = "y", required_unless_present = "y", allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

/// Usage problems detected after parsing; reported with exit code 2.
struct Usage(String);

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Series { name, order, format } => cmd_series(name, order, format, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Invert { level, x, tol } => cmd_invert(&level, x, tol, out),
    };
    match result {
        Ok(code) => code,
        Err(Outcome::Usage(Usage(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Outcome::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
        Err(Outcome::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

enum Outcome {
    Usage(Usage),
    Domain(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Outcome {
    fn from(e: std::io::Error) -> Self {
        Outcome::Io(e)
    }
}

impl From<crate::Error> for Outcome {
    fn from(e: crate::Error) -> Self {
        Outcome::Domain(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Outcome {
    Outcome::Usage(Usage(msg.into()))
}

fn cmd_series(name: SeriesName, order: usize, format: SeriesFormat, out: &mut dyn Write) -> Result<i32, Outcome> {
    let series = match name {
        SeriesName::P => eisenstein_series(Eisenstein::P, order),
        SeriesName::Q => eisenstein_series(Eisenstein::Q, order),
        SeriesName::R => eisenstein_series(Eisenstein::R, order),
        SeriesName::Theta3 => theta_series(ThetaSeriesKind::Theta3, order),
        SeriesName::CubicA => theta_series(ThetaSeriesKind::CubicA, order),
        SeriesName::X4 | SeriesName::X3 => {
            let level = if name == SeriesName::X4 { Level::Four } else { Level::Three };
            x_series(level, order).map_err(|e| usage(e.to_string()))?
        }
        SeriesName::Hyp2f1Half => QSeries::new(hyp2f1_taylor(&HypParams::level4(), order)?),
        SeriesName::Hyp2f1Third => QSeries::new(hyp2f1_taylor(&HypParams::level3(), order)?),
    };
    match format {
        SeriesFormat::Text => out.write_all(series.to_text().as_bytes())?,
        SeriesFormat::Json => {
            let line = serde_json::to_string(&series.to_fraction_strings()).expect("strings serialize");
            writeln!(out, "{line}")?;
        }
    }
    Ok(EXIT_OK)
}

fn suites_for(name: &str) -> Option<Vec<Suite>> {
    if name == "all" {
        Some(Suite::ALL.to_vec())
    } else {
        Suite::from_name(name).map(|s| vec![s])
    }
}

fn write_reports(reports: &[VerificationReport], args: &VerifyArgs, out: &mut dyn Write) -> std::io::Result<bool> {
    let mut all_pass = true;
    for r in reports {
        let mut r = r.clone();
        if args.no_timing {
            r.runtime_ms = 0;
        }
        all_pass &= r.pass;
        if args.json {
            writeln!(out, "{}", r.to_json_line())?;
        } else {
            writeln!(out, "{r}")?;
        }
    }
    out.flush()?;
    Ok(all_pass)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Outcome> {
    let suites = suites_for(&args.suite).ok_or_else(|| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).chain(["all"]).collect();
        usage(format!("unknown suite '{}'; expected one of: {}", args.suite, known.join(", ")))
    })?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage(format!("--tol must be positive and finite, got {t}")));
        }
    }
    let opts = SuiteOptions { order: args.order, tol: args.tol };
    let mut all_pass = true;
    if args.serial || suites.len() == 1 {
        for s in suites {
            all_pass &= write_reports(&run_suite(s, &opts), args, out)?;
        }
    } else {
        let results: Vec<Vec<VerificationReport>> = suites.par_iter().map(|&s| run_suite(s, &opts)).collect();
        for reports in &results {
            all_pass &= write_reports(reports, args, out)?;
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
}

/// Explicit `--tol`, then `ELLIPTIC_DEFAULT_TOL`, then 1e-10.
fn resolve_tol(flag: Option<f64>) -> Result<f64, Outcome> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{TOL_ENV}={s} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(usage(format!("tolerance must be positive and finite, got {tol}")))
    }
}

fn write_value(out: &mut dyn Write, value: Complex64, real_only: bool, tol: f64) -> std::io::Result<()> {
    let v = if real_only { fmt_g12(value.re) } else { fmt_complex(value) };
    writeln!(out, "{v}\ttol={}", fmt_g12(tol))
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, Outcome> {
    let tol = resolve_tol(args.tol)?;
    let theta = match &args.theta {
        Some(s) => Some(parse_complex(s).ok_or_else(|| usage(format!("cannot parse --theta '{s}'")))?),
        None => None,
    };
    let is_real = |t: Complex64| t.im == 0.0;
    match args.function {
        EvalFn::S | EvalFn::C | EvalFn::C1 => {
            let theta = theta.ok_or_else(|| usage("--theta is required for S, C and C1"))?;
            let ctx = match (args.q, args.y) {
                (_, Some(y)) => JacobiContext::new(y)?,
                (Some(q), None) => JacobiContext::from_nome(q)?,
                (None, None) => unreachable!("clap requires --q or --y"),
            };
            let f = match args.function {
                EvalFn::S => JacobiFn::S,
                EvalFn::C => JacobiFn::C,
                _ => JacobiFn::C1,
            };
            write_value(out, jacobi_eval(f, theta, &ctx, tol)?, is_real(theta), tol)?;
        }
        EvalFn::F => {
            let theta = theta.ok_or_else(|| usage("--theta is required for f"))?;
            let q = match (args.q, args.y) {
                (_, Some(y)) => JacobiContext::new(y)?.q(),
                (Some(q), None) => q,
                (None, None) => unreachable!("clap requires --q or --y"),
            };
            let ctx = FContext::real(q)?;
            write_value(out, f_mero(theta, &ctx, tol)?, is_real(theta), tol)?;
        }
        EvalFn::Theta3 | EvalFn::CubicA | EvalFn::X4 | EvalFn::X3 => {
            if theta.is_some() {
                return Err(usage("--theta only applies to S, C, C1 and f"));
            }
            let q = match (args.q, args.y) {
                (_, Some(y)) => JacobiContext::new(y)?.q(),
                (Some(q), None) => q,
                (None, None) => unreachable!("clap requires --q or --y"),
            };
            let v = match args.function {
                EvalFn::Theta3 => theta_num(ThetaKind::Theta3, q, tol)?,
                EvalFn::CubicA => theta_num(ThetaKind::CubicA, q, tol)?,
                EvalFn::X4 => x_num(Level::Four, q, tol)?,
                _ => x_num(Level::Three, q, tol)?,
            };
            write_value(out, Complex64::new(v, 0.0), true, tol)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_invert(level: &str, x: f64, tol: Option<f64>, out: &mut dyn Write) -> Result<i32, Outcome> {
    let tol = resolve_tol(tol)?;
    let level = Level::from_number(level.parse().expect("validated by clap")).expect("validated by clap");
    let q = q_of_x(level, x, tol)?;
    write_value(out, Complex64::new(q, 0.0), true, tol)?;
    Ok(EXIT_OK)
}
