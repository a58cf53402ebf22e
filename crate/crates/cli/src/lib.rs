//! Command-line front end for the `cossqrt` kernel: point evaluation,
//! derivative ladders, series coefficients, verification suites and
//! figure data, written as CSV or JSON.

pub mod output;
pub mod suites;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use cossqrt::bounds::{gronwall_bound, DerivativeEvaluator};
use cossqrt::recurrence::build_ladder;
use cossqrt::report::{decimal, BoundReport};
use cossqrt::series::{coeff_c, derivative_at_zero, CoeffSequence};
use cossqrt::{ApproxValue, CosError, EvalConfig, ExactRational};
use rug::Float;

pub use output::{OutputFormat, Table};
pub use suites::{Suite, VerifyParams};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Cos(#[from] CosError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub eval: EvalConfig,
    pub format: OutputFormat,
    /// Standard output when absent.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn float(&self, x: &ExactRational) -> Float {
        x.to_float(self.eval.precision_bits).0
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cossqrt",
    version,
    about = "Certified derivatives of cos(sqrt x) and checks of their bounds"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub precision_bits: u32,
    /// Absolute error target of each evaluation.
    #[arg(long, global = true, default_value_t = 1e-50)]
    pub tolerance: f64,
    /// Below this |x| every order is summed from the series.
    #[arg(long, global = true, default_value_t = 0.25)]
    pub switch_radius: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Numeric arguments accept integers, decimals (`-2.5e-3`) and exact
/// fractions (`355/113`).
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the n-th derivative at x.
    Eval {
        n: u32,
        #[arg(allow_hyphen_values = true)]
        x: ExactRational,
    },
    /// All derivatives of orders 0..=top at x.
    Ladder {
        #[arg(allow_hyphen_values = true)]
        x: ExactRational,
        top: u32,
    },
    /// Exact series coefficients c(n, k) for k = 0..=k_max.
    Coeffs { n: u32, k_max: u32 },
    /// Run a verification suite; exits with status 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest derivative order checked.
        #[arg(long)]
        n_max: Option<u32>,
        /// Largest coefficient index (coeff suite).
        #[arg(long)]
        k_max: Option<u32>,
        /// Right end X of the checked interval.
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<ExactRational>,
        /// Base grid size before refinement.
        #[arg(long)]
        grid_points: Option<usize>,
        /// Comma-separated left endpoints a <= 0.
        #[arg(long = "a", value_delimiter = ',', allow_hyphen_values = true)]
        a_values: Vec<ExactRational>,
        /// Seed for the complex sample points (identities suite).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Normalized derivatives (2n)!/n! Cos^(n)(x) on a uniform grid.
    Figure {
        #[arg(long, default_value = "-10", allow_hyphen_values = true)]
        x_min: ExactRational,
        #[arg(long, default_value = "40", allow_hyphen_values = true)]
        x_max: ExactRational,
        #[arg(long, default_value_t = 501)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        orders: Vec<u32>,
    },
}

fn approx_cells(v: &ApproxValue) -> [String; 2] {
    [decimal(&v.value), decimal(&v.abs_error)]
}

/// Value, error bound and method of `Cos^(n)(x)`, with `n!/(2n)!` alongside.
pub fn cmd_eval(n: u32, x: &ExactRational, cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(["n", "x", "value", "abs_error", "method", "bound", "bound_decimal"]);
    let bound = gronwall_bound(n);
    let bound_decimal = decimal(&bound.to_float(cfg.eval.precision_bits).0);
    let (value, method) = if x.is_zero() {
        let exact = derivative_at_zero(n);
        ([exact.to_string(), "0".to_string()], "exact")
    } else {
        let ladder = build_ladder(&cfg.float(x), n, &cfg.eval)?;
        (
            approx_cells(&ladder.orders[n as usize]),
            ladder.methods[n as usize].as_str(),
        )
    };
    let [value, err] = value;
    t.push(vec![
        n.to_string(),
        decimal(&cfg.float(x)),
        value,
        err,
        method.to_string(),
        bound.to_string(),
        bound_decimal,
    ]);
    Ok(t)
}

pub fn cmd_ladder(x: &ExactRational, top: u32, cfg: &RunConfig) -> Result<Table, CliError> {
    let ladder = build_ladder(&cfg.float(x), top, &cfg.eval)?;
    let mut t = Table::new(["order", "value", "abs_error", "method", "bound"]);
    for (k, (v, m)) in ladder.orders.iter().zip(&ladder.methods).enumerate() {
        let [value, err] = approx_cells(v);
        t.push(vec![
            k.to_string(),
            value,
            err,
            m.as_str().to_string(),
            gronwall_bound(k as u32).to_string(),
        ]);
    }
    Ok(t)
}

pub fn cmd_coeffs(n: u32, k_max: u32, cfg: &RunConfig) -> Table {
    let mut t = Table::new(["k", "coefficient", "decimal"]);
    for (k, c) in CoeffSequence::new(n).take(k_max as usize + 1).enumerate() {
        debug_assert_eq!(c, coeff_c(n, k as u32));
        t.push(vec![
            k.to_string(),
            c.to_string(),
            decimal(&c.to_float(cfg.eval.precision_bits).0),
        ]);
    }
    t
}

pub fn cmd_verify(suite: Suite, params: &VerifyParams, cfg: &RunConfig) -> Result<Vec<BoundReport>, CliError> {
    Ok(suites::run_suite(suite, params, &cfg.eval)?)
}

/// Sample points `x_min + i (x_max - x_min) / (samples - 1)`, exact.
pub fn figure_grid(
    x_min: &ExactRational,
    x_max: &ExactRational,
    samples: usize,
) -> Result<Vec<ExactRational>, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("figure needs at least one sample".into()));
    }
    if samples == 1 {
        if x_min != x_max {
            return Err(CliError::Usage("a single sample needs x_min = x_max".into()));
        }
        return Ok(vec![x_min.clone()]);
    }
    if x_min >= x_max {
        return Err(CliError::Usage("figure needs x_min < x_max".into()));
    }
    let step = &(x_max - x_min) / &ExactRational::from_integer(samples as i64 - 1);
    Ok((0..samples)
        .map(|i| x_min + &(&step * &ExactRational::from_integer(i as i64)))
        .collect())
}

/// Columns `x`, then `d<n>` = `(2n)!/n! Cos^(n)(x)` and `err<n>` for each
/// order, then `status`. At `x = 0` the normalized values are the exact
/// integers `(-1)^n`. A row whose evaluation fails is kept with empty cells
/// and the error in `status`.
pub fn cmd_figure(
    x_min: &ExactRational,
    x_max: &ExactRational,
    samples: usize,
    orders: &[u32],
    cfg: &RunConfig,
) -> Result<Table, CliError> {
    let grid = figure_grid(x_min, x_max, samples)?;
    let evaluators = orders
        .iter()
        .map(|&n| DerivativeEvaluator::new(n, &cfg.eval))
        .collect::<Result<Vec<_>, _>>()?;
    let scales: Vec<ExactRational> = orders.iter().map(|&n| gronwall_bound(n).recip()).collect();
    let mut header = vec!["x".to_string()];
    for n in orders {
        header.push(format!("d{n}"));
        header.push(format!("err{n}"));
    }
    header.push("status".into());
    let mut t = Table::new(header);
    let prec = cfg.eval.precision_bits;
    for x in &grid {
        let xf = cfg.float(x);
        let mut row = vec![decimal(&xf)];
        let mut status = "ok".to_string();
        for (eval, scale) in evaluators.iter().zip(&scales) {
            if x.is_zero() {
                row.push((&derivative_at_zero(eval.order()) * scale).to_string());
                row.push("0".into());
                continue;
            }
            match eval.sample(&xf) {
                Ok(s) => {
                    let factor = ApproxValue::from_rational(scale, prec + 64);
                    let v = s.value.mul_coeff(&factor).round_to(prec);
                    row.extend(approx_cells(&v));
                }
                Err(e) => {
                    row.push(String::new());
                    row.push(String::new());
                    status = e.to_string();
                }
            }
        }
        row.push(status);
        t.push(row);
    }
    Ok(t)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let eval = EvalConfig::new(
        cli.precision_bits,
        cli.tolerance,
        cli.switch_radius,
        EvalConfig::default().max_terms,
    )?;
    let cfg = RunConfig {
        eval,
        format: cli.format,
        out: cli.out.clone(),
    };
    let table = match &cli.command {
        Command::Eval { n, x } => cmd_eval(*n, x, &cfg)?,
        Command::Ladder { x, top } => cmd_ladder(x, *top, &cfg)?,
        Command::Coeffs { n, k_max } => cmd_coeffs(*n, *k_max, &cfg),
        Command::Figure {
            x_min,
            x_max,
            samples,
            orders,
        } => cmd_figure(x_min, x_max, *samples, orders, &cfg)?,
        Command::Verify {
            suite,
            n_max,
            k_max,
            x_max,
            grid_points,
            a_values,
            seed,
        } => {
            let params = VerifyParams {
                n_max: *n_max,
                k_max: *k_max,
                x_max: x_max.clone(),
                grid_points: *grid_points,
                a_values: a_values.clone(),
                seed: *seed,
            };
            let reports = cmd_verify(*suite, &params, &cfg)?;
            let records: Vec<_> = reports.iter().map(BoundReport::to_record).collect();
            let mut out = open_output(&cfg.out)?;
            output::write_reports(&records, cfg.format, &mut out)?;
            out.flush()?;
            let failed: Vec<_> = records.iter().filter(|r| !r.passed).collect();
            for r in &failed {
                eprintln!(
                    "FAILED {} {} worst_point={} min_slack={}",
                    r.inequality_id, r.params, r.worst_point, r.min_slack
                );
            }
            return Ok(failed.is_empty());
        }
    };
    let mut out = open_output(&cfg.out)?;
    table.write(cfg.format, &mut out)?;
    out.flush()?;
    Ok(true)
}

/// Run a parsed command line and return the process exit status.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
