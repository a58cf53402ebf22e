//! Verification suites: which checks run, on which domains, with which
//! defaults.

use clap::ValueEnum;
use cossqrt::bounds::{
    verify_coeff_inequality, verify_cosh, verify_general, verify_main, verify_monotone_negative, verify_strictness,
};
use cossqrt::recurrence::{
    build_ladder_unchecked, disk_sample, ode_residual, pythagorean_residual, strictly_decreasing,
};
use cossqrt::report::{decimal, BoundReport, BoundValue, Domain, InequalityId, Params, PointSlack, Sample};
use cossqrt::series::eval_series;
use cossqrt::sinc::{
    gronwall_identity_residual, sinc_derivative_quadrature, sinc_derivative_series, verify_gronwall0, QuadratureSpec,
};
use cossqrt::{ApproxValue, EvalConfig, ExactRational, Result};
use rug::float::{Constant, Round};
use rug::{Complex, Float};

pub const DEFAULT_SEED: u64 = 2024;
pub const IDENTITY_POINTS: usize = 50;
pub const IDENTITY_RADIUS: f64 = 50.0;
/// Interval `[STRICT_DELTA, STRICT_X]` and highest order of the strict-supremum checks.
pub const STRICT_DELTA: (i64, i64) = (1, 100);
pub const STRICT_X: u32 = 100;
pub const STRICT_MAX_ORDER: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Main,
    General,
    Cosh,
    Monotone,
    Coeff,
    Gronwall0,
    Identities,
    All,
}

/// Suite parameters; `None` means the suite's own default.
#[derive(Clone, Debug, Default)]
pub struct VerifyParams {
    pub n_max: Option<u32>,
    pub k_max: Option<u32>,
    pub x_max: Option<ExactRational>,
    pub grid_points: Option<usize>,
    pub a_values: Vec<ExactRational>,
    pub seed: Option<u64>,
}

impl VerifyParams {
    fn n_max(&self, default: u32) -> u32 {
        self.n_max.unwrap_or(default)
    }

    fn grid(&self, default: usize) -> usize {
        self.grid_points.unwrap_or(default)
    }

    fn x_max(&self, default: i64, cfg: &EvalConfig) -> Float {
        let x = self
            .x_max
            .clone()
            .unwrap_or_else(|| ExactRational::from_integer(default));
        x.to_float(cfg.precision_bits).0
    }

    fn a_values(&self, cfg: &EvalConfig) -> Vec<Float> {
        let values = if self.a_values.is_empty() {
            vec![
                ExactRational::from_integer(-1),
                ExactRational::from_integer(-4),
                ExactRational::from_integer(-10),
            ]
        } else {
            self.a_values.clone()
        };
        values.iter().map(|a| a.to_float(cfg.precision_bits).0).collect()
    }
}

pub fn run_suite(suite: Suite, params: &VerifyParams, cfg: &EvalConfig) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    match suite {
        Suite::Main => {
            let x = params.x_max(10_000, cfg);
            for n in 0..=params.n_max(20) {
                reports.push(verify_main(n, &x, params.grid(10_000), cfg)?);
            }
            let delta = ExactRational::from_ratio(STRICT_DELTA.0, STRICT_DELTA.1)
                .to_float(cfg.precision_bits)
                .0;
            let upper = cfg.float(STRICT_X);
            for n in 1..=params.n_max(20).min(STRICT_MAX_ORDER) {
                reports.push(verify_strictness(n, &delta, &upper, cfg)?.to_report(cfg));
            }
        }
        Suite::General => {
            let x = params.x_max(50, cfg);
            for a in params.a_values(cfg) {
                for n in 0..=params.n_max(10) {
                    for m in 0..=n {
                        reports.push(verify_general(n, m, &a, &x, params.grid(400), cfg)?);
                    }
                }
            }
        }
        Suite::Cosh => {
            let x = params.x_max(50, cfg);
            for a in params.a_values(cfg) {
                for n in 0..=params.n_max(10) {
                    reports.push(verify_cosh(n, &a, &x, params.grid(1000), cfg)?);
                }
            }
        }
        Suite::Monotone => {
            for a in params.a_values(cfg) {
                for n in 0..=params.n_max(10) {
                    reports.push(verify_monotone_negative(n, &a, params.grid(500), cfg)?);
                }
            }
        }
        Suite::Coeff => {
            reports.push(verify_coeff_inequality(params.n_max(30), params.k_max.unwrap_or(60))?);
        }
        Suite::Gronwall0 => {
            let x = params.x_max(50, cfg);
            for n in 0..=params.n_max(10) {
                reports.push(verify_gronwall0(n, &x, params.grid(1001), cfg)?);
            }
        }
        Suite::Identities => {
            let seed = params.seed.unwrap_or(DEFAULT_SEED);
            reports.push(pythagorean_report(seed, IDENTITY_POINTS, IDENTITY_RADIUS, cfg)?);
            reports.push(ode_report(seed, IDENTITY_POINTS, IDENTITY_RADIUS, cfg)?);
            reports.push(recurrence_report(&recurrence_points(cfg), params.n_max(20), cfg)?);
            reports.push(envelope_report(&decay_points(cfg), cfg)?);
            for n in 2..=5 {
                reports.push(decay_report(n, &decay_points(cfg), cfg)?);
            }
            reports.push(sinc_quadrature_report(8, &QuadratureSpec::default(), cfg)?);
            reports.push(sinc_identity_report(6, &QuadratureSpec::default(), cfg)?);
        }
        Suite::All => {
            for s in [
                Suite::Main,
                Suite::General,
                Suite::Cosh,
                Suite::Monotone,
                Suite::Coeff,
                Suite::Gronwall0,
                Suite::Identities,
            ] {
                reports.extend(run_suite(s, params, cfg)?);
            }
        }
    }
    Ok(reports)
}

fn modulus_upper(z: &Complex) -> Float {
    Float::with_val_round(64, z.abs_ref(), Round::Up).0
}

fn disk_report(
    id: InequalityId,
    seed: u64,
    count: usize,
    radius: f64,
    cfg: &EvalConfig,
    residual: impl Fn(&Complex) -> Result<ApproxValue<Complex>>,
) -> Result<BoundReport> {
    let points = disk_sample(seed, count, radius, cfg.precision_bits)
        .iter()
        .map(|z| Ok(PointSlack::residual(&modulus_upper(z), &residual(z)?)))
        .collect::<Result<Vec<_>>>()?;
    let params = Params::new()
        .with("seed", seed)
        .with("points", count)
        .with("radius", radius)
        .with("precision_bits", cfg.precision_bits);
    let domain = Domain {
        lo: Float::new(64),
        hi: Float::with_val(64, radius),
        grid: "|z| of seeded disk points".into(),
    };
    Ok(BoundReport::from_points(id, params, domain, &points))
}

/// `(Cos z)^2 + 4z (Cos' z)^2 - 1` at seeded points of the disk `|z| <= radius`.
pub fn pythagorean_report(seed: u64, count: usize, radius: f64, cfg: &EvalConfig) -> Result<BoundReport> {
    disk_report(InequalityId::Pythagorean, seed, count, radius, cfg, |z| {
        pythagorean_residual(z, cfg)
    })
}

/// `Cos z + 2 Cos' z + 4z Cos'' z` at seeded points of the disk `|z| <= radius`.
pub fn ode_report(seed: u64, count: usize, radius: f64, cfg: &EvalConfig) -> Result<BoundReport> {
    disk_report(InequalityId::Ode, seed, count, radius, cfg, |z| ode_residual(z, cfg))
}

pub fn recurrence_points(cfg: &EvalConfig) -> Vec<Float> {
    [(-10, 1), (-1, 1), (-1, 100), (1, 100), (1, 1), (10, 1), (100, 1)]
        .iter()
        .map(|&(p, q)| ExactRational::from_ratio(p, q).to_float(cfg.precision_bits).0)
        .collect()
}

/// Ladder orders `0..=top` minus independent series values at each point.
pub fn recurrence_report(xs: &[Float], top: u32, cfg: &EvalConfig) -> Result<BoundReport> {
    let mut points = Vec::new();
    for x in xs {
        let ladder = build_ladder_unchecked(x, top, cfg)?;
        for (k, value) in ladder.orders.iter().enumerate() {
            let series = eval_series(k as u32, &ladder.point, cfg)?;
            points.push(PointSlack::residual(x, &value.sub(&series)));
        }
    }
    let params = Params::new()
        .with("top", top)
        .with("points", xs.iter().map(decimal).collect::<Vec<_>>().join(" "))
        .with("precision_bits", cfg.precision_bits);
    Ok(BoundReport::from_points(
        InequalityId::Recurrence,
        params,
        span(xs),
        &points,
    ))
}

fn span(xs: &[Float]) -> Domain {
    let lo = xs.iter().min_by(|a, b| a.partial_cmp(b).expect("finite")).cloned();
    let hi = xs.iter().max_by(|a, b| a.partial_cmp(b).expect("finite")).cloned();
    Domain {
        lo: lo.unwrap_or_else(|| Float::new(64)),
        hi: hi.unwrap_or_else(|| Float::new(64)),
        grid: format!("{} listed points", xs.len()),
    }
}

pub fn decay_points(cfg: &EvalConfig) -> Vec<Float> {
    [1e2, 1e4, 1e6].iter().map(|x| cfg.float(*x)).collect()
}

fn ladder_value(n: u32, x: &Float, cfg: &EvalConfig) -> Result<ApproxValue> {
    Ok(build_ladder_unchecked(x, n, cfg)?.orders[n as usize].clone())
}

/// `|Cos'(x)| <= 1/(2 sqrt x)`, with the right-hand side rounded upward.
pub fn envelope_report(xs: &[Float], cfg: &EvalConfig) -> Result<BoundReport> {
    let prec = cfg.precision_bits;
    let points = xs
        .iter()
        .map(|x| {
            let root = Float::with_val_round(prec, x.sqrt_ref(), Round::Down).0;
            let twice = Float::with_val_round(prec, &root * 2u32, Round::Down).0;
            let envelope = Float::with_val_round(prec, twice.recip_ref(), Round::Up).0;
            let sample = Sample {
                x: x.clone(),
                value: ladder_value(1, x, cfg)?,
                exact: None,
            };
            Ok(PointSlack::new(
                &sample,
                &BoundValue::approx(ApproxValue::exact(envelope)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = Params::new().with("n", 1).with("precision_bits", prec);
    Ok(BoundReport::from_points(InequalityId::Decay, params, span(xs), &points))
}

/// `|Cos^(n)|` certifiably decreasing across ascending sample points.
pub fn decay_report(n: u32, xs: &[Float], cfg: &EvalConfig) -> Result<BoundReport> {
    let values = xs
        .iter()
        .map(|x| Ok(ladder_value(n, x, cfg)?.abs()))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<_> = xs
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| {
            let next = Sample {
                x: x[0].clone(),
                value: v[1].clone(),
                exact: None,
            };
            PointSlack::new(&next, &BoundValue::approx(v[0].clone()))
        })
        .collect();
    let params = Params::new().with("n", n).with("precision_bits", cfg.precision_bits);
    let mut report = BoundReport::from_points(InequalityId::Decay, params, span(xs), &points);
    report.passed = strictly_decreasing(&values);
    Ok(report)
}

/// Series minus quadrature for `sinc^(n)` on 21 equally spaced points of `[-10, 10]`.
pub fn sinc_quadrature_report(n_max: u32, q: &QuadratureSpec, cfg: &EvalConfig) -> Result<BoundReport> {
    let mut points = Vec::new();
    for n in 0..=n_max {
        for i in -10i32..=10 {
            let x = cfg.float(i);
            let s = sinc_derivative_series(n, &x, cfg)?;
            let q = sinc_derivative_quadrature(n, &x, q, cfg)?;
            points.push(PointSlack::residual(&x, &s.sub(&q)));
        }
    }
    let params = Params::new()
        .with("n_max", n_max)
        .with("nodes", q.node_count)
        .with("precision_bits", cfg.precision_bits);
    let domain = Domain {
        lo: cfg.float(-10),
        hi: cfg.float(10),
        grid: "uniform 21".into(),
    };
    Ok(BoundReport::from_points(
        InequalityId::SincQuadrature,
        params,
        domain,
        &points,
    ))
}

pub fn sinc_identity_points(cfg: &EvalConfig) -> Vec<Float> {
    let pi = Float::with_val(cfg.precision_bits, Constant::Pi);
    let base = [cfg.float(0.5), cfg.float(1), pi, cfg.float(10)];
    base.iter()
        .flat_map(|x| [Float::with_val(x.prec(), -x), x.clone()])
        .collect()
}

/// Residual of the integral identity for `sinc^(n)`, `n <= n_max`.
pub fn sinc_identity_report(n_max: u32, q: &QuadratureSpec, cfg: &EvalConfig) -> Result<BoundReport> {
    let xs = sinc_identity_points(cfg);
    let mut points = Vec::new();
    for n in 0..=n_max {
        for x in &xs {
            points.push(PointSlack::residual(x, &gronwall_identity_residual(n, x, q, cfg)?));
        }
    }
    let params = Params::new()
        .with("n_max", n_max)
        .with("nodes", q.node_count)
        .with("precision_bits", cfg.precision_bits);
    Ok(BoundReport::from_points(
        InequalityId::SincIdentity,
        params,
        span(&xs),
        &points,
    ))
}
