//! Certification of the derivative bounds on finite grids.
//!
//! Every check samples `|Cos^(n)|` with certified error bounds, compares it
//! with the right-hand side, and summarizes the result as a
//! [`BoundReport`]. Where both sides are rational (at `x = 0`, or for the
//! coefficient inequality) the comparison is exact.

pub mod grid;
mod supremum;

pub use supremum::{verify_strictness, verify_strictness_with, StrictnessOptions, SupremumResult};

use rug::Float;

use crate::approx::ApproxValue;
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::rational::ExactRational;
use crate::recurrence::build_ladder_unchecked;
use crate::report::{BoundReport, BoundValue, Domain, InequalityId, Params, PointSlack, Sample};
use crate::series::{closed_form, coeff_c, derivative_at_zero, eval_abs_series_negative, DerivativeSeries};

use grid::{geometric_grid, golden_section_max, local_maxima, uniform_grid};

/// The positive grid spans `[X / POSITIVE_GRID_RATIO, X]`.
pub const POSITIVE_GRID_RATIO: u32 = 100_000_000;

/// Bracket width at which refinement of a local maximum stops.
pub const REFINE_WIDTH: f64 = 1e-12;

/// `n! / (2n)!`, the value of `|Cos^(n)(0)|` and the uniform bound on `[0, inf)`.
pub fn gronwall_bound(n: u32) -> ExactRational {
    coeff_c(n, 0)
}

/// `n! (2m)! / ((2n)! m!)`, the factor relating the order-`m` bound to the
/// order-`n` bound.
pub fn bound_prefactor(n: u32, m: u32) -> ExactRational {
    &coeff_c(n, 0) / &coeff_c(m, 0)
}

/// `Cos^(n)` at real points with certified errors. Points inside the switch
/// radius share one prepared series; others go through the ladder.
#[derive(Clone, Debug)]
pub struct DerivativeEvaluator {
    order: u32,
    cfg: EvalConfig,
    near_zero: DerivativeSeries,
}

impl DerivativeEvaluator {
    pub fn new(order: u32, cfg: &EvalConfig) -> Result<Self> {
        cfg.validate()?;
        let radius = cfg.float(cfg.switch_radius);
        Ok(DerivativeEvaluator {
            order,
            cfg: *cfg,
            near_zero: DerivativeSeries::new(order, &radius, cfg)?,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn sample(&self, x: &Float) -> Result<Sample> {
        let x = Float::with_val(self.cfg.precision_bits.max(x.prec()), x);
        if x.is_zero() {
            let exact = derivative_at_zero(self.order);
            return Ok(Sample {
                value: ApproxValue::from_rational(&exact, self.cfg.precision_bits),
                exact: Some(exact),
                x,
            });
        }
        let value = if Float::with_val(x.prec(), x.abs_ref()) < self.cfg.switch_radius {
            self.near_zero.eval(&x)?
        } else {
            let ladder = build_ladder_unchecked(&x, self.order, &self.cfg)?;
            ladder.orders[self.order as usize].clone()
        };
        Ok(Sample { x, value, exact: None })
    }
}

/// Samples at `grid`, plus golden-section refinement of every interior local
/// maximum of `|Cos^(n)|`.
pub fn sample_with_refinement(eval: &DerivativeEvaluator, grid: &[Float]) -> Result<Vec<Sample>> {
    let mut samples = grid.iter().map(|x| eval.sample(x)).collect::<Result<Vec<_>>>()?;
    let magnitudes: Vec<Float> = samples.iter().map(|s| s.magnitude().value).collect();
    let mut refined = Vec::new();
    for i in local_maxima(&magnitudes) {
        let probes = golden_section_max(
            |x| {
                let s = eval.sample(x)?;
                Ok((s.magnitude().value, s))
            },
            &grid[i - 1],
            &grid[i + 1],
            REFINE_WIDTH,
        )?;
        refined.extend(probes.into_iter().map(|(_, s)| s));
    }
    samples.extend(refined);
    Ok(samples)
}

fn check_positive(name: &str, x: &Float) -> Result<()> {
    if *x > 0 && x.is_finite() {
        Ok(())
    } else {
        Err(CosError::Domain(format!("{name} must be positive and finite")))
    }
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 4 {
        return Err(CosError::Domain("need at least 4 grid points".into()));
    }
    Ok(())
}

fn positive_grid(x_max: &Float, count: usize) -> Result<Vec<Float>> {
    let lo = Float::with_val(x_max.prec(), x_max / POSITIVE_GRID_RATIO);
    geometric_grid(&lo, x_max, count)
}

/// Per-point slacks of `|Cos^(n)(x)| <= n!/(2n)!` on a geometric grid over
/// `[X / 10^8, X]`, with local maxima refined.
pub fn scan_main(n: u32, x_max: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<Vec<PointSlack>> {
    check_positive("X", x_max)?;
    check_grid(grid_points)?;
    let eval = DerivativeEvaluator::new(n, cfg)?;
    let bound = BoundValue::exact(gronwall_bound(n), cfg.precision_bits);
    let grid = positive_grid(&cfg.float(x_max), grid_points)?;
    let samples = sample_with_refinement(&eval, &grid)?;
    Ok(samples.iter().map(|s| PointSlack::new(s, &bound)).collect())
}

/// Certify `|Cos^(n)(x)| <= n!/(2n)!` on `(0, X]`.
pub fn verify_main(n: u32, x_max: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<BoundReport> {
    let points = scan_main(n, x_max, grid_points, cfg)?;
    let domain = Domain {
        lo: Float::with_val(x_max.prec(), x_max / POSITIVE_GRID_RATIO),
        hi: x_max.clone(),
        grid: format!("geometric {grid_points} + refined maxima"),
    };
    let params = Params::new()
        .with("n", n)
        .with("X", crate::report::decimal(x_max))
        .with("grid_points", grid_points)
        .with("precision_bits", cfg.precision_bits);
    Ok(BoundReport::from_points(InequalityId::Main, params, domain, &points))
}

/// Right-hand side `n!(2m)!/((2n)! m!) * |Cos^(m)(a)|` for `0 <= m <= n`, `a <= 0`.
pub fn general_bound(n: u32, m: u32, a: &Float, cfg: &EvalConfig) -> Result<BoundValue> {
    if m > n {
        return Err(CosError::Domain(format!("need m <= n, got m = {m}, n = {n}")));
    }
    if *a > 0 {
        return Err(CosError::Domain("need a <= 0".into()));
    }
    let prefactor = bound_prefactor(n, m);
    if a.is_zero() {
        return Ok(BoundValue::exact(&prefactor * &coeff_c(m, 0), cfg.precision_bits));
    }
    let wide = cfg.with_extra_bits(64).with_tolerance_bits(cfg.precision_bits + 16);
    let at_a = eval_abs_series_negative(m, a, &wide)?;
    let factor = ApproxValue::from_rational(&prefactor, wide.precision_bits);
    Ok(BoundValue::approx(at_a.mul_coeff(&factor).round_to(cfg.precision_bits)))
}

/// `cosh(sqrt |a|) * n!/(2n)!` for `a <= 0`.
pub fn cosh_bound(n: u32, a: &Float, cfg: &EvalConfig) -> Result<BoundValue> {
    if *a > 0 {
        return Err(CosError::Domain("need a <= 0".into()));
    }
    if a.is_zero() {
        return Ok(BoundValue::exact(gronwall_bound(n), cfg.precision_bits));
    }
    let wide = cfg.with_extra_bits(64);
    let ch = closed_form(0, a, &wide)?;
    let factor = ApproxValue::from_rational(&gronwall_bound(n), wide.precision_bits);
    Ok(BoundValue::approx(ch.mul_coeff(&factor).round_to(cfg.precision_bits)))
}

/// Grid over `[a, X]`: uniform on `[a, 0]` when `a < 0`, geometric on the
/// positive side, with local maxima refined.
fn samples_from(n: u32, a: &Float, x_max: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<Vec<Sample>> {
    check_positive("X", x_max)?;
    check_grid(grid_points)?;
    let eval = DerivativeEvaluator::new(n, cfg)?;
    let x_max = cfg.float(x_max);
    let mut samples = Vec::new();
    if *a < 0 {
        let negative = uniform_grid(&cfg.float(a), &Float::new(cfg.precision_bits), grid_points / 2)?;
        for x in &negative {
            samples.push(eval.sample(x)?);
        }
    } else {
        samples.push(eval.sample(&Float::new(cfg.precision_bits))?);
    }
    let positive = positive_grid(&x_max, grid_points - grid_points / 2)?;
    samples.extend(sample_with_refinement(&eval, &positive)?);
    Ok(samples)
}

fn domain_from(a: &Float, x_max: &Float, grid_points: usize) -> Domain {
    Domain {
        lo: a.clone(),
        hi: x_max.clone(),
        grid: format!("uniform/geometric {grid_points} + refined maxima"),
    }
}

/// Per-point slacks of `|Cos^(n)(x)| <= n!(2m)!/((2n)! m!) |Cos^(m)(a)|` on `[a, X]`.
pub fn scan_general(
    n: u32,
    m: u32,
    a: &Float,
    x_max: &Float,
    grid_points: usize,
    cfg: &EvalConfig,
) -> Result<Vec<PointSlack>> {
    let bound = general_bound(n, m, a, cfg)?;
    let samples = samples_from(n, a, x_max, grid_points, cfg)?;
    Ok(samples.iter().map(|s| PointSlack::new(s, &bound)).collect())
}

/// Certify `|Cos^(n)(x)| <= n!(2m)!/((2n)! m!) |Cos^(m)(a)|` for `x >= a`, `a <= 0`.
pub fn verify_general(
    n: u32,
    m: u32,
    a: &Float,
    x_max: &Float,
    grid_points: usize,
    cfg: &EvalConfig,
) -> Result<BoundReport> {
    let points = scan_general(n, m, a, x_max, grid_points, cfg)?;
    let params = Params::new()
        .with("n", n)
        .with("m", m)
        .with("a", crate::report::decimal(a))
        .with("X", crate::report::decimal(x_max))
        .with("grid_points", grid_points)
        .with("precision_bits", cfg.precision_bits);
    Ok(BoundReport::from_points(
        InequalityId::General,
        params,
        domain_from(a, x_max, grid_points),
        &points,
    ))
}

/// Certify `|Cos^(n)(x)| <= n!/(2n)! cosh(sqrt |a|)` for `x >= a`, `a <= 0`.
pub fn verify_cosh(n: u32, a: &Float, x_max: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<BoundReport> {
    let bound = cosh_bound(n, a, cfg)?;
    let samples = samples_from(n, a, x_max, grid_points, cfg)?;
    let points: Vec<_> = samples.iter().map(|s| PointSlack::new(s, &bound)).collect();
    let params = Params::new()
        .with("n", n)
        .with("a", crate::report::decimal(a))
        .with("X", crate::report::decimal(x_max))
        .with("grid_points", grid_points)
        .with("precision_bits", cfg.precision_bits);
    Ok(BoundReport::from_points(
        InequalityId::Cosh,
        params,
        domain_from(a, x_max, grid_points),
        &points,
    ))
}

/// Certify that `|Cos^(n)|` does not increase on `[a, 0]`: at each grid pair
/// `x_i < x_{i+1}` the slack is `|Cos^(n)(x_i)| - |Cos^(n)(x_{i+1})|`.
pub fn verify_monotone_negative(n: u32, a: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<BoundReport> {
    if *a >= 0 {
        return Err(CosError::Domain("need a < 0".into()));
    }
    check_grid(grid_points)?;
    let a = cfg.float(a);
    let series = DerivativeSeries::new(n, &a, cfg)?;
    let xs = uniform_grid(&a, &Float::new(cfg.precision_bits), grid_points)?;
    let values = xs
        .iter()
        .map(|x| series.eval_abs_negative(x))
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
    let params = Params::new()
        .with("n", n)
        .with("a", crate::report::decimal(&a))
        .with("grid_points", grid_points)
        .with("precision_bits", cfg.precision_bits);
    let domain = Domain {
        lo: a,
        hi: Float::new(cfg.precision_bits),
        grid: format!("uniform {grid_points}"),
    };
    Ok(BoundReport::from_points(
        InequalityId::Monotone,
        params,
        domain,
        &points,
    ))
}

/// `n!(2m)!/((2n)! m!) c(m,k) - c(n,k)`, exact.
pub fn coeff_inequality_slack(n: u32, m: u32, k: u32) -> ExactRational {
    &(&bound_prefactor(n, m) * &coeff_c(m, k)) - &coeff_c(n, k)
}

/// Certify `c(n,k) <= n!(2m)!/((2n)! m!) c(m,k)` for all
/// `0 <= m <= n <= n_max`, `0 <= k <= k_max` in exact arithmetic.
/// The worst point reported is the index `k`.
pub fn verify_coeff_inequality(n_max: u32, k_max: u32) -> Result<BoundReport> {
    let prec = 128;
    let table: Vec<Vec<ExactRational>> = (0..=n_max)
        .map(|n| crate::series::CoeffSequence::new(n).take(k_max as usize + 1).collect())
        .collect();
    let mut points = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n {
            let prefactor = bound_prefactor(n, m);
            for k in 0..=k_max {
                let sample = Sample {
                    x: Float::with_val(prec, k),
                    value: ApproxValue::from_rational(&table[n as usize][k as usize], prec),
                    exact: Some(table[n as usize][k as usize].clone()),
                };
                let bound = BoundValue::exact(&prefactor * &table[m as usize][k as usize], prec);
                points.push(PointSlack::new(&sample, &bound));
            }
        }
    }
    let params = Params::new().with("n_max", n_max).with("k_max", k_max);
    let domain = Domain {
        lo: Float::new(prec),
        hi: Float::with_val(prec, k_max),
        grid: format!("all 0<=m<=n<={n_max}, k"),
    };
    Ok(BoundReport::from_points(InequalityId::Coeff, params, domain, &points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn bound_values() {
        assert_eq!(gronwall_bound(0), ExactRational::one());
        assert_eq!(gronwall_bound(1), ExactRational::from_ratio(1, 2));
        assert_eq!(gronwall_bound(2), ExactRational::from_ratio(1, 12));
        assert_eq!(bound_prefactor(1, 0), ExactRational::from_ratio(1, 2));
        assert_eq!(bound_prefactor(3, 3), ExactRational::one());
    }

    #[test]
    fn main_bound_small_orders() {
        for n in 0..4 {
            let r = verify_main(n, &Float::with_val(256, 200), 200, &cfg()).unwrap();
            assert!(r.passed, "n = {n}");
            assert!(r.min_slack >= 0, "n = {n}");
            assert!(r.domain.contains(&r.worst_point));
        }
    }

    #[test]
    fn main_bound_for_cosine_touches_at_multiples_of_pi() {
        let r = verify_main(0, &Float::with_val(256, 100), 300, &cfg()).unwrap();
        assert!(r.passed);
        assert!(r.min_slack < 1e-20, "{}", r.min_slack);
    }

    #[test]
    fn general_bound_at_zero_is_exact() {
        let b = general_bound(3, 1, &Float::new(256), &cfg()).unwrap();
        assert_eq!(b.exact, Some(gronwall_bound(3)));
    }

    #[test]
    fn general_and_cosh_pass() {
        let a = Float::with_val(256, -1);
        let x = Float::with_val(256, 50);
        let r = verify_general(3, 1, &a, &x, 200, &cfg()).unwrap();
        assert!(r.passed);
        let r = verify_cosh(3, &a, &x, 200, &cfg()).unwrap();
        assert!(r.passed);
        assert!(r.min_slack > 0);
    }

    #[test]
    fn general_rejects_bad_parameters() {
        let x = Float::with_val(256, 10);
        assert!(verify_general(1, 2, &Float::new(256), &x, 100, &cfg()).is_err());
        assert!(verify_general(2, 1, &Float::with_val(256, 1), &x, 100, &cfg()).is_err());
    }

    #[test]
    fn monotone_on_negative_axis() {
        let r = verify_monotone_negative(2, &Float::with_val(256, -10), 101, &cfg()).unwrap();
        assert!(r.passed);
        assert!(r.min_slack > 0);
    }

    #[test]
    fn coefficient_inequality_holds_exactly() {
        let r = verify_coeff_inequality(6, 10).unwrap();
        assert!(r.passed);
        assert!(r.min_slack.is_zero());
        assert!(coeff_inequality_slack(1, 0, 0).is_zero());
        assert!(!coeff_inequality_slack(2, 1, 3).is_negative());
        assert!(!coeff_inequality_slack(2, 1, 3).is_zero());
    }

    #[test]
    fn evaluator_is_exact_at_zero() {
        let e = DerivativeEvaluator::new(4, &cfg()).unwrap();
        let s = e.sample(&Float::new(256)).unwrap();
        assert_eq!(s.exact, Some(derivative_at_zero(4)));
    }
}
