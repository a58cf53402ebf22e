//! Derivatives of `sinc x = sin(x)/x` by two independent routes, and the
//! classical bound `|sinc^(n)(x)| <= 1/(n+1)`.
//!
//! * Series: `sinc^(n)(x) = sum_{2k >= n} (-1)^k x^(2k-n) / ((2k+1) (2k-n)!)`.
//! * Integral: `sinc^(n)(x) = int_0^1 t^n cos(t x + n pi/2) dt`, evaluated by
//!   Gauss-Legendre quadrature with the classical remainder bound.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::approx::{err_add, rounding_err, up, ApproxValue};
use crate::bounds::grid::uniform_grid;
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::rational::ExactRational;
use crate::report::{decimal, BoundReport, BoundValue, Domain, InequalityId, Params, PointSlack, Sample};

/// Bits by which quadrature nodes and weights are computed beyond the
/// working precision; their error is taken as `2^-(prec + NODE_MARGIN/2)`.
const NODE_MARGIN: u32 = 64;

/// Fixed Gauss-Legendre rule on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub node_count: usize,
    /// Polynomial degree integrated exactly, at most `2 node_count - 1`.
    pub scheme_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            node_count: 64,
            scheme_order: 127,
        }
    }
}

impl QuadratureSpec {
    pub fn new(node_count: usize, scheme_order: usize) -> Result<Self> {
        let q = QuadratureSpec {
            node_count,
            scheme_order,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn gauss(node_count: usize) -> Result<Self> {
        QuadratureSpec::new(node_count, 2 * node_count.max(1) - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 || self.scheme_order == 0 {
            return Err(CosError::InvalidConfig("quadrature needs at least one node".into()));
        }
        if self.scheme_order > 2 * self.node_count - 1 {
            return Err(CosError::InvalidConfig(format!(
                "{} Gauss nodes integrate degree {} at most, not {}",
                self.node_count,
                2 * self.node_count - 1,
                self.scheme_order
            )));
        }
        Ok(())
    }
}

/// `sinc^(n)(0)`: `(-1)^(n/2) / (n+1)` for even `n`, zero for odd `n`.
pub fn sinc_derivative_at_zero(n: u32) -> ExactRational {
    if n % 2 == 1 {
        return ExactRational::zero();
    }
    let sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
    ExactRational::from_ratio(sign, i64::from(n) + 1)
}

/// The classical bound `1 / (n+1)`.
pub fn sinc_bound(n: u32) -> ExactRational {
    ExactRational::from_ratio(1, i64::from(n) + 1)
}

fn exact_input(x: &Float, prec: u32) -> ApproxValue {
    let (v, ord) = Float::with_val_round(prec, x, Round::Nearest);
    let e = rounding_err(&v, ord);
    ApproxValue::new(v, e)
}

/// `sinc^(n)(x)` from the termwise differentiated Taylor series.
///
/// The term ratio `x^2 (2k+1) / ((2k+3)(2k-n+1)(2k-n+2))` decreases in `k`
/// and the signs alternate, so once it is below one the tail is bounded by
/// the first omitted term.
pub fn sinc_derivative_series(n: u32, x: &Float, cfg: &EvalConfig) -> Result<ApproxValue> {
    cfg.validate()?;
    if x.is_zero() {
        return Ok(ApproxValue::from_rational(
            &sinc_derivative_at_zero(n),
            cfg.precision_bits,
        ));
    }
    let k0 = n.div_ceil(2);
    let ratio = |k: u32, x2: f64| {
        let k = f64::from(k);
        let m = 2.0 * k - f64::from(n);
        x2 * (2.0 * k + 1.0) / ((2.0 * k + 3.0) * (m + 1.0) * (m + 2.0))
    };

    let ax = x.to_f64().abs();
    let x2 = ax * ax;
    let target = (cfg.tolerance / 2.0).log2() - 8.0;
    let mut log_term = f64::from(2 * k0 - n) * ax.log2()
        - f64::from(2 * k0 + 1).log2()
        - (1..=(2 * k0 - n)).map(|i| f64::from(i).log2()).sum::<f64>();
    let mut log_max = log_term;
    let mut planned = 0usize;
    let mut k = k0;
    while planned < cfg.max_terms {
        let r = ratio(k, x2);
        log_term += r.log2();
        planned += 1;
        k += 1;
        if r < 1.0 && log_term < target {
            break;
        }
        log_max = log_max.max(log_term);
    }
    let guard = 32 + log_max.max(0.0).ceil() as u32 + ((planned + 2) as f64).log2().ceil() as u32;
    let wp = cfg.precision_bits + guard;

    let xa = exact_input(x, wp);
    let x2a = xa.square();
    let x2_upper = up(x2a.upper());
    let mut power = if n % 2 == 1 {
        xa.clone()
    } else {
        ApproxValue::exact(Float::with_val(wp, 1))
    };
    let sign = if k0.is_multiple_of(2) { 1 } else { -1 };
    let mut coeff = ExactRational::from_ratio(sign, i64::from(2 * k0 + 1)) / ExactRational::factorial(2 * k0 - n);
    let mut sum = ApproxValue::exact(Float::new(wp));
    let mut k = k0;
    let mut used = 0usize;
    let tail = loop {
        sum = sum.add(&power.mul_coeff(&ApproxValue::from_rational(&coeff, wp)));
        used += 1;
        let m = u64::from(2 * k - n);
        coeff = -coeff.scale(2 * u64::from(k) + 1, (2 * u64::from(k) + 3) * (m + 1) * (m + 2));
        power = power.mul(&x2a);
        let coeff_upper = Float::with_val_round(64, coeff.abs().as_rational(), Round::Up).0;
        let next = up(power.magnitude_upper() * &coeff_upper);
        let r = {
            let num = up(&x2_upper * (2 * u64::from(k) + 1));
            up(num / ((2 * u64::from(k) + 3) * (m + 1) * (m + 2)))
        };
        if r < 1 && next <= cfg.tolerance / 2.0 {
            break next;
        }
        if used >= cfg.max_terms {
            return Err(CosError::NonConvergence {
                max_terms: cfg.max_terms,
                tail_bound: next.to_string_radix(10, Some(6)),
            });
        }
        k += 1;
    };
    let total = ApproxValue::new(sum.value, err_add(&sum.abs_error, &tail)).round_to(cfg.precision_bits);
    if total.abs_error > cfg.tolerance {
        return Err(CosError::NonConvergence {
            max_terms: cfg.max_terms,
            tail_bound: total.abs_error.to_string_radix(10, Some(6)),
        });
    }
    Ok(total)
}

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`.
#[derive(Debug)]
struct GaussRule {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GaussRule>>>;

fn gauss_rule(count: usize, prec: u32) -> Arc<GaussRule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache").get(&(count, prec)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_rule(count, prec));
    cache
        .lock()
        .expect("rule cache")
        .insert((count, prec), Arc::clone(&rule));
    rule
}

/// `(P_N(x), P_N'(x))` by the three-term recurrence.
fn legendre(count: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 1..count {
        let k = k as u32;
        let a = Float::with_val(prec, x * &p1) * (2 * k + 1);
        let b = Float::with_val(prec, &p0 * k);
        let p2 = Float::with_val(prec, a - b) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    if count == 0 {
        return (Float::with_val(prec, 1), Float::new(prec));
    }
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    let dp = Float::with_val(prec, num * count as u32) / den;
    (p1, dp)
}

fn compute_gauss_rule(count: usize, prec: u32) -> GaussRule {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mut nodes = vec![Float::new(prec); count];
    let mut weights = vec![Float::new(prec); count];
    let threshold = Float::with_val(prec, Float::u_exp(1, -(prec as i32) + 8));
    for i in 0..count.div_ceil(2) {
        let guess = Float::with_val(prec, &pi * (4 * i as u32 + 3)) / (4 * count as u32 + 2);
        let mut x = guess.cos();
        let mut dp = Float::new(prec);
        for _ in 0..200 {
            let (p, d) = legendre(count, &x);
            let step = Float::with_val(prec, &p / &d);
            x -= &step;
            dp = d;
            if step.abs() < threshold {
                let (_, d) = legendre(count, &x);
                dp = d;
                break;
            }
        }
        let one_minus = Float::with_val(prec, 1u32 - Float::with_val(prec, x.square_ref()));
        let w = Float::with_val(prec, 1u32 / (one_minus * Float::with_val(prec, dp.square_ref())));
        let hi = Float::with_val(prec, 1u32 + &x) / 2u32;
        let lo = Float::with_val(prec, 1u32 - &x) / 2u32;
        nodes[count - 1 - i] = hi;
        weights[count - 1 - i] = w.clone();
        nodes[i] = lo;
        weights[i] = w;
    }
    GaussRule { nodes, weights }
}

/// `(N!)^4 / ((2N+1) ((2N)!)^3) * (n + |x|)^(2N)`, the Gauss remainder with
/// `|d^(2N)/dt^(2N) t^n g(t x)| <= (n + |x|)^(2N)` for `|g^(j)| <= 1`.
fn gauss_remainder(count: usize, n: u32, x: &Float) -> Float {
    let c = count as u32;
    let constant = ExactRational::factorial(c)
        * ExactRational::factorial(c)
        * ExactRational::factorial(c)
        * ExactRational::factorial(c)
        / (ExactRational::from_integer(2 * i64::from(c) + 1)
            * ExactRational::factorial(2 * c)
            * ExactRational::factorial(2 * c)
            * ExactRational::factorial(2 * c));
    let constant = Float::with_val_round(64, constant.as_rational(), Round::Up).0;
    let envelope = up(up(x.abs_ref()) + n);
    let power = Float::with_val_round(64, (&envelope).pow(2 * c), Round::Up).0;
    up(&constant * &power)
}

/// Which trigonometric function the integrand applies to `t x + s pi/2`.
#[derive(Clone, Copy, Debug)]
enum Phase {
    Cos(u32),
    Sin(u32),
}

fn shifted_trig(theta: &Float, phase: Phase) -> Float {
    let (c, s) = (theta.clone().cos(), theta.clone().sin());
    match phase {
        Phase::Cos(k) => match k % 4 {
            0 => c,
            1 => -s,
            2 => -c,
            _ => s,
        },
        Phase::Sin(k) => match k % 4 {
            0 => s,
            1 => c,
            2 => -s,
            _ => -c,
        },
    }
}

/// `int_0^1 t^n trig(t x + shift pi/2) dt` with a certified error bound.
fn integrate(n: u32, x: &Float, phase: Phase, q: &QuadratureSpec, cfg: &EvalConfig) -> Result<ApproxValue> {
    cfg.validate()?;
    q.validate()?;
    let prec = cfg.precision_bits;
    let wp = prec + NODE_MARGIN;
    let rule = gauss_rule(q.node_count, wp);
    let xw = exact_input(x, wp);
    let mut sum = Float::new(wp);
    for (t, w) in rule.nodes.iter().zip(&rule.weights) {
        let theta = Float::with_val(wp, t * &xw.value);
        let f = Float::with_val(wp, t.pow(n)) * shifted_trig(&theta, phase);
        sum += Float::with_val(wp, w * &f);
    }
    // Each integrand value is bounded by one and carries a few relative
    // roundings plus the argument error `|x| 2^-wp`; the weights sum to one.
    let scale = up(up(xw.value.abs_ref()) + (n + q.node_count as u32 + 8));
    let eval_err = up(&scale * Float::with_val(64, Float::u_exp(1, -(wp as i32))));
    let node_err = up(&scale * Float::with_val(64, Float::u_exp(1, -((prec + NODE_MARGIN / 2) as i32))));
    let input_err = up(Float::with_val(64, n + 1) * &xw.abs_error);
    let remainder = gauss_remainder(q.node_count, n, &xw.value);
    let err = err_add(&err_add(&eval_err, &node_err), &err_add(&input_err, &remainder));
    Ok(ApproxValue::new(sum, err).round_to(prec))
}

/// `sinc^(n)(x) = int_0^1 t^n cos(t x + n pi/2) dt` by quadrature.
pub fn sinc_derivative_quadrature(n: u32, x: &Float, q: &QuadratureSpec, cfg: &EvalConfig) -> Result<ApproxValue> {
    integrate(n, x, Phase::Cos(n), q, cfg)
}

/// Series value of `sinc^(n)(x)` minus
/// `x^-(n+1) int_0^x y^n sin(y + (n+1) pi/2) dy`, the latter mapped to
/// `[0, 1]` by `y = x t`. The true value is zero.
pub fn gronwall_identity_residual(n: u32, x: &Float, q: &QuadratureSpec, cfg: &EvalConfig) -> Result<ApproxValue> {
    if x.is_zero() {
        return Err(CosError::Domain("identity form is singular at x = 0".into()));
    }
    let series = sinc_derivative_series(n, x, cfg)?;
    let integral = integrate(n, x, Phase::Sin(n + 1), q, cfg)?;
    Ok(series.sub(&integral))
}

/// Certify `|sinc^(n)(x)| <= 1/(n+1)` on a uniform grid over `[-X, X]`
/// that always contains `x = 0`.
pub fn verify_gronwall0(n: u32, x_max: &Float, grid_points: usize, cfg: &EvalConfig) -> Result<BoundReport> {
    if !x_max.is_finite() || *x_max <= 0 {
        return Err(CosError::Domain("X must be positive and finite".into()));
    }
    if grid_points < 2 {
        return Err(CosError::Domain("grid needs at least two points".into()));
    }
    let prec = cfg.precision_bits;
    let hi = cfg.float(x_max);
    let lo = Float::with_val(prec, -&hi);
    let mut xs = uniform_grid(&lo, &hi, grid_points)?;
    if !xs.iter().any(|x| x.is_zero()) {
        xs.push(Float::new(prec));
    }
    let bound = BoundValue::exact(sinc_bound(n), prec);
    let points = xs
        .iter()
        .map(|x| {
            let exact = x.is_zero().then(|| sinc_derivative_at_zero(n));
            let value = sinc_derivative_series(n, x, cfg)?;
            Ok(PointSlack::new(
                &Sample {
                    x: x.clone(),
                    value,
                    exact,
                },
                &bound,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = Params::new()
        .with("n", n)
        .with("X", decimal(x_max))
        .with("grid_points", grid_points)
        .with("precision_bits", prec);
    let domain = Domain {
        lo,
        hi,
        grid: format!("uniform {grid_points} + origin"),
    };
    Ok(BoundReport::from_points(
        InequalityId::Gronwall,
        params,
        domain,
        &points,
    ))
}
