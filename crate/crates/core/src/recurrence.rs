//! Derivative ladders `Cos^(0)(x), ..., Cos^(N)(x)` from the three-term
//! recurrence `Cos^(n-1) z + (4n-2) Cos^(n) z + 4z Cos^(n+1) z = 0`, and
//! residual checks of the identities the function satisfies.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::approx::{up, ApproxValue, Scalar};
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::series::{closed_form, eval_series, eval_series_complex, DerivativeSeries};

/// Where a ladder entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Recurrence,
    Series,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Recurrence => "recurrence",
            Method::Series => "series",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DerivativeLadder {
    pub point: Float,
    pub orders: Vec<ApproxValue>,
    pub methods: Vec<Method>,
}

impl DerivativeLadder {
    pub fn top_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// `|orders[n-1] + (4n-2) orders[n] + 4x orders[n+1]|` together with its
    /// propagated error bound.
    pub fn recurrence_residual(&self, n: usize) -> ApproxValue {
        assert!(n >= 1 && n < self.top_order());
        let four_x = Float::with_val(self.point.prec() + 2, &self.point * 4u32);
        self.orders[n - 1]
            .add(&self.orders[n].mul_int(4 * n as i64 - 2))
            .add(&self.orders[n + 1].mul_exact(&four_x))
    }
}

/// One upward step: `Cos^(n+1)(z) = -(Cos^(n-1)(z) + (4n-2) Cos^(n)(z)) / (4z)`.
pub fn recurrence_step(n: u32, z: &Float, lower: &ApproxValue, mid: &ApproxValue) -> Result<ApproxValue> {
    if n == 0 {
        return Err(CosError::Domain("recurrence step needs n >= 1".into()));
    }
    if z.is_zero() {
        return Err(CosError::Domain(
            "recurrence step divides by 4z; use the series at z = 0".into(),
        ));
    }
    let four_z = Float::with_val(z.prec() + 2, z * 4u32);
    let sum = lower.add(&mid.mul_int(4 * i64::from(n) - 2));
    Ok(sum.div_exact(&four_z).neg())
}

/// Bits lost to the growth factor `(4n-2) / (4|x|)` of upward steps, plus slack.
fn amplification_bits(top: u32, x: &Float) -> u32 {
    let log_four_x = (4.0 * x.to_f64().abs()).log2();
    let lost: f64 = (1..top)
        .map(|n| ((4.0 * f64::from(n) - 2.0).log2() - log_four_x).max(0.0) + 1.0)
        .sum();
    16 + lost.ceil() as u32
}

/// Ladder without the final cross-check against the series. Grid scans use
/// this; [`build_ladder`] adds the check.
pub fn build_ladder_unchecked(x: &Float, top: u32, cfg: &EvalConfig) -> Result<DerivativeLadder> {
    cfg.validate()?;
    let x = Float::with_val(cfg.precision_bits.max(x.prec()), x);
    let mut orders = Vec::with_capacity(top as usize + 1);
    let mut methods = Vec::with_capacity(top as usize + 1);
    if Float::with_val(x.prec(), x.abs_ref()) < cfg.switch_radius {
        for n in 0..=top {
            orders.push(DerivativeSeries::new(n, &x, cfg)?.eval(&x)?);
            methods.push(Method::Series);
        }
    } else {
        let work = cfg.with_extra_bits(amplification_bits(top, &x));
        for n in 0..=top.min(1) {
            orders.push(closed_form(n, &x, &work)?);
            methods.push(Method::ClosedForm);
        }
        for n in 1..top {
            let next = recurrence_step(n, &x, &orders[n as usize - 1], &orders[n as usize])?;
            orders.push(next);
            methods.push(Method::Recurrence);
        }
        for v in orders.iter_mut() {
            *v = v.round_to(cfg.precision_bits);
        }
    }
    Ok(DerivativeLadder {
        point: x,
        orders,
        methods,
    })
}

/// `Cos^(n)(x)` for `n = 0..=top`. Orders 0 and 1 come from the closed forms
/// and higher orders from upward recurrence when `|x| >= switch_radius`;
/// otherwise every order comes from the series. The top order is then
/// compared against an independent series evaluation.
pub fn build_ladder(x: &Float, top: u32, cfg: &EvalConfig) -> Result<DerivativeLadder> {
    let ladder = build_ladder_unchecked(x, top, cfg)?;
    if ladder.methods[top as usize] != Method::Series {
        let reference = eval_series(top, &ladder.point, cfg)?;
        if !reference.agrees_with(&ladder.orders[top as usize]) {
            return Err(CosError::LadderMismatch {
                order: top as usize,
                point: ladder.point.to_string_radix(10, Some(20)),
            });
        }
    }
    Ok(ladder)
}

/// Argument types the series kernel can evaluate at.
pub trait SeriesPoint: Scalar {
    fn derivative(n: u32, z: &Self, cfg: &EvalConfig) -> Result<ApproxValue<Self>>;
    fn one(prec: u32) -> Self;
}

impl SeriesPoint for Float {
    fn derivative(n: u32, z: &Self, cfg: &EvalConfig) -> Result<ApproxValue<Self>> {
        eval_series(n, z, cfg)
    }

    fn one(prec: u32) -> Self {
        Float::with_val(prec, 1)
    }
}

impl SeriesPoint for Complex {
    fn derivative(n: u32, z: &Self, cfg: &EvalConfig) -> Result<ApproxValue<Self>> {
        eval_series_complex(n, z, cfg)
    }

    fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1)
    }
}

/// `(Cos z)^2 + 4z (Cos' z)^2 - 1`, which vanishes identically.
pub fn pythagorean_residual<V: SeriesPoint>(z: &V, cfg: &EvalConfig) -> Result<ApproxValue<V>> {
    let c0 = V::derivative(0, z, cfg)?;
    let c1 = V::derivative(1, z, cfg)?;
    let prec = c0.prec();
    let z = ApproxValue::exact(z.round(prec).0);
    let one = ApproxValue::exact(V::one(prec));
    Ok(c0.square().add(&z.mul_int(4).mul(&c1.square())).sub(&one))
}

/// `Cos z + 2 Cos' z + 4z Cos'' z`, which vanishes identically.
pub fn ode_residual<V: SeriesPoint>(z: &V, cfg: &EvalConfig) -> Result<ApproxValue<V>> {
    let c0 = V::derivative(0, z, cfg)?;
    let c1 = V::derivative(1, z, cfg)?;
    let c2 = V::derivative(2, z, cfg)?;
    let prec = c0.prec();
    let z = ApproxValue::exact(z.round(prec).0);
    Ok(c0.add(&c1.mul_int(2)).add(&z.mul_int(4).mul(&c2)))
}

/// `|Cos^(n)(x_i)|` at ascending positive sample points. For `n = 1` each
/// value is also held to the envelope `|Cos'(x)| <= 1/(2 sqrt x)`.
pub fn decay_profile(n: u32, xs: &[Float], cfg: &EvalConfig) -> Result<Vec<ApproxValue>> {
    if n == 0 {
        return Err(CosError::Domain("decay profile needs n >= 1".into()));
    }
    if xs.iter().any(|x| *x <= 0) {
        return Err(CosError::Domain("decay profile needs positive sample points".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CosError::Domain("decay profile needs ascending sample points".into()));
    }
    xs.iter()
        .map(|x| {
            let ladder = build_ladder(x, n, cfg)?;
            let value = ladder.orders[n as usize].abs();
            if n == 1 && value.lower() > envelope_upper(x) {
                return Err(CosError::EnvelopeViolated {
                    point: x.to_string_radix(10, Some(20)),
                });
            }
            Ok(value)
        })
        .collect()
}

/// Upper bound on `1/(2 sqrt x)`.
fn envelope_upper(x: &Float) -> Float {
    let root = crate::approx::down(x.sqrt_ref());
    let root = crate::approx::down(&root * 2u32);
    up(root.recip_ref())
}

/// True when each value is certifiably larger than the next.
pub fn strictly_decreasing(values: &[ApproxValue]) -> bool {
    values.windows(2).all(|w| w[0].lower() > w[1].upper())
}

/// `count` points uniformly distributed in the disk `|z| <= radius`,
/// reproducible from `seed`.
pub fn disk_sample(seed: u64, count: usize, radius: f64, prec: u32) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = TAU * rng.gen::<f64>();
            Complex::with_val(prec, (r * theta.cos(), r * theta.sin()))
        })
        .collect()
}
