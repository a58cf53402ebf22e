//! Taylor-series evaluation of the derivatives of `Cos z = sum (-1)^k z^k / (2k)!`.
//!
//! The `n`-th derivative is `(-1)^n sum_k c(n,k) (-z)^k`. Coefficients are
//! generated exactly and rounded once each; the sum is accumulated with
//! [`ApproxValue`] so the returned error covers rounding as well as the
//! truncated tail.

mod closed;
mod coeffs;

pub use closed::closed_form;
pub use coeffs::{coeff_c, derivative_at_zero, CoeffSequence};

use rug::{Complex, Float};

use crate::approx::{err_add, err_mul, rounding_err, up, ApproxComplex, ApproxValue, Scalar};
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::rational::ExactRational;

/// How the tail of the series is bounded once summation stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TailRule {
    /// Real positive argument: signs alternate and, once the term ratio is
    /// below one, magnitudes decrease, so the tail is below the first
    /// omitted term.
    Alternating,
    /// Nonpositive real or complex argument: the term ratio decreases in `k`,
    /// so after it drops below 1/2 the tail is dominated by a geometric series.
    Geometric,
}

/// Rounded coefficient table for one derivative order, sized for arguments
/// up to a given modulus. Immutable after construction and shareable across
/// threads.
#[derive(Clone, Debug)]
pub struct DerivativeSeries {
    order: u32,
    work_prec: u32,
    out_prec: u32,
    half_tolerance: Float,
    tolerance: Float,
    max_terms: usize,
    coeffs: Vec<ApproxValue>,
    rest: CoeffSequence,
}

/// log2 of the largest term and the number of terms needed at modulus `radius`.
fn plan_terms(n: u32, radius: f64, tolerance: f64, max_terms: usize) -> (f64, usize) {
    let mut log_term: f64 = -((n + 1)..=(2 * n)).map(|i| f64::from(i).log2()).sum::<f64>();
    let mut log_max = log_term;
    let target = (tolerance / 2.0).log2() - 8.0;
    let log_radius = if radius > 0.0 { radius.log2() } else { f64::NEG_INFINITY };
    for k in 0..max_terms {
        let denom = 2.0 * (k as f64 + 1.0) * (2.0 * (k as f64) + 2.0 * f64::from(n) + 1.0);
        let log_ratio = log_radius - denom.log2();
        let ratio = log_ratio.exp2();
        if ratio < 0.5 && log_term + (ratio / (1.0 - ratio)).log2() < target {
            return (log_max, k + 3);
        }
        log_term += log_ratio;
        log_max = log_max.max(log_term);
    }
    (log_max, max_terms)
}

impl DerivativeSeries {
    /// Prepare the series of `Cos^(n)` for arguments with `|z| <= radius`.
    pub fn new(n: u32, radius: &Float, cfg: &EvalConfig) -> Result<Self> {
        cfg.validate()?;
        let radius = up(radius.abs_ref()).to_f64();
        let (log_max, terms) = plan_terms(n, radius, cfg.tolerance, cfg.max_terms);
        let guard = 32 + log_max.max(0.0).ceil() as u32 + (terms as f64 + 1.0).log2().ceil() as u32;
        let work_prec = cfg.precision_bits + guard;
        let mut rest = CoeffSequence::new(n);
        let coeffs = rest
            .by_ref()
            .take(terms)
            .map(|c| ApproxValue::from_rational(&c, work_prec))
            .collect();
        let tolerance = cfg.tolerance_float();
        Ok(DerivativeSeries {
            order: n,
            work_prec,
            out_prec: cfg.precision_bits,
            half_tolerance: Float::with_val(64, &tolerance / 2),
            tolerance,
            max_terms: cfg.max_terms,
            coeffs,
            rest,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn working_precision(&self) -> u32 {
        self.work_prec
    }

    /// `Cos^(n)(x)` for real `x`.
    pub fn eval(&self, x: &Float) -> Result<ApproxValue> {
        if x.is_zero() {
            return Ok(self.at_zero());
        }
        let rule = if *x > 0 {
            TailRule::Alternating
        } else {
            TailRule::Geometric
        };
        let w = Float::with_val(x.prec(), -x);
        let sum = self.sum(&w, rule)?;
        self.finish(self.apply_sign(sum))
    }

    /// `|Cos^(n)(x)|` for `x <= 0`, as the positive series `sum c(n,k) |x|^k`.
    pub fn eval_abs_negative(&self, x: &Float) -> Result<ApproxValue> {
        if *x > 0 {
            return Err(CosError::Domain(format!(
                "positive-term series needs x <= 0, got {}",
                x.to_f64()
            )));
        }
        if x.is_zero() {
            return Ok(self.at_zero().abs());
        }
        let w = Float::with_val(x.prec(), x.abs_ref());
        let sum = self.sum(&w, TailRule::Geometric)?;
        self.finish(sum)
    }

    /// `Cos^(n)(z)` for complex `z`.
    pub fn eval_complex(&self, z: &Complex) -> Result<ApproxComplex> {
        let w = Complex::with_val((z.prec().0, z.prec().1), -z);
        let sum = self.sum(&w, TailRule::Geometric)?;
        let sum = self.apply_sign(sum);
        let (value, ord) = Complex::with_val_round(
            self.out_prec,
            &sum.value,
            (rug::float::Round::Nearest, rug::float::Round::Nearest),
        );
        let e = err_add(
            &sum.abs_error,
            &err_add(&rounding_err(value.real(), ord.0), &rounding_err(value.imag(), ord.1)),
        );
        self.check_tolerance(ApproxValue::new(value, e))
    }

    fn at_zero(&self) -> ApproxValue {
        ApproxValue::from_rational(&derivative_at_zero(self.order), self.out_prec)
    }

    fn apply_sign<V: Scalar>(&self, sum: ApproxValue<V>) -> ApproxValue<V> {
        if self.order % 2 == 1 {
            sum.neg()
        } else {
            sum
        }
    }

    fn finish(&self, sum: ApproxValue) -> Result<ApproxValue> {
        self.check_tolerance(sum.round_to(self.out_prec))
    }

    fn check_tolerance<V: Scalar>(&self, value: ApproxValue<V>) -> Result<ApproxValue<V>> {
        if value.abs_error > self.tolerance {
            return Err(CosError::NonConvergence {
                max_terms: self.max_terms,
                tail_bound: value.abs_error.to_string_radix(10, Some(6)),
            });
        }
        Ok(value)
    }

    fn coeff(&self, k: usize, extra: &mut Option<(CoeffSequence, Vec<ApproxValue>)>) -> ApproxValue {
        if let Some(c) = self.coeffs.get(k) {
            return c.clone();
        }
        let (seq, cache) = extra.get_or_insert_with(|| (self.rest.clone(), Vec::new()));
        let idx = k - self.coeffs.len();
        while cache.len() <= idx {
            let c: ExactRational = seq.next().expect("coefficient sequence is infinite");
            cache.push(ApproxValue::from_rational(&c, self.work_prec));
        }
        cache[idx].clone()
    }

    /// `sum_k c(n,k) w^k` with a certified tail.
    fn sum<V: Scalar>(&self, w: &V, rule: TailRule) -> Result<ApproxValue<V>> {
        let prec = self.work_prec;
        let (base, base_err) = w.round(prec);
        let base = ApproxValue::new(base, base_err);
        let modulus = base.magnitude_upper();
        let n = u64::from(self.order);
        let mut extra = None;
        let mut power = ApproxValue::exact(V::from_real(&Float::with_val(prec, 1), prec).0);
        let mut sum = ApproxValue::exact(V::zero(prec));
        let mut term = power.mul_coeff(&self.coeff(0, &mut extra));
        for k in 0..self.max_terms {
            sum = sum.add(&term);
            let k64 = k as u64;
            let denom = Float::with_val(128, 2 * (k64 + 1) * (2 * k64 + 2 * n + 1));
            power = power.mul(&base);
            let next = power.mul_coeff(&self.coeff(k + 1, &mut extra));
            let tail = match rule {
                TailRule::Alternating => {
                    let bound = next.magnitude_upper();
                    (modulus < denom && bound < self.half_tolerance).then_some(bound)
                }
                TailRule::Geometric => {
                    let ratio = up(&modulus / &denom);
                    if ratio < 0.5 {
                        let one_minus = crate::approx::down(1 - Float::with_val(64, &ratio));
                        let bound = up(&err_mul(&term.magnitude_upper(), &ratio) / &one_minus);
                        (bound < self.half_tolerance).then_some(bound)
                    } else {
                        None
                    }
                }
            };
            if let Some(tail) = tail {
                sum.abs_error = err_add(&sum.abs_error, &tail);
                return Ok(sum);
            }
            term = next;
        }
        Err(CosError::NonConvergence {
            max_terms: self.max_terms,
            tail_bound: term.magnitude_upper().to_string_radix(10, Some(6)),
        })
    }
}

/// `Cos^(n)(z)` by its Taylor series.
pub fn eval_series(n: u32, z: &Float, cfg: &EvalConfig) -> Result<ApproxValue> {
    DerivativeSeries::new(n, z, cfg)?.eval(z)
}

/// `Cos^(n)(z)` by its Taylor series at a complex point.
pub fn eval_series_complex(n: u32, z: &Complex, cfg: &EvalConfig) -> Result<ApproxComplex> {
    let radius = crate::approx::up(z.abs_ref());
    DerivativeSeries::new(n, &radius, cfg)?.eval_complex(z)
}

/// `|Cos^(n)(x)|` for `x <= 0` as a sum of positive terms.
pub fn eval_abs_series_negative(n: u32, x: &Float, cfg: &EvalConfig) -> Result<ApproxValue> {
    if *x > 0 {
        return Err(CosError::Domain(format!("x must be <= 0, got {}", x.to_f64())));
    }
    DerivativeSeries::new(n, x, cfg)?.eval_abs_negative(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    #[test]
    fn zero_of_cos_at_quarter_pi_squared() {
        let x = Float::with_val(256, pi(256).square() / 4u32);
        let v = eval_series(0, &x, &cfg()).unwrap();
        assert!(v.contains(&Float::new(256)));
        assert!(v.abs_error <= 1e-50);
    }

    #[test]
    fn value_at_zero_is_the_rounded_exact_derivative() {
        let v = eval_series(1, &Float::new(256), &cfg()).unwrap();
        assert_eq!(v.value, -0.5);
        assert!(v.abs_error.is_zero());
        for n in 0..30 {
            let v = eval_series(n, &Float::new(256), &cfg()).unwrap();
            let (expected, _) = derivative_at_zero(n).to_float(256);
            assert_eq!(v.value, expected);
            let ulp = Float::with_val(64, Float::i_exp(1, expected.get_exp().unwrap() - 256));
            assert!(v.abs_error <= ulp);
        }
    }

    #[test]
    fn negative_argument_gives_cosh_family() {
        let x = Float::with_val(256, -1);
        let v = eval_series(0, &x, &cfg()).unwrap();
        assert!(v.contains(&Float::with_val(600, 1).cosh()));
        let a = eval_abs_series_negative(1, &x, &cfg()).unwrap();
        assert!(a.contains(&(Float::with_val(600, 1).sinh() / 2u32)));
        let d = eval_series(1, &x, &cfg()).unwrap();
        assert!(d.agrees_with(&a.neg()));
    }

    #[test]
    fn abs_series_rejects_positive_points() {
        let err = eval_abs_series_negative(0, &Float::with_val(64, 1), &cfg()).unwrap_err();
        assert!(matches!(err, CosError::Domain(_)));
    }

    #[test]
    fn term_cap_reports_nonconvergence() {
        let tight = EvalConfig { max_terms: 8, ..cfg() };
        let err = eval_series(0, &Float::with_val(256, 10_000), &tight).unwrap_err();
        assert!(matches!(err, CosError::NonConvergence { max_terms: 8, .. }));
    }

    #[test]
    fn complex_argument_satisfies_cos_of_square() {
        let z = Complex::with_val(256, (1.5, -2.25));
        let v = eval_series_complex(0, &Complex::with_val(256, z.square_ref()), &cfg()).unwrap();
        let expected = Complex::with_val(600, Complex::with_val(600, (1.5, -2.25)).cos());
        assert!(v.contains(&Complex::with_val(600, &expected)));
        assert!(v.abs_error <= 1e-50);
    }

    #[test]
    fn large_positive_argument_uses_guard_bits() {
        let x = Float::with_val(256, 1_000_000);
        let series = DerivativeSeries::new(0, &x, &cfg()).unwrap();
        assert!(series.working_precision() > 256 + 1400);
        let v = series.eval(&x).unwrap();
        let expected = Float::with_val(600, 1000).cos();
        assert!(v.contains(&Float::with_val(600, &expected)));
    }
}
