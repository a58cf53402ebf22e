//! Values paired with a rigorous absolute-error bound.
//!
//! Every operation on [`ApproxValue`] propagates the operands' error bounds
//! by the triangle inequality and adds the rounding error of the operation
//! itself. MPFR rounds correctly, so an inexact result is off by less than
//! one unit in the last place; an exact result (ternary value `Equal`)
//! contributes nothing. Error bounds live in 64-bit floats and are always
//! rounded upward.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use crate::rational::ExactRational;

/// Precision of error-bound arithmetic.
pub const ERR_PREC: u32 = 64;

pub(crate) fn err_zero() -> Float {
    Float::new(ERR_PREC)
}

/// Bound on the rounding error of a correctly rounded result.
pub(crate) fn rounding_err(value: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal || value.is_zero() {
        return err_zero();
    }
    match value.get_exp() {
        Some(exp) => Float::with_val(ERR_PREC, Float::i_exp(1, exp - value.prec() as i32)),
        None => Float::with_val(ERR_PREC, rug::float::Special::Infinity),
    }
}

pub(crate) fn up<T>(value: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(ERR_PREC, value, Round::Up).0
}

pub(crate) fn down<T>(value: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(ERR_PREC, value, Round::Down).0
}

pub(crate) fn err_add(a: &Float, b: &Float) -> Float {
    up(a + b)
}

pub(crate) fn err_mul(a: &Float, b: &Float) -> Float {
    up(a * b)
}

/// Arithmetic needed by the series and identity code, implemented for real
/// and complex multiprecision scalars. Each method returns the correctly
/// rounded result and a bound on its rounding error.
pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    fn zero(prec: u32) -> Self;
    fn prec(&self) -> u32;
    fn from_real(value: &Float, prec: u32) -> (Self, Float);
    fn round(&self, prec: u32) -> (Self, Float);
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self, prec: u32) -> (Self, Float);
    fn sub(&self, rhs: &Self, prec: u32) -> (Self, Float);
    fn mul(&self, rhs: &Self, prec: u32) -> (Self, Float);
    fn mul_real(&self, rhs: &Float, prec: u32) -> (Self, Float);
    fn div_real(&self, rhs: &Float, prec: u32) -> (Self, Float);
    fn neg(&self) -> Self;
    /// Upper bound on the modulus.
    fn abs_upper(&self) -> Float;
    /// Exact modulus comparison `|self - rhs| <= bound`.
    fn within(&self, rhs: &Self, bound: &Float) -> bool;
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }

    fn prec(&self) -> u32 {
        Float::prec(self)
    }

    fn from_real(value: &Float, prec: u32) -> (Self, Float) {
        let (v, ord) = Float::with_val_round(prec, value, Round::Nearest);
        let e = rounding_err(&v, ord);
        (v, e)
    }

    fn round(&self, prec: u32) -> (Self, Float) {
        Scalar::from_real(self, prec)
    }

    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }

    fn add(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = (self + rhs).complete_round(prec, Round::Nearest);
        let e = rounding_err(&v, ord);
        (v, e)
    }

    fn sub(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = (self - rhs).complete_round(prec, Round::Nearest);
        let e = rounding_err(&v, ord);
        (v, e)
    }

    fn mul(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = (self * rhs).complete_round(prec, Round::Nearest);
        let e = rounding_err(&v, ord);
        (v, e)
    }

    fn mul_real(&self, rhs: &Float, prec: u32) -> (Self, Float) {
        Scalar::mul(self, rhs, prec)
    }

    fn div_real(&self, rhs: &Float, prec: u32) -> (Self, Float) {
        let (v, ord) = (self / rhs).complete_round(prec, Round::Nearest);
        let e = rounding_err(&v, ord);
        (v, e)
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn abs_upper(&self) -> Float {
        up(self.abs_ref())
    }

    fn within(&self, rhs: &Self, bound: &Float) -> bool {
        let (Some(a), Some(b), Some(bound)) = (
            ExactRational::from_float(self),
            ExactRational::from_float(rhs),
            ExactRational::from_float(bound),
        ) else {
            return false;
        };
        (a - b).abs() <= bound
    }
}

fn complex_err(v: &Complex, ord: (Ordering, Ordering)) -> Float {
    err_add(&rounding_err(v.real(), ord.0), &rounding_err(v.imag(), ord.1))
}

const NEAREST2: (Round, Round) = (Round::Nearest, Round::Nearest);

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }

    fn prec(&self) -> u32 {
        self.prec().0.max(self.prec().1)
    }

    fn from_real(value: &Float, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, value, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn round(&self, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }

    fn add(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self + rhs, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn sub(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self - rhs, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn mul(&self, rhs: &Self, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self * rhs, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn mul_real(&self, rhs: &Float, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self * rhs, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn div_real(&self, rhs: &Float, prec: u32) -> (Self, Float) {
        let (v, ord) = Complex::with_val_round(prec, self / rhs, NEAREST2);
        let e = complex_err(&v, ord);
        (v, e)
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn abs_upper(&self) -> Float {
        up(self.abs_ref())
    }

    fn within(&self, rhs: &Self, bound: &Float) -> bool {
        let parts = (
            ExactRational::from_float(self.real()),
            ExactRational::from_float(self.imag()),
            ExactRational::from_float(rhs.real()),
            ExactRational::from_float(rhs.imag()),
            ExactRational::from_float(bound),
        );
        let (Some(ar), Some(ai), Some(br), Some(bi), Some(bound)) = parts else {
            return false;
        };
        let dr = ar - br;
        let di = ai - bi;
        &(&dr * &dr) + &(&di * &di) <= &bound * &bound
    }
}

/// A multiprecision value with a rigorous bound on `|value - true value|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxValue<V = Float> {
    pub value: V,
    pub abs_error: Float,
}

pub type ApproxComplex = ApproxValue<Complex>;

impl<V: Scalar> ApproxValue<V> {
    pub fn exact(value: V) -> Self {
        ApproxValue {
            value,
            abs_error: err_zero(),
        }
    }

    pub fn new(value: V, abs_error: Float) -> Self {
        debug_assert!(abs_error.is_finite() && abs_error >= 0);
        ApproxValue { value, abs_error }
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn from_rational(value: &ExactRational, prec: u32) -> Self {
        let (f, exact) = value.to_float(prec);
        let e = if exact {
            err_zero()
        } else {
            rounding_err(&f, Ordering::Less)
        };
        let (v, conv) = V::from_real(&f, prec);
        ApproxValue::new(v, err_add(&e, &conv))
    }

    pub fn is_finite_error(&self) -> bool {
        self.abs_error.is_finite()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (v, r) = self.value.add(&rhs.value, self.prec());
        let e = err_add(&err_add(&self.abs_error, &rhs.abs_error), &r);
        ApproxValue::new(v, e)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (v, r) = self.value.sub(&rhs.value, self.prec());
        let e = err_add(&err_add(&self.abs_error, &rhs.abs_error), &r);
        ApproxValue::new(v, e)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (v, r) = self.value.mul(&rhs.value, self.prec());
        let cross = err_add(
            &err_mul(&self.value.abs_upper(), &rhs.abs_error),
            &err_mul(&rhs.value.abs_upper(), &self.abs_error),
        );
        let e = err_add(&err_add(&cross, &err_mul(&self.abs_error, &rhs.abs_error)), &r);
        ApproxValue::new(v, e)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiply by an exactly known real.
    pub fn mul_exact(&self, rhs: &Float) -> Self {
        let (v, r) = self.value.mul_real(rhs, self.prec());
        let e = err_add(&err_mul(&self.abs_error, &up(rhs.abs_ref())), &r);
        ApproxValue::new(v, e)
    }

    /// Multiply by an uncertain real coefficient.
    pub fn mul_coeff(&self, coeff: &ApproxValue<Float>) -> Self {
        let (v, r) = self.value.mul_real(&coeff.value, self.prec());
        let cross = err_add(
            &err_mul(&self.value.abs_upper(), &coeff.abs_error),
            &err_mul(&up(coeff.value.abs_ref()), &self.abs_error),
        );
        let e = err_add(&err_add(&cross, &err_mul(&self.abs_error, &coeff.abs_error)), &r);
        ApproxValue::new(v, e)
    }

    pub fn mul_int(&self, rhs: i64) -> Self {
        self.mul_exact(&Float::with_val(64, rhs))
    }

    /// Divide by an exactly known nonzero real.
    pub fn div_exact(&self, rhs: &Float) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        let (v, r) = self.value.div_real(rhs, self.prec());
        let e = err_add(&up(&self.abs_error / down(rhs.abs_ref())), &r);
        ApproxValue::new(v, e)
    }

    pub fn neg(&self) -> Self {
        ApproxValue::new(self.value.neg(), self.abs_error.clone())
    }

    /// True when the enclosures of `self` and `rhs` overlap, i.e.
    /// `|self.value - rhs.value| <= self.abs_error + rhs.abs_error` exactly.
    pub fn agrees_with(&self, rhs: &Self) -> bool {
        self.value.within(&rhs.value, &err_add(&self.abs_error, &rhs.abs_error))
    }

    /// True when the enclosure contains `target`.
    pub fn contains(&self, target: &V) -> bool {
        self.value.within(target, &self.abs_error)
    }

    /// Upper bound on the modulus of the true value.
    pub fn magnitude_upper(&self) -> Float {
        err_add(&self.value.abs_upper(), &self.abs_error)
    }
}

impl ApproxValue<Float> {
    pub fn from_f64(value: f64, prec: u32) -> Self {
        ApproxValue::exact(Float::with_val(prec, value))
    }

    pub fn abs(&self) -> Self {
        ApproxValue::new(self.value.clone().abs(), self.abs_error.clone())
    }

    /// Lower bound on the true value, rounded toward minus infinity.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec() + 2, &self.value - &self.abs_error, Round::Down).0
    }

    /// Upper bound on the true value, rounded toward plus infinity.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec() + 2, &self.value + &self.abs_error, Round::Up).0
    }

    /// Quotient of two uncertain reals. `None` when the divisor's enclosure
    /// contains zero.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        let b_lo = down(rhs.value.abs_ref());
        let gap = down(&b_lo - &rhs.abs_error);
        if gap <= 0 {
            return None;
        }
        let (v, ord) = (&self.value / &rhs.value).complete_round(self.prec(), Round::Nearest);
        let num = err_add(
            &err_mul(&up(self.value.abs_ref()), &rhs.abs_error),
            &err_mul(&up(rhs.value.abs_ref()), &self.abs_error),
        );
        let den = down(&b_lo * &gap);
        let e = err_add(&up(&num / &den), &rounding_err(&v, ord));
        Some(ApproxValue::new(v, e))
    }

    /// Round the value to `prec` bits, adding the rounding error.
    pub fn round_to(&self, prec: u32) -> Self {
        let (v, ord) = Float::with_val_round(prec, &self.value, Round::Nearest);
        let e = err_add(&self.abs_error, &rounding_err(&v, ord));
        ApproxValue::new(v, e)
    }

    pub fn to_complex(&self) -> ApproxComplex {
        ApproxValue::new(Complex::with_val(self.prec(), &self.value), self.abs_error.clone())
    }
}

impl<V: fmt::Display> fmt::Display for ApproxValue<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.value, self.abs_error.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn third(prec: u32) -> ApproxValue {
        ApproxValue::from_rational(&ExactRational::from_ratio(1, 3), prec)
    }

    #[test]
    fn exact_rational_has_zero_error() {
        let half = ApproxValue::<Float>::from_rational(&ExactRational::from_ratio(-1, 2), 128);
        assert!(half.abs_error.is_zero());
        assert_eq!(half.value, -0.5);
    }

    #[test]
    fn inexact_rational_error_is_one_ulp_at_most() {
        let t = third(128);
        assert!(t.abs_error > 0);
        assert!(t.abs_error <= Float::with_val(64, Float::i_exp(1, -128)));
        assert!(t.contains(&Float::with_val(512, Float::with_val(512, 1) / 3)));
    }

    #[test]
    fn arithmetic_encloses_high_precision_reference() {
        let prec = 80;
        let a = third(prec);
        let pi = ApproxValue::new(
            Float::with_val(prec, Constant::Pi),
            rounding_err(&Float::with_val(prec, Constant::Pi), Ordering::Less),
        );
        let r = a
            .mul(&pi)
            .add(&a)
            .sub(&pi.square())
            .div_exact(&Float::with_val(prec, 7));
        let hp = 600;
        let a_hp = Float::with_val(hp, 1) / 3;
        let pi_hp = Float::with_val(hp, Constant::Pi);
        let prod = Float::with_val(hp, &a_hp * &pi_hp);
        let sq = Float::with_val(hp, &pi_hp * &pi_hp);
        let expected = (prod + &a_hp - sq) / 7u32;
        assert!(r.contains(&expected));
    }

    #[test]
    fn division_rejects_divisor_straddling_zero() {
        let a = ApproxValue::from_f64(1.0, 64);
        let b = ApproxValue::new(Float::with_val(64, 1e-30), Float::with_val(64, 1e-20));
        assert!(a.div(&b).is_none());
        let c = ApproxValue::new(Float::with_val(64, 3), Float::with_val(64, 1e-10));
        let q = a.div(&c).unwrap();
        let eps = Float::with_val(200, 1e-10);
        assert!(q.contains(&(Float::with_val(200, 1) / (Float::with_val(200, 3) - &eps))));
        assert!(q.contains(&(Float::with_val(200, 1) / (Float::with_val(200, 3) + &eps))));
    }

    #[test]
    fn complex_agreement_is_exact_modulus_check() {
        let z = ApproxValue::exact(Complex::with_val(64, (3, 4)));
        let w = ApproxValue::new(Complex::with_val(64, (0, 0)), Float::with_val(64, 5));
        assert!(z.agrees_with(&w));
        let w = ApproxValue::new(Complex::with_val(64, (0, 0)), Float::with_val(64, 4.99));
        assert!(!z.agrees_with(&w));
    }
}
