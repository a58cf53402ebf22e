mod oracle;

use cossqrt::bounds::{cosh_bound, general_bound, gronwall_bound};
use cossqrt::recurrence::build_ladder;
use cossqrt::series::{closed_form, coeff_c, derivative_at_zero, eval_series};
use cossqrt::sinc::{sinc_derivative_quadrature, sinc_derivative_series, QuadratureSpec};
use cossqrt::{ApproxValue, EvalConfig, ExactRational};
use num_bigint::BigInt;
use rug::Float;

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn assert_encloses(got: &ApproxValue, expected: &Float, what: &str) {
    let diff = Float::with_val(400, &got.value - expected).abs();
    let allowed = Float::with_val(400, &got.abs_error + 1e-70);
    assert!(
        diff <= allowed,
        "{what}: got {} +- {}, expected {}",
        got.value.to_string_radix(10, Some(40)),
        got.abs_error.to_string_radix(10, Some(6)),
        expected.to_string_radix(10, Some(40))
    );
    assert!(got.abs_error < 1e-50, "{what}: error {} too large", got.abs_error);
}

fn assert_rational(got: &ExactRational, num: &BigInt, den: &BigInt) {
    let (n, d) = oracle::reduced(num, den);
    assert_eq!(got.numerator().to_string(), n);
    assert_eq!(got.denominator().to_string(), d);
}

fn pi_squared() -> Float {
    let pi = oracle::float(&oracle::pi());
    Float::with_val(400, pi.square_ref())
}

#[test]
fn derivatives_at_zero_match_factorial_ratio() {
    for n in 0..=50u32 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let num = BigInt::from(sign) * BigInt::from(oracle::factorial(n));
        let den = BigInt::from(oracle::factorial(2 * n));
        assert_rational(&derivative_at_zero(n), &num, &den);
    }
}

#[test]
fn known_small_values_at_zero() {
    assert_eq!(derivative_at_zero(0).to_string(), "1");
    assert_eq!(derivative_at_zero(1).to_string(), "-1/2");
    assert_eq!(derivative_at_zero(2).to_string(), "1/12");
    assert_eq!(gronwall_bound(2).to_string(), "1/12");
}

#[test]
fn series_coefficients_match_factorials() {
    for n in 0..8u32 {
        for k in 0..12u32 {
            let num = BigInt::from(oracle::factorial(k + n));
            let den = BigInt::from(oracle::factorial(k)) * BigInt::from(oracle::factorial(2 * k + 2 * n));
            assert_rational(&coeff_c(n, k), &num, &den);
        }
    }
}

#[test]
fn value_at_minus_one_is_cosh_one() {
    let x = Float::with_val(256, -1);
    let expected = oracle::float(&oracle::cosh(1));
    assert_encloses(&closed_form(0, &x, &cfg()).unwrap(), &expected, "closed form");
    assert_encloses(&eval_series(0, &x, &cfg()).unwrap(), &expected, "series");
    assert!(expected.to_string_radix(10, Some(12)).starts_with("1.5430806348"));
}

#[test]
fn first_derivative_at_minus_one() {
    let x = Float::with_val(256, -1);
    let expected = -oracle::float(&(oracle::sinh(1) / 2));
    assert_encloses(&closed_form(1, &x, &cfg()).unwrap(), &expected, "closed form");
    assert_encloses(&eval_series(1, &x, &cfg()).unwrap(), &expected, "series");
}

#[test]
fn second_derivative_at_minus_one() {
    let x = Float::with_val(256, -1);
    let expected = oracle::float(&(oracle::exp_ratio(-1, 1) / 4));
    let ladder = build_ladder(&x, 2, &cfg()).unwrap();
    assert_encloses(&ladder.orders[2], &expected, "ladder");
    assert_encloses(&eval_series(2, &x, &cfg()).unwrap(), &expected, "series");
}

#[test]
fn first_derivative_at_quarter_pi_squared() {
    let x = Float::with_val(256, pi_squared() / 4u32);
    let pi = oracle::pi();
    let expected = -oracle::float(&oracle::div(&oracle::scale(), &pi));
    assert_encloses(&closed_form(1, &x, &cfg()).unwrap(), &expected, "closed form");
    assert_encloses(&eval_series(1, &x, &cfg()).unwrap(), &expected, "series");
}

#[test]
fn second_derivative_at_pi_squared() {
    let x = Float::with_val(256, pi_squared());
    let pi = oracle::pi();
    let four_pi_sq = oracle::mul(&pi, &pi) * 4;
    let expected = oracle::float(&oracle::div(&oracle::scale(), &four_pi_sq));
    let ladder = build_ladder(&x, 2, &cfg()).unwrap();
    assert_encloses(&ladder.orders[2], &expected, "ladder");
    assert_encloses(&eval_series(2, &x, &cfg()).unwrap(), &expected, "series");
}

#[test]
fn general_bound_values() {
    let a = Float::with_val(256, -1);
    let expected = oracle::float(&(oracle::cosh(1) / 120));
    assert_encloses(
        &general_bound(3, 0, &a, &cfg()).unwrap().approx,
        &expected,
        "n=3 m=0 a=-1",
    );

    let a = Float::with_val(256, -4);
    let expected = oracle::float(&(oracle::sinh(2) / 24));
    assert_encloses(
        &general_bound(2, 1, &a, &cfg()).unwrap().approx,
        &expected,
        "n=2 m=1 a=-4",
    );
}

#[test]
fn cosh_bound_values() {
    let a = Float::with_val(256, -1);
    let expected = oracle::float(&(oracle::cosh(1) / 2));
    assert_encloses(&cosh_bound(1, &a, &cfg()).unwrap().approx, &expected, "n=1 a=-1");

    let a = Float::with_val(256, -9);
    let ratio = BigInt::from(oracle::factorial(8) / oracle::factorial(4));
    let expected = oracle::float(&(oracle::cosh(3) / ratio));
    assert_encloses(&cosh_bound(4, &a, &cfg()).unwrap().approx, &expected, "n=4 a=-9");
}

#[test]
fn bounds_at_origin_are_exact() {
    let zero = Float::new(256);
    let b = general_bound(3, 1, &zero, &cfg()).unwrap();
    let expected = (ExactRational::factorial(3) * ExactRational::factorial(2))
        / (ExactRational::factorial(6) * ExactRational::factorial(1))
        * ExactRational::from_ratio(1, 2);
    assert_eq!(b.exact, Some(expected));
    assert_eq!(cosh_bound(5, &zero, &cfg()).unwrap().exact, Some(gronwall_bound(5)));
}

#[test]
fn sinc_first_derivative_at_pi() {
    let pi = oracle::float(&oracle::pi());
    let x = Float::with_val(256, &pi);
    let expected = -oracle::float(&oracle::div(&oracle::scale(), &oracle::pi()));
    assert_encloses(&sinc_derivative_series(1, &x, &cfg()).unwrap(), &expected, "series");
    let q = QuadratureSpec::default();
    let quad = sinc_derivative_quadrature(1, &x, &q, &cfg()).unwrap();
    let diff = Float::with_val(400, &quad.value - &expected).abs();
    assert!(diff <= Float::with_val(400, &quad.abs_error + 1e-70));
}
