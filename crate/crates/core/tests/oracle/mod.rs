//! Reference values computed with plain big-integer arithmetic, independent
//! of MPFR: factorials, fixed-point `exp` by Taylor series and `pi` by
//! Machin's formula.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rug::Float;

/// Decimal digits kept after the point.
pub const DIGITS: u32 = 90;
const GUARD: u32 = 20;

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `num / den` in lowest terms with a positive denominator, as strings.
pub fn reduced(num: &BigInt, den: &BigInt) -> (String, String) {
    let g = num.gcd(den);
    let (mut n, mut d) = (num / &g, den / &g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    (n.to_string(), d.to_string())
}

fn ten_pow(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Fixed point with `DIGITS + GUARD` digits.
fn unit() -> BigInt {
    ten_pow(DIGITS + GUARD)
}

fn finish(v: BigInt) -> BigInt {
    v / ten_pow(GUARD)
}

/// `exp(p/q)` scaled by `10^DIGITS`.
pub fn exp_ratio(p: i64, q: i64) -> BigInt {
    let mut term = unit();
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        sum += &term;
        k += 1;
        term = term * p / (q * k);
    }
    finish(sum)
}

/// `atan(1/n)` with `DIGITS + GUARD` digits.
fn atan_inv(n: i64) -> BigInt {
    let n2 = BigInt::from(n * n);
    let mut power = unit() / n;
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

/// `pi` scaled by `10^DIGITS`.
pub fn pi() -> BigInt {
    finish(atan_inv(5) * 16 - atan_inv(239) * 4)
}

pub fn scale() -> BigInt {
    ten_pow(DIGITS)
}

pub fn cosh(p: i64) -> BigInt {
    (exp_ratio(p, 1) + exp_ratio(-p, 1)) / 2
}

pub fn sinh(p: i64) -> BigInt {
    (exp_ratio(p, 1) - exp_ratio(-p, 1)) / 2
}

/// `a / b` for two fixed-point values.
pub fn div(a: &BigInt, b: &BigInt) -> BigInt {
    a * scale() / b
}

pub fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    a * b / scale()
}

/// Fixed-point value as a 400-bit float.
pub fn float(v: &BigInt) -> Float {
    let negative = v.is_negative();
    let digits = v.abs().to_string();
    let padded = format!("{:0>width$}", digits, width = DIGITS as usize + 1);
    let (int, frac) = padded.split_at(padded.len() - DIGITS as usize);
    let text = format!("{}{}.{}", if negative { "-" } else { "" }, int, frac);
    Float::with_val(400, Float::parse(text).expect("oracle decimal"))
}

/// `|a - b| <= tol`.
pub fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(400, a - b).abs() <= tol
}
