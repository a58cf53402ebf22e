use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

use crate::approx::{down, err_add, err_mul, rounding_err, up, ApproxValue};
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::rational::ExactRational;

const GUARD_BITS: u32 = 32;

/// Closed forms of `Cos` and `Cos'` on the real line:
///
/// * `Cos x = cos(sqrt x)` for `x > 0`, `cosh(sqrt |x|)` for `x <= 0`;
/// * `Cos' x = -sin(sqrt x) / (2 sqrt x)` for `x > 0`, `-1/2` at zero and
///   `-sinh(sqrt |x|) / (2 sqrt |x|)` for `x < 0`.
///
/// Evaluated with guard bits and rounded once to the working precision.
/// The error accounts for the rounded square root through a bound on the
/// derivative of the outer function.
pub fn closed_form(n: u32, x: &Float, cfg: &EvalConfig) -> Result<ApproxValue> {
    cfg.validate()?;
    if n > 1 {
        return Err(CosError::Domain(format!(
            "closed form exists only for orders 0 and 1, got {n}"
        )));
    }
    let prec = cfg.precision_bits + GUARD_BITS;
    if x.is_zero() {
        let value = if n == 0 {
            ExactRational::one()
        } else {
            ExactRational::from_ratio(-1, 2)
        };
        return Ok(ApproxValue::from_rational(&value, cfg.precision_bits));
    }
    let (mut s, abs_ord) = Float::with_val_round(prec, x.abs_ref(), Round::Nearest);
    let sqrt_ord = s.sqrt_round(Round::Nearest);
    // Rounding |x| perturbs its square root by at most one more ulp.
    let mut ds = rounding_err(&s, sqrt_ord);
    if abs_ord != Ordering::Equal {
        ds = err_add(&ds, &rounding_err(&s, Ordering::Less));
    }

    let approx = match (n, *x > 0) {
        (0, true) => {
            // |d/ds cos s| <= 1
            let (c, o) = Float::with_val_round(prec, s.cos_ref(), Round::Nearest);
            let e = err_add(&ds, &rounding_err(&c, o));
            ApproxValue::new(c, e)
        }
        (0, false) => {
            // |d/ds cosh s| = sinh s <= cosh s, doubled to cover the perturbed point
            let (c, o) = Float::with_val_round(prec, s.cosh_ref(), Round::Nearest);
            let slope = err_mul(&up(&c), &Float::with_val(64, 2));
            let e = err_add(&err_mul(&ds, &slope), &rounding_err(&c, o));
            ApproxValue::new(c, e)
        }
        (_, true) => {
            // f(s) = sin(s)/(2s) has |f'| <= 1/4
            let (sn, o1) = Float::with_val_round(prec, s.sin_ref(), Round::Nearest);
            let two_s = Float::with_val(prec, &s * 2u32);
            let (q, o2) = Float::with_val_round(prec, &sn / &two_s, Round::Nearest);
            let sin_err = up(&rounding_err(&sn, o1) / down(&two_s));
            let e = err_add(&err_add(&up(&ds / 4u32), &sin_err), &rounding_err(&q, o2));
            ApproxValue::new(-q, e)
        }
        (_, false) => {
            // g(s) = sinh(s)/(2s) has 0 <= g' <= sinh(s)/4 <= cosh(s)/4, doubled as above
            let (sh, o1) = Float::with_val_round(prec, s.sinh_ref(), Round::Nearest);
            let ch = Float::with_val_round(64, s.cosh_ref(), Round::Up).0;
            let two_s = Float::with_val(prec, &s * 2u32);
            let (q, o2) = Float::with_val_round(prec, &sh / &two_s, Round::Nearest);
            let sinh_err = up(&rounding_err(&sh, o1) / down(&two_s));
            let e = err_add(
                &err_add(&up(&err_mul(&ds, &ch) / 2u32), &sinh_err),
                &rounding_err(&q, o2),
            );
            ApproxValue::new(-q, e)
        }
    };
    Ok(approx.round_to(cfg.precision_bits))
}
