use rug::{Integer, Rational};

use crate::rational::ExactRational;

/// `c(n, k) = (k+n)! / (k! (2k+2n)!)`, the magnitude of the `k`-th Taylor
/// coefficient of the `n`-th derivative.
pub fn coeff_c(n: u32, k: u32) -> ExactRational {
    let num = Integer::from(Integer::factorial(k + n));
    let den = Integer::from(Integer::factorial(k)) * Integer::from(Integer::factorial(2 * k + 2 * n));
    ExactRational::from(Rational::from((num, den)))
}

/// `(-1)^n n! / (2n)!`, the exact value of the `n`-th derivative at zero.
pub fn derivative_at_zero(n: u32) -> ExactRational {
    let c = coeff_c(n, 0);
    if n.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `c(n, k+1) / c(n, k) = (k+n+1) / ((k+1)(2k+2n+1)(2k+2n+2))`.
pub(crate) fn next_coeff(n: u32, k: u32, current: &ExactRational) -> ExactRational {
    let (n, k) = (u64::from(n), u64::from(k));
    let den = (k + 1) * (2 * k + 2 * n + 1) * (2 * k + 2 * n + 2);
    current.scale(k + n + 1, den)
}

/// Iterator over `c(n, 0), c(n, 1), ...` built by the exact ratio recurrence.
#[derive(Clone, Debug)]
pub struct CoeffSequence {
    n: u32,
    k: u32,
    current: ExactRational,
}

impl CoeffSequence {
    pub fn new(n: u32) -> Self {
        CoeffSequence {
            n,
            k: 0,
            current: coeff_c(n, 0),
        }
    }
}

impl Iterator for CoeffSequence {
    type Item = ExactRational;

    fn next(&mut self) -> Option<ExactRational> {
        let out = self.current.clone();
        self.current = next_coeff(self.n, self.k, &self.current);
        self.k += 1;
        Some(out)
    }
}
