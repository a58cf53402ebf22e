//! Certified enclosure of `sup |Cos^(n)|` on `[delta, X]` by branch and bound.
//!
//! On a cell of width `h` with endpoint values `f(a)`, `f(b)`, the maximum of
//! `|f|` exceeds `max(|f(a)|, |f(b)|)` by at most `min(L h / 2, M h^2 / 8)`,
//! where `L` and `M` bound `|f'|` and `|f''|`. For `f = Cos^(n)` on `x >= 0`
//! these are the uniform bounds `(n+1)!/(2n+2)!` and `(n+2)!/(2n+4)!`.
//! Cells whose padded maximum can still exceed the best certified lower
//! bound are bisected until the enclosure is narrower than the tolerance.

use rug::float::Round;
use rug::Float;

use super::{gronwall_bound, DerivativeEvaluator};
use crate::approx::{down, up};
use crate::config::EvalConfig;
use crate::error::{CosError, Result};
use crate::rational::ExactRational;
use crate::report::{decimal, BoundReport, Domain, InequalityId, Params, PointSlack};

use super::grid::geometric_grid;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrictnessOptions {
    pub grid_points: usize,
    /// Target width of the supremum enclosure.
    pub tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for StrictnessOptions {
    fn default() -> Self {
        StrictnessOptions {
            grid_points: 2000,
            tolerance: 1e-12,
            max_evaluations: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SupremumResult {
    pub order: u32,
    pub delta: Float,
    pub x_max: Float,
    /// Sample point with the largest `|Cos^(n)|`.
    pub location: Float,
    /// Certified `lo <= sup |Cos^(n)| <= hi`.
    pub enclosure: (Float, Float),
    /// Largest sampled `|Cos^(n)|`.
    pub grid_max: Float,
    pub bound: Float,
    pub evaluations: usize,
}

impl SupremumResult {
    pub fn width(&self) -> Float {
        up(&self.enclosure.1 - &self.enclosure.0)
    }

    /// The supremum is certifiably below `n!/(2n)!`.
    pub fn strictly_below_bound(&self) -> bool {
        self.enclosure.1 < self.bound
    }

    pub fn to_report(&self, cfg: &EvalConfig) -> BoundReport {
        let slack = down(&self.bound - &self.enclosure.1);
        let point = PointSlack {
            x: self.location.clone(),
            abs_error: Float::new(64),
            violated: self.enclosure.0 > *gronwall_bound(self.order).as_rational(),
            slack,
            bound: self.bound.clone(),
        };
        let params = Params::new()
            .with("n", self.order)
            .with("delta", decimal(&self.delta))
            .with("X", decimal(&self.x_max))
            .with("precision_bits", cfg.precision_bits);
        let domain = Domain {
            lo: self.delta.clone(),
            hi: self.x_max.clone(),
            grid: format!("branch and bound, {} evaluations", self.evaluations),
        };
        let mut report = BoundReport::from_points(InequalityId::Strict, params, domain, &[point]);
        report.passed = self.strictly_below_bound();
        report
    }
}

struct Cell {
    a: usize,
    b: usize,
    upper: Float,
}

/// [`verify_strictness_with`] using [`StrictnessOptions::default`].
pub fn verify_strictness(n: u32, delta: &Float, x_max: &Float, cfg: &EvalConfig) -> Result<SupremumResult> {
    verify_strictness_with(n, delta, x_max, &StrictnessOptions::default(), cfg)
}

/// Enclose `sup_{delta <= x <= X} |Cos^(n)(x)|` to within `opts.tolerance`.
pub fn verify_strictness_with(
    n: u32,
    delta: &Float,
    x_max: &Float,
    opts: &StrictnessOptions,
    cfg: &EvalConfig,
) -> Result<SupremumResult> {
    if *delta <= 0 || delta >= x_max {
        return Err(CosError::Domain("need 0 < delta < X".into()));
    }
    if opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(CosError::Domain("enclosure tolerance must be positive".into()));
    }
    let eval = DerivativeEvaluator::new(n, cfg)?;
    let lipschitz = upper64(&gronwall_bound(n + 1));
    let curvature = upper64(&gronwall_bound(n + 2));
    let tol = Float::with_val(64, opts.tolerance);

    let grid = geometric_grid(&cfg.float(delta), &cfg.float(x_max), opts.grid_points.max(2))?;
    let mut xs = Vec::with_capacity(grid.len() * 2);
    let mut mags = Vec::with_capacity(grid.len() * 2);
    let mut uppers = Vec::with_capacity(grid.len() * 2);
    let mut lo = Float::new(64);
    for x in grid {
        let m = eval.sample(&x)?.magnitude();
        let l = m.lower();
        if l > lo {
            lo = down(&l);
        }
        uppers.push(up(m.upper()));
        mags.push(m.value);
        xs.push(x);
    }

    let pad = |a: &Float, b: &Float| {
        let h = up(b - a);
        let linear = up(&lipschitz * &h) / 2u32;
        let h2 = up(h.square_ref());
        let quadratic = up(&curvature * &h2) / 8u32;
        up(linear.min(&quadratic))
    };
    let cell_upper = |uppers: &[Float], xs: &[Float], a: usize, b: usize| {
        let top = if uppers[a] > uppers[b] { &uppers[a] } else { &uppers[b] };
        let p = pad(&xs[a], &xs[b]);
        up(top + &p)
    };

    let mut open: Vec<Cell> = (0..xs.len() - 1)
        .map(|i| Cell {
            a: i,
            b: i + 1,
            upper: cell_upper(&uppers, &xs, i, i + 1),
        })
        .collect();
    let mut closed_max = Float::new(64);
    while let Some(cell) = open.pop() {
        let threshold = up(&lo + &tol);
        if cell.upper <= threshold {
            if cell.upper > closed_max {
                closed_max = cell.upper;
            }
            continue;
        }
        if xs.len() >= opts.max_evaluations {
            return Err(CosError::Domain(format!(
                "supremum enclosure needs more than {} evaluations",
                opts.max_evaluations
            )));
        }
        let mid = Float::with_val(xs[cell.a].prec(), &xs[cell.a] + &xs[cell.b]) / 2u32;
        if mid <= xs[cell.a] || mid >= xs[cell.b] {
            return Err(CosError::Domain("supremum cell cannot be bisected further".into()));
        }
        let m = eval.sample(&mid)?.magnitude();
        let l = m.lower();
        if l > lo {
            lo = down(&l);
        }
        uppers.push(up(m.upper()));
        mags.push(m.value);
        xs.push(mid);
        let c = xs.len() - 1;
        open.push(Cell {
            a: cell.a,
            b: c,
            upper: cell_upper(&uppers, &xs, cell.a, c),
        });
        open.push(Cell {
            a: c,
            b: cell.b,
            upper: cell_upper(&uppers, &xs, c, cell.b),
        });
    }

    let best = (0..mags.len())
        .max_by(|&i, &j| mags[i].partial_cmp(&mags[j]).expect("finite"))
        .expect("nonempty grid");
    let hi = if closed_max > lo { closed_max } else { lo.clone() };
    Ok(SupremumResult {
        order: n,
        delta: delta.clone(),
        x_max: x_max.clone(),
        location: xs[best].clone(),
        enclosure: (lo, hi),
        grid_max: mags[best].clone(),
        bound: Float::with_val_round(64, gronwall_bound(n).as_rational(), Round::Down).0,
        evaluations: xs.len(),
    })
}

fn upper64(value: &ExactRational) -> Float {
    Float::with_val_round(64, value.as_rational(), Round::Up).0
}
