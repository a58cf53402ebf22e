//! Sample grids and one-dimensional maximization used by the scans.

use rug::Float;

use crate::error::{CosError, Result};

/// Golden ratio conjugate `(sqrt 5 - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `count` points `lo * (hi/lo)^(i/(count-1))`; both endpoints are returned
/// unchanged. Needs `0 < lo < hi` and `count >= 2`.
pub fn geometric_grid(lo: &Float, hi: &Float, count: usize) -> Result<Vec<Float>> {
    if *lo <= 0 || lo >= hi {
        return Err(CosError::Domain("geometric grid needs 0 < lo < hi".into()));
    }
    if count < 2 {
        return Err(CosError::Domain("grid needs at least two points".into()));
    }
    let prec = lo.prec().max(hi.prec());
    let log_ratio = Float::with_val(prec, hi / lo).ln();
    let last = count - 1;
    let mut grid = Vec::with_capacity(count);
    grid.push(Float::with_val(prec, lo));
    for i in 1..last {
        let t = Float::with_val(prec, &log_ratio * i as u64) / last as u64;
        grid.push(Float::with_val(prec, t.exp() * lo));
    }
    grid.push(Float::with_val(prec, hi));
    Ok(grid)
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: &Float, hi: &Float, count: usize) -> Result<Vec<Float>> {
    if lo >= hi {
        return Err(CosError::Domain("uniform grid needs lo < hi".into()));
    }
    if count < 2 {
        return Err(CosError::Domain("grid needs at least two points".into()));
    }
    let prec = lo.prec().max(hi.prec());
    let span = Float::with_val(prec, hi - lo);
    let last = count - 1;
    let mut grid = Vec::with_capacity(count);
    grid.push(Float::with_val(prec, lo));
    for i in 1..last {
        let step = Float::with_val(prec, &span * i as u64) / last as u64;
        grid.push(Float::with_val(prec, step + lo));
    }
    grid.push(Float::with_val(prec, hi));
    Ok(grid)
}

/// Interior indices whose value is at least as large as both neighbours.
pub fn local_maxima(values: &[Float]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] >= values[i - 1] && values[i] >= values[i + 1] && values[i] > 0)
        .collect()
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`. Returns every evaluated point so the
/// caller keeps the samples.
pub fn golden_section_max<T, F>(mut f: F, a: &Float, b: &Float, width: f64) -> Result<Vec<(Float, T)>>
where
    F: FnMut(&Float) -> Result<(Float, T)>,
{
    let prec = a.prec().max(b.prec());
    let mut lo = Float::with_val(prec, a);
    let mut hi = Float::with_val(prec, b);
    let probe = |lo: &Float, hi: &Float, frac: f64| {
        let span = Float::with_val(prec, hi - lo);
        Float::with_val(prec, span * frac + lo)
    };
    let mut evaluated = Vec::new();
    let mut x1 = probe(&lo, &hi, 1.0 - INV_PHI);
    let mut x2 = probe(&lo, &hi, INV_PHI);
    let (mut f1, t1) = f(&x1)?;
    let (mut f2, t2) = f(&x2)?;
    evaluated.push((x1.clone(), t1));
    evaluated.push((x2.clone(), t2));
    while Float::with_val(prec, &hi - &lo) > width {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = probe(&lo, &hi, 1.0 - INV_PHI);
            let (v, t) = f(&x1)?;
            f1 = v;
            evaluated.push((x1.clone(), t));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = probe(&lo, &hi, INV_PHI);
            let (v, t) = f(&x2)?;
            f2 = v;
            evaluated.push((x2.clone(), t));
        }
        if evaluated.len() > 10_000 {
            break;
        }
    }
    Ok(evaluated)
}
