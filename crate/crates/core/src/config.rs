use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{CosError, Result};

/// Working precision and stopping rules shared by every evaluation routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Mantissa width, in bits, of the values handed back to callers.
    pub precision_bits: u32,
    /// Target bound on the absolute error of a single evaluation.
    pub tolerance: f64,
    /// Below this |x| the derivative ladder uses the series for every order.
    pub switch_radius: f64,
    /// Cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            precision_bits: 256,
            tolerance: 1e-50,
            switch_radius: 0.25,
            max_terms: 10_000,
        }
    }
}

impl EvalConfig {
    pub fn new(precision_bits: u32, tolerance: f64, switch_radius: f64, max_terms: usize) -> Result<Self> {
        let cfg = EvalConfig {
            precision_bits,
            tolerance,
            switch_radius,
            max_terms,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(CosError::InvalidConfig(format!(
                "precision_bits must be at least 64, got {}",
                self.precision_bits
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CosError::InvalidConfig(format!(
                "tolerance must be positive and finite, got {}",
                self.tolerance
            )));
        }
        if !(self.switch_radius.is_finite() && self.switch_radius > 0.0) {
            return Err(CosError::InvalidConfig(format!(
                "switch_radius must be positive and finite, got {}",
                self.switch_radius
            )));
        }
        if self.max_terms < 8 {
            return Err(CosError::InvalidConfig(format!(
                "max_terms must be at least 8, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }

    /// Same config with `extra` more bits of working precision.
    pub fn with_extra_bits(&self, extra: u32) -> Self {
        EvalConfig {
            precision_bits: self.precision_bits + extra,
            ..*self
        }
    }

    /// Same config with the tolerance tightened to at most `2^-bits`.
    pub fn with_tolerance_bits(&self, bits: u32) -> Self {
        let floor = 2f64.powi(-(bits.min(1000) as i32)).max(f64::MIN_POSITIVE);
        EvalConfig {
            tolerance: self.tolerance.min(floor),
            ..*self
        }
    }

    pub(crate) fn tolerance_float(&self) -> Float {
        Float::with_val(64, self.tolerance)
    }

    /// A float of the working precision holding `value`.
    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.precision_bits, value)
    }
}
