//! Outcome of certifying one inequality on one finite domain, and its
//! decimal serialization.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::approx::{err_add, rounding_err, ApproxValue, Scalar};
use crate::rational::ExactRational;

/// Significant digits used whenever a value is written out.
pub const DECIMAL_DIGITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "MAIN_1")]
    Main,
    #[serde(rename = "STRICT")]
    Strict,
    #[serde(rename = "GENERAL_12")]
    General,
    #[serde(rename = "COSH_13")]
    Cosh,
    #[serde(rename = "MONOTONE_15")]
    Monotone,
    #[serde(rename = "COEFF")]
    Coeff,
    #[serde(rename = "GRONWALL_0")]
    Gronwall,
    #[serde(rename = "PYTHAGOREAN")]
    Pythagorean,
    #[serde(rename = "ODE")]
    Ode,
    #[serde(rename = "RECURRENCE")]
    Recurrence,
    #[serde(rename = "DECAY")]
    Decay,
    #[serde(rename = "SINC_QUADRATURE")]
    SincQuadrature,
    #[serde(rename = "SINC_IDENTITY")]
    SincIdentity,
}

impl InequalityId {
    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::Main => "MAIN_1",
            InequalityId::Strict => "STRICT",
            InequalityId::General => "GENERAL_12",
            InequalityId::Cosh => "COSH_13",
            InequalityId::Monotone => "MONOTONE_15",
            InequalityId::Coeff => "COEFF",
            InequalityId::Gronwall => "GRONWALL_0",
            InequalityId::Pythagorean => "PYTHAGOREAN",
            InequalityId::Ode => "ODE",
            InequalityId::Recurrence => "RECURRENCE",
            InequalityId::Decay => "DECAY",
            InequalityId::SincQuadrature => "SINC_QUADRATURE",
            InequalityId::SincIdentity => "SINC_IDENTITY",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered `name=value` pairs sufficient to replay a check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(Vec<(String, String)>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.0.push((name.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub lo: Float,
    pub hi: Float,
    pub grid: String,
}

impl Domain {
    pub fn contains(&self, x: &Float) -> bool {
        *x >= self.lo && *x <= self.hi
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] {}", decimal(&self.lo), decimal(&self.hi), self.grid)
    }
}

/// Right-hand side of an inequality at one point: an exact rational when
/// one is available, otherwise an enclosure.
#[derive(Clone, Debug)]
pub struct BoundValue {
    pub approx: ApproxValue,
    pub exact: Option<ExactRational>,
}

impl BoundValue {
    pub fn exact(value: ExactRational, prec: u32) -> Self {
        BoundValue {
            approx: ApproxValue::from_rational(&value, prec),
            exact: Some(value),
        }
    }

    pub fn approx(approx: ApproxValue) -> Self {
        BoundValue { approx, exact: None }
    }
}

/// A quantity compared against a bound: `|value| <= bound` is being checked.
#[derive(Clone, Debug)]
pub struct Sample {
    pub x: Float,
    pub value: ApproxValue,
    pub exact: Option<ExactRational>,
}

impl Sample {
    pub fn magnitude(&self) -> ApproxValue {
        self.value.abs()
    }
}

/// `bound - |value|` at one point, with the combined error of both sides.
#[derive(Clone, Debug)]
pub struct PointSlack {
    pub x: Float,
    pub slack: Float,
    pub abs_error: Float,
    /// `|value| > bound` holds for every value consistent with the error bounds.
    pub violated: bool,
    pub bound: Float,
}

impl PointSlack {
    pub fn new(sample: &Sample, bound: &BoundValue) -> Self {
        let prec = sample.value.prec().max(bound.approx.prec()) + 8;
        if let (Some(v), Some(b)) = (&sample.exact, &bound.exact) {
            let diff = b - &v.abs();
            let slack = Float::with_val_round(prec, diff.as_rational(), Round::Down).0;
            return PointSlack {
                x: sample.x.clone(),
                slack,
                abs_error: crate::approx::err_zero(),
                violated: diff.is_negative(),
                bound: bound.approx.value.clone(),
            };
        }
        let magnitude = sample.magnitude();
        let slack = Float::with_val_round(prec, &bound.approx.value - &magnitude.value, Round::Down).0;
        let abs_error = err_add(&magnitude.abs_error, &bound.approx.abs_error);
        PointSlack {
            x: sample.x.clone(),
            violated: magnitude.lower() > bound.approx.upper(),
            slack,
            abs_error,
            bound: bound.approx.value.clone(),
        }
    }

    /// Check of a quantity whose true value is zero: violated only when the
    /// enclosure of `residual` excludes zero.
    pub fn residual<V: Scalar>(x: &Float, residual: &ApproxValue<V>) -> Self {
        let modulus = residual.value.abs_upper();
        let e = err_add(&residual.abs_error, &rounding_err(&modulus, Ordering::Greater));
        let sample = Sample {
            x: x.clone(),
            value: ApproxValue::new(modulus, e),
            exact: None,
        };
        PointSlack::new(&sample, &BoundValue::exact(ExactRational::zero(), 64))
    }

    /// `slack - abs_error`: positive when the inequality certifiably holds
    /// with room to spare.
    pub fn certified(&self) -> Float {
        Float::with_val_round(self.slack.prec(), &self.slack - &self.abs_error, Round::Down).0
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub inequality_id: InequalityId,
    pub params: Params,
    pub domain: Domain,
    /// Bound at the worst point.
    pub bound: Float,
    /// Smallest `bound - |value|` over every checked point.
    pub min_slack: Float,
    /// Combined error bound at the worst point.
    pub abs_error: Float,
    /// Smallest `bound - |value| - abs_error`; nonnegative when every point
    /// certifiably satisfies the inequality.
    pub certified_min_slack: Float,
    pub worst_point: Float,
    pub points_checked: usize,
    /// No point certifiably violates the inequality.
    pub passed: bool,
}

impl BoundReport {
    pub fn from_points(id: InequalityId, params: Params, domain: Domain, points: &[PointSlack]) -> Self {
        assert!(!points.is_empty(), "report needs at least one point");
        let worst = points
            .iter()
            .min_by(|a, b| a.slack.partial_cmp(&b.slack).expect("finite slack"))
            .expect("nonempty");
        let certified_min_slack = points
            .iter()
            .map(PointSlack::certified)
            .min_by(|a, b| a.partial_cmp(b).expect("finite slack"))
            .expect("nonempty");
        BoundReport {
            inequality_id: id,
            params,
            domain,
            bound: worst.bound.clone(),
            min_slack: worst.slack.clone(),
            abs_error: worst.abs_error.clone(),
            certified_min_slack,
            worst_point: worst.x.clone(),
            points_checked: points.len(),
            passed: points.iter().all(|p| !p.violated),
        }
    }

    pub fn to_record(&self) -> ReportRecord {
        ReportRecord {
            inequality_id: self.inequality_id.as_str().to_string(),
            params: self.params.to_string(),
            domain: self.domain.to_string(),
            bound: decimal(&self.bound),
            min_slack: decimal(&self.min_slack),
            abs_error: decimal(&self.abs_error),
            certified_min_slack: decimal(&self.certified_min_slack),
            worst_point: decimal(&self.worst_point),
            points_checked: self.points_checked,
            passed: self.passed,
        }
    }
}

/// Flat, string-valued form of a [`BoundReport`] shared by the CSV and JSON
/// writers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub inequality_id: String,
    pub params: String,
    pub domain: String,
    pub bound: String,
    pub min_slack: String,
    pub abs_error: String,
    pub certified_min_slack: String,
    pub worst_point: String,
    pub points_checked: usize,
    pub passed: bool,
}

/// Decimal string with [`DECIMAL_DIGITS`] significant digits.
pub fn decimal(value: &Float) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    value.to_string_radix(10, Some(DECIMAL_DIGITS))
}

/// Parse a decimal string written by [`decimal`].
pub fn parse_decimal(s: &str, prec: u32) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}
