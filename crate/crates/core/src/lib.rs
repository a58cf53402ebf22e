//! Certified evaluation of `Cos z`, the entire function equal to
//! `cos(sqrt x)` for `x > 0` and `cosh(sqrt |x|)` for `x <= 0`, and of all
//! its derivatives, together with numerical certification of the derivative
//! bounds `|Cos^(n)(x)| <= n!/(2n)!` and their relatives.

pub mod approx;
pub mod bounds;
pub mod config;
pub mod error;
pub mod rational;
pub mod recurrence;
pub mod report;
pub mod series;
pub mod sinc;

pub use approx::{ApproxComplex, ApproxValue};
pub use config::EvalConfig;
pub use error::{CosError, Result};
pub use rational::ExactRational;
