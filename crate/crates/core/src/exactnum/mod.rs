//! Dyadic rationals and outward-rounded interval arithmetic.

mod dyadic;
mod interval;
pub mod transcendental;

pub use dyadic::{Dyadic, Round};
pub use interval::{Interval, IntervalBox, Precision, Trichotomy};
