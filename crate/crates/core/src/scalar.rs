//! The scalar abstraction shared by every numerical routine in the crate.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating point scalar: `f32` or `f64`.
///
/// Everything in the crate is written against this trait; the concrete
/// aliases at the crate root fix it to `f64`, which is what the certified
/// routines and the command-line front end use.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + FftNum + Default + fmt::Display + fmt::LowerExp
{
    /// Converts an `f64` literal. Panics only for values that the target type
    /// cannot represent at all, which never happens for the constants used here.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn two_pi() -> Self {
        Self::TAU()
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
