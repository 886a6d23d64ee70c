//! Scalar abstraction: every numeric routine is generic over [`Real`], with
//! `f64` for speed and [`BigFloat`] (~40 decimal digits) for campaigns that
//! need headroom against cancellation.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
pub use num_bigfloat::BigFloat;

pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Decimal digits carried by the representation.
    const DIGITS: u32;

    /// Unit roundoff of the representation.
    fn eps() -> Self;

    fn c(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite constant")
    }

    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer constant")
    }
}

impl Real for f64 {
    const DIGITS: u32 = 15;

    fn eps() -> Self {
        f64::EPSILON
    }
}

impl Real for BigFloat {
    const DIGITS: u32 = 39;

    // `Float::epsilon` on BigFloat reports the f32 value.
    fn eps() -> Self {
        Self::c(1e-39)
    }
}

/// `(-1)^n` as a scalar.
pub fn sign<T: Real>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
