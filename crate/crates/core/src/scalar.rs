//! Floating-point scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the library is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Half-width of the window around a removable singularity inside which the
    /// series expansion replaces the direct formula.
    const SERIES_RADIUS: f64;

    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for finite literals with `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SERIES_RADIUS: f64 = 1e-4;
}

// f32 cancellation near the singular points is ~eps/x^2, so the window is wider.
impl Scalar for f32 {
    const SERIES_RADIUS: f64 = 3e-2;
}
