//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All tolerances in the crate are quoted for `f64`. [`tol`] rescales them by
//! the ratio of machine epsilons so that the same code paths remain meaningful
//! in single precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Rescale an `f64` tolerance to the precision of `T`.
#[inline]
pub fn tol<T: Real>(base: f64) -> T {
    let ratio = T::epsilon().to_f64_lossy() / f64::EPSILON;
    T::lit(base * ratio.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_scales_with_precision() {
        assert_eq!(tol::<f64>(1e-12), 1e-12);
        let t32: f32 = tol(1e-12);
        assert!(t32 > 1e-5 && t32 < 1e-3);
    }
}
