//! Scalar abstraction shared by the numerical kernel.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumAssignOps};

/// Floating point type the finite element kernel is written against.
///
/// Implemented for `f32` and `f64`. The physical layers above the kernel
/// work in `f64` only, since products like `k_B^2` underflow `f32`.
pub trait Scalar: Float + FloatConst + NumAssignOps + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Float + FloatConst + NumAssignOps + Debug + Display + Default + Send + Sync + 'static {}
