//! Floating-point scalar abstraction for the whole crate.
//!
//! Everything numeric is generic over a real scalar `T: Scalar`; complex
//! entries are `num_complex::Complex<T>`. `f64` is the working precision for
//! the laboratory (all documented tolerances assume it); `f32` instantiations
//! exist for cheap smoke checks and memory-bound experiments.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Real scalar usable as the base field of matrices, states and optimizers.
pub trait Scalar:
    Float + FloatConst + NumAssign + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`. Panics only if `T` cannot represent
/// finite doubles, which no `Scalar` implementor does.
#[inline]
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant must convert into the scalar type")
}

/// Complex zero.
#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
#[inline]
pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^{i phi}` as a complex scalar.
#[inline]
pub fn phase<T: Scalar>(phi: T) -> Complex<T> {
    Complex::from_polar(T::one(), phi)
}
