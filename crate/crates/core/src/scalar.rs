use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numeric kernel is generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Lossy for `f32`.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("every f64 converts to a float type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to a float type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn is_finite<T: Scalar>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
