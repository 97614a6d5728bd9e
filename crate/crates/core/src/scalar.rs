//! Numeric scalar abstraction shared by the metrics and the extractive scorer.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A value type that can hold a ratio of counts.
///
/// Implemented for `f32`, `f64` and `Rational64`; the rational form makes
/// ROUGE precision/recall/F1 exact.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Rational64 {}

/// Scalars that additionally support `sqrt` and friends (tf-idf cosine).
pub trait RealScalar: Scalar + Float {}

impl<T: Scalar + Float> RealScalar for T {}

/// `a / b`, or zero when `b` is zero.
pub(crate) fn ratio_or_zero<T: Scalar>(a: T, b: T) -> T {
    if b.is_zero() {
        T::zero()
    } else {
        a / b
    }
}
