//! Scalar abstraction for all score math.
//!
//! Retrieval scores, evaluation metrics, and tagger weights are generic over
//! [`Scalar`] so the same kernels run at `f32` or `f64`. The crate root
//! exports [`crate::Score`] (`f64`) as the default instantiation.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used for scores and metrics: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossless widening to `f64` (both supported types embed into `f64`).
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("finite scalar converts to f64")
    }

    /// Conversion from `f64`, used for parameter defaults and counts.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("f64 converts to scalar")
    }

    /// Conversion from a usize count.
    fn from_count(value: usize) -> Self {
        Self::from_usize(value).expect("count converts to scalar")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halve<S: Scalar>(x: S) -> S {
        x / S::from_count(2)
    }

    #[test]
    fn works_for_both_widths() {
        assert_eq!(halve(1.0f32), 0.5f32);
        assert_eq!(halve(1.0f64), 0.5f64);
        assert_eq!(0.25f32.to_f64_lossy(), 0.25f64);
        assert_eq!(f32::from_f64_lossy(0.25), 0.25f32);
    }
}
