use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the numerical routines are generic over.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Exact for `f64`, rounded for `f32`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must be representable")
    }

    #[inline]
    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("count must be representable")
    }

    #[inline]
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer must be representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Error-free product `a*b = hi + lo`.
#[inline]
pub(crate) fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let hi = a * b;
    (hi, a.mul_add(b, -hi))
}

/// Error-free sum `a+b = hi + lo` (Knuth).
#[inline]
pub(crate) fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_free_transforms_are_exact() {
        let (hi, lo) = two_prod(0.1f64, 0.3f64);
        assert_eq!(hi, 0.1 * 0.3);
        assert!(lo != 0.0);
        let (s, e) = two_sum(1.0f64, 1e-17);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-17);
    }
}
