//! Numeric scalar abstraction for the LP and branch-and-bound engines.
//!
//! The simplex tableau is written once against [`Scalar`] and instantiated
//! for `f64`, `f32` and exact [`BigRational`] arithmetic. Floating-point
//! types carry tolerances; the exact type uses zero for all of them, which
//! makes every comparison exact and every pivot sequence reproducible.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `true` when arithmetic is exact and all tolerances are zero.
    const EXACT: bool;

    fn from_ratio(r: Rational64) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(Rational64::from_integer(v))
    }

    fn to_f64(&self) -> f64;

    fn floor(&self) -> Self;

    /// Magnitudes at or below this are treated as zero in tableau columns.
    fn zero_tol() -> Self;

    /// Optimality tolerance for reduced costs.
    fn cost_tol() -> Self;

    /// Primal feasibility tolerance.
    fn feas_tol() -> Self;

    /// A pivot element smaller than this aborts with a numerical failure.
    fn pivot_tol() -> Self;

    /// Distance from the nearest integer still accepted as integral.
    fn int_tol() -> Self;

    /// Flush values that are pure round-off back to zero.
    #[inline]
    fn chop(&mut self) {}

    fn ceil(&self) -> Self {
        let f = self.floor();
        if &f == self {
            f
        } else {
            f + Self::one()
        }
    }

    fn round_nearest(&self) -> Self {
        let half = Self::from_ratio(Rational64::new(1, 2));
        (self.clone() + half).floor()
    }

    fn is_near_zero(&self) -> bool {
        self.abs() <= Self::zero_tol()
    }
}

macro_rules! float_scalar {
    ($t:ty, $zero:expr, $cost:expr, $feas:expr, $pivot:expr, $int:expr, $chop:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            #[inline]
            fn from_ratio(r: Rational64) -> Self {
                (*r.numer() as f64 / *r.denom() as f64) as $t
            }
            #[inline]
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            #[inline]
            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }
            #[inline]
            fn zero_tol() -> Self {
                $zero
            }
            #[inline]
            fn cost_tol() -> Self {
                $cost
            }
            #[inline]
            fn feas_tol() -> Self {
                $feas
            }
            #[inline]
            fn pivot_tol() -> Self {
                $pivot
            }
            #[inline]
            fn int_tol() -> Self {
                $int
            }
            #[inline]
            fn chop(&mut self) {
                if self.abs() < $chop {
                    *self = 0.0;
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9, 1e-9, 1e-9, 1e-12, 1e-6, 1e-13);
float_scalar!(f32, 1e-5, 1e-5, 1e-4, 1e-7, 1e-4, 1e-6);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(r: Rational64) -> Self {
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn zero_tol() -> Self {
        Self::zero()
    }

    fn cost_tol() -> Self {
        Self::zero()
    }

    fn feas_tol() -> Self {
        Self::zero()
    }

    fn pivot_tol() -> Self {
        Self::zero()
    }

    fn int_tol() -> Self {
        Self::zero()
    }

    fn is_near_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Exact rational coefficient type used in model data.
pub type Rational = Rational64;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_helpers() {
        assert_eq!(Scalar::ceil(&2.3f64), 3.0);
        assert_eq!(Scalar::ceil(&-2.3f64), -2.0);
        assert_eq!((2.5f64).round_nearest(), 3.0);
        let third = BigRational::from_ratio(Rational64::new(7, 3));
        assert_eq!(Scalar::ceil(&third), BigRational::from_int(3));
        assert_eq!(Scalar::floor(&third), BigRational::from_int(2));
    }

    #[test]
    fn chop_flushes_roundoff() {
        let mut v = 1e-15f64;
        v.chop();
        assert_eq!(v, 0.0);
        let mut w = 1e-3f64;
        w.chop();
        assert_eq!(w, 1e-3);
    }
}
