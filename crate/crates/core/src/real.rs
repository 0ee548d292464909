//! Scalar abstraction for the real-valued part of the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the means/specfun/spectrum stack.
///
/// Implemented for `f32` and `f64` via the blanket impl below. The stated
/// accuracy targets (1e-12 and tighter) are only reachable with `f64`;
/// `f32` instantiations are supported but correspondingly coarser.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used for tabulated constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }

    /// Euler-Mascheroni constant.
    fn euler_gamma() -> Self {
        Self::of(0.577_215_664_901_532_9)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Natural log of a prime, as the scalar type.
pub fn ln_prime<T: Real>(p: u64) -> T {
    T::of(p as f64).ln()
}
