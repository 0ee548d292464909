//! Digit statistics of the Schneider continued-fraction map on `pZ_p`.
//!
//! The Schneider map `T_p(x) = p^{a_1(x)}/x - b_1(x)` generates, for every
//! `x` in the maximal ideal `pZ_p`, a sequence of digit pairs `(a_i, b_i)`.
//! This crate computes the Hausdorff dimension of the level sets of the
//! asymptotic `q`-power means of the `a_i`, together with everything needed
//! to do so at desk scale:
//!
//! - [`padic`]: finite-precision arithmetic on `Z_p` with explicit trust
//!   accounting (valuation + unit-residue representation),
//! - [`schneider`]: digit extraction and continued-fraction reconstruction,
//!   plus an exact-rational iterator used as a test oracle,
//! - [`means`]: finite `q`-power means and their Birkhoff-potential form,
//! - [`specfun`]: real-order polylogarithm (three evaluation routes), its
//!   order-derivative at 0, Eulerian numbers, zeta, Gamma, Lambert W,
//! - [`spectrum`]: topological pressure, the Lyapunov spectrum, the
//!   `beta <-> lambda` correspondence and the dimension formulas,
//! - [`montecarlo`]: reproducible Haar-measure simulations validating the
//!   almost-everywhere constants.
//!
//! Real-valued routines are generic over the scalar type through the
//! [`Real`] trait; the crate-root aliases pin `f64` as the working type.

pub mod means;
pub mod montecarlo;
pub mod padic;
pub mod real;
pub mod schneider;
pub mod specfun;
pub mod spectrum;

pub use real::Real;

/// Default scalar type for the numeric stack.
pub type Scalar = f64;

/// `f64`-concrete spectrum point.
pub type SpectrumPoint64 = spectrum::SpectrumPoint<f64>;

/// `f64`-concrete polylogarithm result.
pub type PolylogResult64 = specfun::PolylogResult<f64>;
