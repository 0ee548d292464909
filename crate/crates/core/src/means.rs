//! Finite `q`-power means of digit sequences.
//!
//! `M_q(a_1..a_n) = ((1/n) sum a_i^q)^{1/q}` for `q != 0`, and the
//! geometric mean `exp((1/n) sum log a_i)` at `q = 0`. The Birkhoff form
//! rewrites the same quantity as an average of the potential
//! `(log psi)^q = (a log p)^q` (or `log log psi` at `q = 0`).

use thiserror::Error;

use crate::real::{ln_prime, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MeansError {
    #[error("empty digit sequence")]
    EmptySequence,
}

/// Below this |q| the geometric branch is used; the 1/q power is
/// catastrophically ill-conditioned closer to zero.
pub const Q_GEOMETRIC_THRESHOLD: f64 = 1e-10;

/// Exponent beyond which `sum a_i^q` is accumulated in log space.
const LOG_SPACE_EXPONENT: f64 = 600.0;

/// `M_q` of a digit sequence (all `a_i >= 1`).
pub fn power_mean<T: Real>(digits: &[u64], q: T) -> Result<T, MeansError> {
    if digits.is_empty() {
        return Err(MeansError::EmptySequence);
    }
    let n = T::of(digits.len() as f64);
    if q.abs() < T::of(Q_GEOMETRIC_THRESHOLD) {
        let log_sum: T = digits.iter().map(|&a| T::of(a as f64).ln()).sum();
        return Ok((log_sum / n).exp());
    }
    let max_log = digits
        .iter()
        .map(|&a| T::of(a as f64).ln())
        .fold(T::zero(), T::max);
    if q * max_log > T::of(LOG_SPACE_EXPONENT) {
        // log-sum-exp against the dominant digit
        let shifted: T = digits
            .iter()
            .map(|&a| (q * (T::of(a as f64).ln() - max_log)).exp())
            .sum();
        let log_sum = q * max_log + shifted.ln();
        return Ok(((log_sum - n.ln()) / q).exp());
    }
    let sum: T = digits.iter().map(|&a| T::of(a as f64).powf(q)).sum();
    Ok((sum / n).powf(q.recip()))
}

/// The Birkhoff-potential average: `(1/n) sum (a_i log p)^q` for `q != 0`,
/// `(1/n) sum log(a_i log p)` for `q = 0`.
pub fn birkhoff_potential_mean<T: Real>(digits: &[u64], q: T, p: u64) -> Result<T, MeansError> {
    if digits.is_empty() {
        return Err(MeansError::EmptySequence);
    }
    let n = T::of(digits.len() as f64);
    let lp: T = ln_prime(p);
    if q.abs() < T::of(Q_GEOMETRIC_THRESHOLD) {
        let sum: T = digits.iter().map(|&a| (T::of(a as f64) * lp).ln()).sum();
        Ok(sum / n)
    } else {
        let sum: T = digits.iter().map(|&a| (T::of(a as f64) * lp).powf(q)).sum();
        Ok(sum / n)
    }
}
