//! The Schneider map `T_p(x) = p^{a_1}/x - b_1` on `pZ_p` and its digits.
//!
//! Digit extraction runs in [`PAdicInt`] arithmetic with explicit trust
//! accounting: each step inverts the unit at the full remaining precision
//! and the cancellation detected while canonicalizing the difference is
//! charged against the budget. A finite expansion is declared only when an
//! exact rational witness certifies the subtraction is exactly zero;
//! otherwise running out of digits is reported as precision exhaustion.
//! The [`exact`] submodule provides the same iteration over arbitrary-size
//! rationals, used as an independent oracle in tests and validation.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::padic::{
    self, invert_unit, pow_p, rational_residue, sub_mod, PAdicError, PAdicInt,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchneiderError {
    #[error("orbit reached exact zero; expansion is finite")]
    FiniteOrbit,
    #[error("not enough trusted digits to continue the orbit")]
    PrecisionExhausted,
    #[error("point has valuation 0, not in the domain pZ_p")]
    NotInDomain,
    #[error(transparent)]
    PAdic(#[from] PAdicError),
}

/// How a digit sequence ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Stopped at the requested length; more digits exist.
    Open,
    /// The orbit hit exact zero: the expansion is finite.
    FiniteExpansion,
    /// The precision budget ran out before the requested length.
    PrecisionExhausted,
}

/// Extracted Schneider digit pairs `(a_i, b_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSequence {
    pub prime: u64,
    pub pairs: Vec<(u32, u64)>,
    pub terminated: Termination,
    /// Pairs `[0, trusted_count)` are guaranteed exact. Pairs beyond this
    /// count are never stored.
    pub trusted_count: usize,
}

impl DigitSequence {
    /// The `a_i` digits alone (the `b_i` carry no metric information).
    pub fn a_digits(&self) -> Vec<u64> {
        self.pairs.iter().map(|&(a, _)| a as u64).collect()
    }
}

/// Result of one application of `T_p`.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub a: u32,
    pub b: u64,
    pub next: PAdicInt,
    /// Trusted digits consumed by this step (valuation plus cancellation).
    pub digits_consumed: u32,
}

/// One Schneider step: `a = v_p(x)`, `b = p^a/x mod p`, `next = p^a/x - b`.
pub fn schneider_step(x: &PAdicInt) -> Result<StepOutcome, SchneiderError> {
    if x.is_zero() {
        return Err(SchneiderError::FiniteOrbit);
    }
    let p = x.prime();
    let a = x.valuation().expect("nonzero");
    if a == 0 {
        return Err(SchneiderError::NotInDomain);
    }
    let trusted = x.trusted().expect("nonzero");
    // p^a / x is exactly the inverse of the unit part of x.
    let inv = invert_unit(x.unit().expect("nonzero"), p, trusted)?;
    let b = (&inv % p).to_u64().expect("residue mod p fits");
    debug_assert!(b >= 1 && b < p, "inverse of a unit is a unit mod p");
    let residue = sub_mod(&inv, &BigUint::from(b), p, trusted);

    let exact_next = x.exact().map(|ex| {
        let pa = BigRational::from_integer(pow_p(p, a).into());
        pa / ex - BigRational::from_integer(b.into())
    });
    let next = PAdicInt::canonicalize(residue, p, trusted, exact_next)
        .map_err(|e| match e {
            PAdicError::PrecisionExhausted => SchneiderError::PrecisionExhausted,
            other => SchneiderError::PAdic(other),
        })?;
    let digits_consumed = trusted - next.trusted().unwrap_or(trusted);
    Ok(StepOutcome {
        a,
        b,
        next,
        digits_consumed,
    })
}

/// Iterate the map up to `max_pairs` times, collecting digit pairs.
pub fn digits(x: &PAdicInt, max_pairs: usize) -> Result<DigitSequence, SchneiderError> {
    if !x.is_zero() && x.valuation() == Some(0) {
        return Err(SchneiderError::NotInDomain);
    }
    let mut pairs = Vec::new();
    let mut terminated = Termination::Open;
    let mut current = x.clone();
    while pairs.len() < max_pairs {
        if current.is_zero() {
            terminated = Termination::FiniteExpansion;
            break;
        }
        match schneider_step(&current) {
            Ok(step) => {
                pairs.push((step.a, step.b));
                current = step.next;
            }
            Err(SchneiderError::PrecisionExhausted) => {
                terminated = Termination::PrecisionExhausted;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let trusted_count = pairs.len();
    Ok(DigitSequence {
        prime: x.prime(),
        pairs,
        terminated,
        trusted_count,
    })
}

/// Evaluate the finite tower
/// `p^{a_1}/(b_1 + p^{a_2}/(b_2 + ... + p^{a_n}/(b_n + tail)))`
/// innermost-out in `PAdicInt` arithmetic at (up to) `precision` digits.
pub fn reconstruct(
    seq: &DigitSequence,
    tail: &PAdicInt,
    precision: u32,
) -> Result<PAdicInt, SchneiderError> {
    let p = seq.prime;
    let mut acc = tail.clone();
    for &(a, b) in seq.pairs.iter().rev() {
        // b + acc is a unit: b in {1,...,p-1} and acc has valuation >= 1.
        let k = acc.known_exponent().unwrap_or(precision).min(precision);
        if k == 0 {
            return Err(SchneiderError::PrecisionExhausted);
        }
        let den = (acc.residue(k).expect("k within trust") + BigUint::from(b)) % pow_p(p, k);
        let inv = invert_unit(&den, p, k).map_err(SchneiderError::PAdic)?;
        let residue = (pow_p(p, a.min(k)) * inv) % pow_p(p, k);
        let exact = acc.exact().map(|ex| {
            let pa = BigRational::from_integer(pow_p(p, a).into());
            pa / (ex + BigRational::from_integer(b.into()))
        });
        acc = PAdicInt::canonicalize(residue, p, k, exact).map_err(|e| match e {
            PAdicError::PrecisionExhausted => SchneiderError::PrecisionExhausted,
            other => SchneiderError::PAdic(other),
        })?;
    }
    Ok(acc)
}

/// Schneider iteration over exact rationals. Arbitrary-size integer
/// arithmetic throughout, never floating point; serves as the ground-truth
/// oracle for the finite-precision digit stream.
pub mod exact {
    use super::*;
    use crate::padic::rational_valuation;

    /// One exact step. `None` when `x` is zero (finite expansion).
    pub fn schneider_step(x: &BigRational, p: u64) -> Result<Option<(u32, u64, BigRational)>, SchneiderError> {
        if x.is_zero() {
            return Ok(None);
        }
        let v = rational_valuation(x, p).expect("nonzero");
        if v <= 0 {
            return Err(SchneiderError::NotInDomain);
        }
        let a = v as u32;
        let inv_x = BigRational::from_integer(pow_p(p, a).into()) / x;
        let b_residue = rational_residue(&inv_x, p, 1).map_err(SchneiderError::PAdic)?;
        let b = b_residue.to_u64().expect("mod p fits");
        debug_assert!(b >= 1 && b < p);
        let next = inv_x - BigRational::from_integer(b.into());
        Ok(Some((a, b, next)))
    }

    /// Exact digit pairs, with a flag marking a finite expansion.
    pub fn digits(
        x: &BigRational,
        p: u64,
        max_pairs: usize,
    ) -> Result<(Vec<(u32, u64)>, bool), SchneiderError> {
        let mut pairs = Vec::new();
        let mut current = x.clone();
        while pairs.len() < max_pairs {
            match schneider_step(&current, p)? {
                None => return Ok((pairs, true)),
                Some((a, b, next)) => {
                    pairs.push((a, b));
                    current = next;
                }
            }
        }
        Ok((pairs, current.is_zero()))
    }
}

// Re-exported so callers iterating orbits can check domain membership of
// rational seeds without reaching into padic.
pub use padic::in_p_zp;
