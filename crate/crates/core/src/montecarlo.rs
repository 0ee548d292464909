//! Reproducible Monte Carlo validation of the Haar-typical digit means.
//!
//! Haar measure on `pZ_p` is uniform i.i.d. base-`p` digits (with digit 0
//! fixed to zero). Two samplers are provided: ORBIT mode draws a Haar
//! point and extracts digits by iterating the Schneider map in finite
//! precision, discarding untrusted tails; DIGIT_MODEL draws `(a, b)`
//! pairs directly from the law `P(a = k) = (p-1)/p^k`, `b` uniform on
//! `{1,...,p-1}`. Ergodicity only guarantees Birkhoff averages, not
//! independence, so the digit model is a validated approximation with the
//! orbit sampler as ground truth.
//!
//! Per-sample RNG streams are derived from `(seed, sample index)` and the
//! reduction order is fixed by sample index, so parallel and serial runs
//! produce bit-identical estimates.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::means::power_mean;
use crate::padic::PAdicInt;
use crate::schneider::digits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MonteCarloError {
    #[error("orbit precision too low: over 10% of samples kept fewer than half the requested digits")]
    InsufficientTrustedDigits,
    #[error("samples and orbit_length must be >= 1")]
    EmptyRun,
}

/// Which digit source an estimate used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMode {
    /// Schneider-orbit digits of Haar-random points.
    Orbit,
    /// Direct draws from the i.i.d. digit law.
    DigitModel,
}

/// An empirical estimate of an asymptotic power mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub q: f64,
    pub p: u64,
    pub mode: SamplerMode,
    pub samples: u64,
    pub orbit_length: u64,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Draw a Haar-random point of `pZ_p`: i.i.d. uniform base-`p` digits
/// from position 1, resampled in the (measure-zero) all-zero case.
pub fn sample_haar_point<R: Rng + ?Sized>(p: u64, precision: u32, rng: &mut R) -> PAdicInt {
    debug_assert!(precision >= 8);
    use num_traits::Zero;
    loop {
        // digits c_1..c_{precision-1}; the value is known mod p^precision
        let mut residue = BigUint::zero();
        for _ in 1..precision {
            residue = residue * p + rng.random_range(0..p);
        }
        residue *= p; // shift: c_0 = 0
        if !residue.is_zero() {
            return PAdicInt::canonicalize(residue, p, precision, None)
                .expect("nonzero residue canonicalizes");
        }
    }
}

/// Draw `n` digit pairs from the i.i.d. model: `a` by inverse CDF on
/// `P(a = k) = (p-1)/p^k`, `b` uniform on `{1,...,p-1}`.
pub fn sample_digit_model<R: Rng + ?Sized>(p: u64, n: u64, rng: &mut R) -> Vec<(u32, u64)> {
    let ln_p = (p as f64).ln();
    (0..n)
        .map(|_| {
            let w: f64 = 1.0 - rng.random::<f64>(); // in (0, 1]
            let a = (-(w.ln()) / ln_p).ceil().max(1.0) as u32;
            let b = rng.random_range(1..p);
            (a, b)
        })
        .collect()
}

/// Estimate the asymptotic `q`-power mean under Haar measure.
///
/// Returns the mean of per-sample power means and the standard error
/// across samples. ORBIT mode truncates each orbit at its trusted digit
/// count; `precision` is the trust budget per sampled point.
pub fn estimate_mean(
    q: f64,
    p: u64,
    mode: SamplerMode,
    samples: u64,
    orbit_length: u64,
    precision: u32,
    seed: u64,
) -> Result<MonteCarloEstimate, MonteCarloError> {
    if samples == 0 || orbit_length == 0 {
        return Err(MonteCarloError::EmptyRun);
    }
    // (per-sample mean, trusted digit count), indexed by sample
    let per_sample: Vec<(Option<f64>, u64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i + 1);
            let a_digits: Vec<u64> = match mode {
                SamplerMode::DigitModel => sample_digit_model(p, orbit_length, &mut rng)
                    .iter()
                    .map(|&(a, _)| a as u64)
                    .collect(),
                SamplerMode::Orbit => {
                    let x = sample_haar_point(p, precision, &mut rng);
                    let seq = digits(&x, orbit_length as usize)
                        .expect("Haar samples lie in the domain");
                    seq.a_digits()
                }
            };
            let n = a_digits.len() as u64;
            (power_mean(&a_digits, q).ok(), n)
        })
        .collect();

    let shortfall = per_sample
        .iter()
        .filter(|&&(_, n)| n < orbit_length.div_ceil(2))
        .count() as u64;
    if mode == SamplerMode::Orbit && shortfall * 10 > samples {
        return Err(MonteCarloError::InsufficientTrustedDigits);
    }

    let means: Vec<f64> = per_sample.iter().filter_map(|&(m, _)| m).collect();
    if means.is_empty() {
        return Err(MonteCarloError::InsufficientTrustedDigits);
    }
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let stderr = if means.len() > 1 {
        let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        q,
        p,
        mode,
        samples,
        orbit_length,
        mean,
        stderr,
        seed,
    })
}
