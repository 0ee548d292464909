//! Real-order polylogarithm and its supporting special functions.
//!
//! `Li_s(z) = sum_{n>=1} z^n/n^s` is evaluated by one of three routes:
//! the direct series, the Eulerian-number closed form at nonpositive
//! integer order, and the Gamma/zeta expansion
//! `Li_s(z) = Gamma(1-s)(-log z)^{s-1} + sum_k zeta(s-k)(log z)^k/k!`
//! near `z = 1`. The order-derivative at `s = 0` (needed for geometric
//! means) gets the analogous pair of routes. Riemann zeta uses the
//! alternating-series acceleration of Cohen, Rodriguez Villegas and
//! Zagier for positive arguments and the functional equation below zero;
//! Gamma is Lanczos; Lambert W (both real branches) is Halley iteration.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("argument outside domain: {0}")]
    DomainError(&'static str),
    #[error("evaluation at a pole: {0}")]
    PoleError(&'static str),
    #[error("expansion terms stopped decreasing before reaching tolerance")]
    DivergentTail,
}

/// Evaluation route taken for a polylogarithm value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DirectSeries,
    EulerianClosedForm,
    GammaZetaExpansion,
}

/// Polylogarithm value with provenance and a truncation-error bound.
#[derive(Debug, Clone, Copy)]
pub struct PolylogResult<T> {
    pub value: T,
    pub method: Method,
    /// Upper bound on the absolute truncation error of the chosen method.
    pub error_estimate: T,
}

/// Crossover between the direct series and the Gamma/zeta expansion.
pub const Z_SWITCH: f64 = 0.5;

/// Hard cap on Gamma/zeta expansion terms; the k-series is asymptotic.
const EXPANSION_MAX_TERMS: usize = 60;

// ---------------------------------------------------------------------------
// Eulerian numbers
// ---------------------------------------------------------------------------

/// Row `A(m, 0..)` of the Eulerian triangle.
pub fn eulerian_row(m: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for mm in 1..=m {
        let prev = row;
        let len = mm as usize;
        let mut next = vec![BigUint::zero(); len];
        for (k, slot) in next.iter_mut().enumerate() {
            let a = prev.get(k).cloned().unwrap_or_else(BigUint::zero) * (k as u64 + 1);
            let b = if k == 0 {
                BigUint::zero()
            } else {
                prev.get(k - 1).cloned().unwrap_or_else(BigUint::zero) * (mm as u64 - k as u64)
            };
            *slot = a + b;
        }
        row = next;
    }
    row
}

/// Eulerian number `A(m, k)`: permutations of `{1..m}` with `k` ascents.
/// Zero outside `0 <= k <= max(m-1, 0)`.
pub fn eulerian(m: u32, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let row = eulerian_row(m);
    row.get(k as usize).cloned().unwrap_or_else(BigUint::zero)
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments (Lanczos, g = 7).
pub fn gamma<T: Real>(x: T) -> Result<T, SpecFunError> {
    if x <= T::zero() {
        return Err(SpecFunError::DomainError("gamma requires x > 0"));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked<T: Real>(x: T) -> T {
    if x < T::of(0.5) {
        // reflection; 1 - x > 0.5 so the recursion terminates
        let pi = T::PI();
        pi / ((pi * x).sin() * gamma_unchecked(T::one() - x))
    } else {
        let x = x - T::one();
        let mut acc = T::of(LANCZOS_COEFFS[0]);
        for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += T::of(c) / (x + T::of(i as f64));
        }
        let t = x + T::of(7.5);
        (T::of(2.0) * T::PI()).sqrt() * t.powf(x + T::of(0.5)) * (-t).exp() * acc
    }
}

// ---------------------------------------------------------------------------
// Riemann zeta
// ---------------------------------------------------------------------------

/// Alternating-series acceleration for `eta(s) = sum (-1)^k (k+1)^{-s}`.
fn eta_accelerated<T: Real>(s: T) -> T {
    let n = 60;
    let mut d = (T::of(3.0) + T::of(8.0).sqrt()).powi(n);
    d = (d + d.recip()) * T::of(0.5);
    let mut b = -T::one();
    let mut c = -d;
    let mut sum = T::zero();
    for k in 0..n {
        c = b - c;
        sum += c * T::of((k + 1) as f64).powf(-s);
        let kf = T::of(k as f64);
        let nf = T::of(n as f64);
        b = b * (kf + nf) * (kf - nf) / ((kf + T::of(0.5)) * (kf + T::one()));
    }
    sum / d
}

/// Riemann zeta for real `s != 1`.
pub fn zeta<T: Real>(s: T) -> Result<T, SpecFunError> {
    if s == T::one() {
        return Err(SpecFunError::PoleError("zeta has a pole at s = 1"));
    }
    if s == T::zero() {
        return Ok(T::of(-0.5));
    }
    if s > T::zero() {
        let denom = T::one() - T::of(2.0).powf(T::one() - s);
        Ok(eta_accelerated(s) / denom)
    } else {
        // functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
        let pi = T::PI();
        let z1 = zeta(T::one() - s)?;
        Ok(T::of(2.0).powf(s)
            * pi.powf(s - T::one())
            * (pi * s * T::of(0.5)).sin()
            * gamma_unchecked(T::one() - s)
            * z1)
    }
}

/// Derivative of zeta by central differences (step 1e-5), with the exact
/// shortcut `zeta'(0) = -log(2 pi)/2`.
pub fn zeta_prime<T: Real>(s: T) -> Result<T, SpecFunError> {
    let h = T::of(1e-5);
    if s == T::zero() {
        return Ok(-(T::of(2.0) * T::PI()).ln() * T::of(0.5));
    }
    if (s - T::one()).abs() <= h {
        return Err(SpecFunError::PoleError("zeta' undefined at s = 1"));
    }
    Ok((zeta(s + h)? - zeta(s - h)?) / (T::of(2.0) * h))
}

// ---------------------------------------------------------------------------
// Polylogarithm
// ---------------------------------------------------------------------------

fn as_small_integer<T: Real>(s: T) -> Option<i32> {
    let r = s.round();
    if (s - r).abs() < T::of(1e-12) && r.abs() < T::of(1e9) {
        r.to_i32()
    } else {
        None
    }
}

/// Direct series `sum z^n / n^s` with the stated tail bound.
fn polylog_series<T: Real>(s: T, z: T) -> PolylogResult<T> {
    let mut sum = T::zero();
    let mut zn = T::one();
    let mut prev_term = T::infinity();
    let mut n = 0u64;
    let tol = T::of(1e-16);
    loop {
        n += 1;
        zn *= z;
        let term = zn * T::of(n as f64).powf(-s);
        sum += term;
        // tail bound z^{n+1} max(1, (n+1)^{-s}) / (1-z), valid once the
        // term sequence is decreasing
        let next_mag = zn * z * T::of((n + 1) as f64).powf(-s).max(T::one());
        let bound = next_mag / (T::one() - z);
        if term.abs() <= prev_term.abs() && bound <= tol * (T::one() + sum.abs()) {
            return PolylogResult {
                value: sum,
                method: Method::DirectSeries,
                error_estimate: bound,
            };
        }
        prev_term = term;
        if n > 5_000_000 {
            return PolylogResult {
                value: sum,
                method: Method::DirectSeries,
                error_estimate: bound,
            };
        }
    }
}

/// Eulerian closed form `Li_{-m}(z) = z/(1-z)^{m+1} sum A(m,k) z^k`.
fn polylog_eulerian<T: Real>(m: u32, z: T) -> PolylogResult<T> {
    let row = eulerian_row(m);
    let mut poly = T::zero();
    let mut zk = T::one();
    for a in &row {
        poly += T::of(a.to_f64().expect("Eulerian number fits in f64 range")) * zk;
        zk *= z;
    }
    let value = z / (T::one() - z).powi(m as i32 + 1) * poly;
    PolylogResult {
        value,
        method: Method::EulerianClosedForm,
        error_estimate: T::epsilon() * value.abs(),
    }
}

/// Gamma/zeta expansion near `z = 1`, for non-integer `s < 1` territory.
fn polylog_expansion<T: Real>(s: T, z: T) -> Result<PolylogResult<T>, SpecFunError> {
    let ln_z = z.ln(); // negative
    let front = gamma_unchecked(T::one() - s) * (-ln_z).powf(s - T::one());
    let mut sum = T::zero();
    let mut factorial_pow = T::one(); // (ln z)^k / k!
    let mut prev_mag = T::infinity();
    let mut strikes = 0;
    let tol = T::of(1e-16);
    for k in 0..=EXPANSION_MAX_TERMS {
        let term = zeta(s - T::of(k as f64))? * factorial_pow;
        sum += term;
        let mag = term.abs();
        if mag <= tol * (T::one() + (front + sum).abs()) {
            return Ok(PolylogResult {
                value: front + sum,
                method: Method::GammaZetaExpansion,
                error_estimate: mag + T::epsilon() * (front + sum).abs(),
            });
        }
        if mag > prev_mag {
            strikes += 1;
            if strikes >= 3 {
                return Err(SpecFunError::DivergentTail);
            }
        } else {
            strikes = 0;
        }
        prev_mag = mag;
        factorial_pow = factorial_pow * ln_z / T::of((k + 1) as f64);
    }
    Err(SpecFunError::DivergentTail)
}

/// `Li_s(z)` for real order `s` and `z` in `[0, 1)` (`z = 1` allowed for
/// `s > 1`, where it equals `zeta(s)`).
pub fn polylog<T: Real>(s: T, z: T) -> Result<PolylogResult<T>, SpecFunError> {
    if z < T::zero() || z > T::one() {
        return Err(SpecFunError::DomainError("polylog requires 0 <= z < 1"));
    }
    if z == T::one() {
        if s > T::one() {
            return Ok(PolylogResult {
                value: zeta(s)?,
                method: Method::DirectSeries,
                error_estimate: T::epsilon(),
            });
        }
        return Err(SpecFunError::DomainError("z = 1 requires s > 1"));
    }
    if z == T::zero() {
        return Ok(PolylogResult {
            value: T::zero(),
            method: Method::DirectSeries,
            error_estimate: T::zero(),
        });
    }
    match as_small_integer(s) {
        Some(m) if m <= 0 => Ok(polylog_eulerian((-m) as u32, z)),
        Some(1) => {
            // Li_1(z) = -log(1-z), exactly
            let value = -(-z).ln_1p();
            Ok(PolylogResult {
                value,
                method: Method::DirectSeries,
                error_estimate: T::epsilon() * value.abs(),
            })
        }
        // positive integer order: Gamma(1-s) is singular, the series always
        // converges on [0,1)
        Some(_) => Ok(polylog_series(s, z)),
        None => {
            if z <= T::of(Z_SWITCH) {
                Ok(polylog_series(s, z))
            } else {
                polylog_expansion(s, z)
            }
        }
    }
}

/// Direct series for `d/ds Li_s(z)|_{s=0} = -sum_{n>=2} z^n log n`.
fn polylog_ds0_series<T: Real>(z: T) -> PolylogResult<T> {
    let mut sum = T::zero();
    let mut zn = z;
    let mut n = 1u64;
    let tol = T::of(1e-16);
    loop {
        n += 1;
        zn *= z;
        sum -= zn * T::of(n as f64).ln();
        let one_minus = T::one() - z;
        let bound = zn * z * T::of((n + 1) as f64).ln() / (one_minus * one_minus);
        if bound <= tol * (T::one() + sum.abs()) || n > 5_000_000 {
            return PolylogResult {
                value: sum,
                method: Method::DirectSeries,
                error_estimate: bound,
            };
        }
    }
}

/// Order-derivative of the Gamma/zeta expansion at `s = 0`:
/// `(gamma + log(-log z))/(-log z) + sum_k zeta'(-k)(log z)^k/k!`.
fn polylog_ds0_expansion<T: Real>(z: T) -> Result<PolylogResult<T>, SpecFunError> {
    let ln_z = z.ln();
    let big_l = -ln_z; // positive
    let front = (T::euler_gamma() + big_l.ln()) / big_l;
    let mut sum = T::zero();
    let mut factorial_pow = T::one();
    let mut prev_mag = T::infinity();
    let mut strikes = 0;
    let tol = T::of(1e-15);
    for k in 0..=EXPANSION_MAX_TERMS {
        let term = zeta_prime(-T::of(k as f64))? * factorial_pow;
        sum += term;
        let mag = term.abs();
        if mag <= tol * (T::one() + (front + sum).abs()) {
            return Ok(PolylogResult {
                value: front + sum,
                method: Method::GammaZetaExpansion,
                error_estimate: mag + T::epsilon() * (front + sum).abs(),
            });
        }
        if mag > prev_mag {
            strikes += 1;
            if strikes >= 3 {
                return Err(SpecFunError::DivergentTail);
            }
        } else {
            strikes = 0;
        }
        prev_mag = mag;
        factorial_pow = factorial_pow * ln_z / T::of((k + 1) as f64);
    }
    Err(SpecFunError::DivergentTail)
}

/// `d/ds Li_s(z)` at `s = 0`, for `z` in `[0, 1)`.
pub fn polylog_ds0<T: Real>(z: T) -> Result<PolylogResult<T>, SpecFunError> {
    if z < T::zero() || z >= T::one() {
        return Err(SpecFunError::DomainError("polylog_ds0 requires 0 <= z < 1"));
    }
    if z == T::zero() {
        return Ok(PolylogResult {
            value: T::zero(),
            method: Method::DirectSeries,
            error_estimate: T::zero(),
        });
    }
    if z <= T::of(Z_SWITCH) {
        Ok(polylog_ds0_series(z))
    } else {
        polylog_ds0_expansion(z)
    }
}

// ---------------------------------------------------------------------------
// Lambert W
// ---------------------------------------------------------------------------

/// Real branch selector for Lambert W.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `W_0`, defined on `[-1/e, inf)`, with `W >= -1`.
    Principal,
    /// `W_{-1}`, defined on `[-1/e, 0)`, with `W <= -1`.
    MinusOne,
}

/// Lambert W: solves `w e^w = x` on the requested real branch.
pub fn lambert_w<T: Real>(branch: Branch, x: T) -> Result<T, SpecFunError> {
    let neg_inv_e = -T::E().recip();
    if x < neg_inv_e {
        return Err(SpecFunError::DomainError("lambert_w requires x >= -1/e"));
    }
    if x == neg_inv_e {
        return Ok(-T::one());
    }
    let w0 = match branch {
        Branch::Principal => {
            if x < T::of(-0.25) {
                // branch-point series with p = +sqrt(2(1 + e x))
                let p = (T::of(2.0) * (T::one() + T::E() * x)).sqrt();
                -T::one() + p - p * p / T::of(3.0)
            } else if x < T::E() {
                (T::one() + x).ln()
            } else {
                x.ln() - x.ln().ln()
            }
        }
        Branch::MinusOne => {
            if x >= T::zero() {
                return Err(SpecFunError::DomainError("W_{-1} requires x < 0"));
            }
            if x < T::of(-0.25) {
                let p = -(T::of(2.0) * (T::one() + T::E() * x)).sqrt();
                -T::one() + p - p * p / T::of(3.0)
            } else {
                let l1 = (-x).ln();
                l1 - (-l1).ln()
            }
        }
    };
    let mut w = w0;
    for _ in 0..200 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + T::one();
        let denom = ew * wp1 - (w + T::of(2.0)) * f / (T::of(2.0) * wp1);
        if denom == T::zero() {
            break;
        }
        let dw = f / denom;
        w -= dw;
        if dw.abs() <= T::of(1e-16) * (T::one() + w.abs()) {
            break;
        }
    }
    Ok(w)
}
