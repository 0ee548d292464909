//! Finite-precision arithmetic on the `p`-adic integers `Z_p`.
//!
//! A nonzero element is stored as `p^v * u` where `u` is a unit residue
//! known modulo `p^trusted`; the represented value is therefore known
//! modulo `p^(v + trusted)`. Trust never increases under operations, and
//! zero detection at finite precision is impossible: a residue whose
//! trusted digits are all zero canonicalizes to [`PAdicError::PrecisionExhausted`]
//! unless an exact rational witness certifies true zero.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Default number of trusted base-`p` digits for newly constructed values.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PAdicError {
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("value has negative p-adic valuation, not in Z_p")]
    NotPAdicInteger,
    #[error("residue divisible by p={0} has no inverse")]
    NotAUnit(u64),
    #[error("all trusted digits cancelled; cannot distinguish from zero")]
    PrecisionExhausted,
    #[error("denominator is zero")]
    ZeroDenominator,
}

/// Trial-division primality check; inputs are small CLI-scale primes.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `p^k` as a big integer.
pub fn pow_p(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Canonical inverse of a unit residue modulo `p^k` (least nonnegative).
pub fn invert_unit(u: &BigUint, p: u64, modulus_exponent: u32) -> Result<BigUint, PAdicError> {
    let u0 = u % p;
    if u0.is_zero() {
        return Err(PAdicError::NotAUnit(p));
    }
    // inverse mod p by word-size extended Euclid, then Hensel-lift it:
    // x -> x(2 - ux) doubles the number of correct digits, so the cost is
    // a handful of multiplications instead of a big-integer gcd.
    let mut x = BigUint::from(inv_mod_prime(u0.to_u64().expect("residue mod p"), p));
    let mut k = 1u32;
    let mut m = BigUint::from(p);
    let two = BigUint::from(2u32);
    while k < modulus_exponent {
        if 2 * k >= modulus_exponent {
            k = modulus_exponent;
            m = pow_p(p, k);
        } else {
            k *= 2;
            m = &m * &m;
        }
        let ux = (u % &m) * &x % &m;
        let factor = if ux <= two { &two - &ux } else { &m + &two - &ux };
        x = x * factor % &m;
    }
    Ok(x)
}

/// Inverse of `u` modulo the prime `p`, `0 < u < p`.
fn inv_mod_prime(u: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, u as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// `(x - y) mod p^k`, least nonnegative.
pub fn sub_mod(x: &BigUint, y: &BigUint, p: u64, modulus_exponent: u32) -> BigUint {
    let m = pow_p(p, modulus_exponent);
    let (x, y) = (x % &m, y % &m);
    if x >= y {
        x - y
    } else {
        &m + x - y
    }
}

/// `(x * y) mod p^k`.
pub fn mul_mod(x: &BigUint, y: &BigUint, p: u64, modulus_exponent: u32) -> BigUint {
    (x * y) % pow_p(p, modulus_exponent)
}

#[derive(Debug, Clone)]
enum Repr {
    Zero,
    Nonzero {
        valuation: u32,
        unit: BigUint,
        trusted: u32,
    },
}

/// A finite-precision element of `Z_p`.
///
/// Values are immutable after construction; every operation is a pure
/// function, so sharing across threads is safe. Values built from exact
/// rationals carry the rational along, which is what lets orbit code
/// declare a true finite expansion instead of precision exhaustion.
#[derive(Debug, Clone)]
pub struct PAdicInt {
    prime: u64,
    repr: Repr,
    exact: Option<BigRational>,
}

impl PAdicInt {
    /// The exact zero of `Z_p`.
    pub fn zero(p: u64) -> Self {
        PAdicInt {
            prime: p,
            repr: Repr::Zero,
            exact: Some(BigRational::zero()),
        }
    }

    /// Construct `num/den` as an element of `Z_p` known to `precision`
    /// trusted unit digits.
    pub fn from_rational(num: i64, den: i64, p: u64, precision: u32) -> Result<Self, PAdicError> {
        if !is_prime(p) {
            return Err(PAdicError::InvalidPrime(p));
        }
        if den == 0 {
            return Err(PAdicError::ZeroDenominator);
        }
        if precision == 0 {
            return Err(PAdicError::PrecisionExhausted);
        }
        if num == 0 {
            return Ok(PAdicInt::zero(p));
        }
        let exact = BigRational::new(BigInt::from(num), BigInt::from(den));
        let (v_num, num_red) = strip_p(BigInt::from(num), p);
        let (v_den, den_red) = strip_p(BigInt::from(den), p);
        if v_num < v_den {
            return Err(PAdicError::NotPAdicInteger);
        }
        let valuation = v_num - v_den;
        let m = BigInt::from(pow_p(p, precision));
        let den_unit = den_red.mod_floor(&m).to_biguint().expect("nonnegative");
        let inv = invert_unit(&den_unit, p, precision)?;
        let unit = (num_red.mod_floor(&m) * BigInt::from(inv))
            .mod_floor(&m)
            .to_biguint()
            .expect("nonnegative");
        Ok(PAdicInt {
            prime: p,
            repr: Repr::Nonzero {
                valuation,
                unit,
                trusted: precision,
            },
            exact: Some(exact),
        })
    }

    /// Canonicalize a residue known modulo `p^modulus_exponent` into
    /// valuation/unit form. An exact rational witness, when available,
    /// resolves the all-digits-zero case to true zero.
    pub fn canonicalize(
        residue: BigUint,
        p: u64,
        modulus_exponent: u32,
        exact: Option<BigRational>,
    ) -> Result<Self, PAdicError> {
        let m = pow_p(p, modulus_exponent);
        let residue = residue % &m;
        if let Some(x) = &exact {
            if x.is_zero() {
                debug_assert!(residue.is_zero());
                return Ok(PAdicInt::zero(p));
            }
        }
        if residue.is_zero() {
            return Err(PAdicError::PrecisionExhausted);
        }
        let big_p = BigUint::from(p);
        let mut unit = residue;
        let mut valuation = 0u32;
        while (&unit % &big_p).is_zero() {
            unit /= &big_p;
            valuation += 1;
        }
        debug_assert!(valuation < modulus_exponent);
        Ok(PAdicInt {
            prime: p,
            repr: Repr::Nonzero {
                valuation,
                unit,
                trusted: modulus_exponent - valuation,
            },
            exact,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// `v_p(x)`; `None` encodes the infinite valuation of zero.
    pub fn valuation(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    /// Unit residue `u` with `x = p^v u`; `None` for zero.
    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Number of trusted base-`p` digits of the unit; `None` for zero
    /// (which is exact).
    pub fn trusted(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { trusted, .. } => Some(*trusted),
        }
    }

    /// The value is known modulo `p^known_exponent()`; `None` means exact.
    pub fn known_exponent(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero {
                valuation, trusted, ..
            } => Some(valuation + trusted),
        }
    }

    /// Exact rational witness, when the value was built from one.
    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// `x mod p^k`, least nonnegative. Returns `None` if `k` exceeds the
    /// trusted range.
    pub fn residue(&self, k: u32) -> Option<BigUint> {
        match &self.repr {
            Repr::Zero => Some(BigUint::zero()),
            Repr::Nonzero {
                valuation,
                unit,
                trusted,
            } => {
                if k > valuation + trusted {
                    return None;
                }
                Some((pow_p(self.prime, *valuation) * unit) % pow_p(self.prime, k))
            }
        }
    }

    /// Congruence modulo `p^k` (both residues must be trusted to `k`).
    pub fn congruent_mod(&self, other: &Self, k: u32) -> bool {
        self.prime == other.prime
            && match (self.residue(k), other.residue(k)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}

/// Equality of canonical forms at the smaller trusted precision.
impl PartialEq for PAdicInt {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (Repr::Zero, _) | (_, Repr::Zero) => false,
            _ => {
                let k = self
                    .known_exponent()
                    .unwrap()
                    .min(other.known_exponent().unwrap());
                self.residue(k) == other.residue(k)
            }
        }
    }
}

fn strip_p(x: BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!x.is_zero());
    let big_p = BigInt::from(p);
    let mut v = 0u32;
    let mut x = x;
    while (&x % &big_p).is_zero() {
        x /= &big_p;
        v += 1;
    }
    (v, x)
}

/// `v_p` of a nonzero rational; negative when `p` divides the denominator.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (vn, _) = strip_p(x.numer().clone(), p);
    let (vd, _) = strip_p(x.denom().clone(), p);
    Some(vn as i64 - vd as i64)
}

/// Residue of a rational with nonnegative valuation, modulo `p^k`.
pub fn rational_residue(x: &BigRational, p: u64, k: u32) -> Result<BigUint, PAdicError> {
    if x.is_zero() {
        return Ok(BigUint::zero());
    }
    if rational_valuation(x, p).unwrap() < 0 {
        return Err(PAdicError::NotPAdicInteger);
    }
    let m = BigInt::from(pow_p(p, k));
    let (vd, den_red) = strip_p(x.denom().clone(), p);
    debug_assert_eq!(vd, 0, "valuation >= 0 means the reduced denominator is a unit");
    let den_unit = den_red.mod_floor(&m).to_biguint().expect("nonnegative");
    let inv = invert_unit(&den_unit, p, k)?;
    let r = (x.numer().mod_floor(&m) * BigInt::from(inv)).mod_floor(&m);
    Ok(r.to_biguint().expect("nonnegative"))
}

/// Sign-aware helper: `true` if the rational is a nonzero element of `pZ_p`.
pub fn in_p_zp(x: &BigRational, p: u64) -> bool {
    match rational_valuation(x, p) {
        None => true,
        Some(v) => v >= 1,
    }
}

#[allow(unused_imports)]
use num_traits::Num;
