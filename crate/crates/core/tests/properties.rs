//! Randomized invariants for the digit pipeline and the mean algebra.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pzp_core::means::{birkhoff_potential_mean, power_mean};
use pzp_core::montecarlo::sample_haar_point;
use pzp_core::padic::{invert_unit, pow_p, rational_residue, PAdicInt};
use pzp_core::schneider::{self, digits, reconstruct};

fn small_primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

proptest! {
    /// from_rational matches direct modular evaluation of n/d.
    #[test]
    fn rational_residues_round_trip(
        p in small_primes(),
        n in 1i64..10_000,
        d in 1i64..10_000,
    ) {
        prop_assume!(d % p as i64 != 0);
        let num = n * p as i64; // force membership in pZ_p
        prop_assume!(num.checked_mul(1).is_some());
        let x = PAdicInt::from_rational(num, d, p, 64).unwrap();
        let expected = rational_residue(
            &BigRational::new(num.into(), d.into()),
            p,
            32,
        )
        .unwrap();
        prop_assert_eq!(x.residue(32).unwrap(), expected);
    }

    /// invert_unit really is the inverse mod p^k.
    #[test]
    fn invert_unit_is_inverse(
        p in small_primes(),
        u in 1u64..1_000_000,
        k in 1u32..24,
    ) {
        prop_assume!(u % p != 0);
        let m = pow_p(p, k);
        let u = BigUint::from(u) % &m;
        let inv = invert_unit(&u, p, k).unwrap();
        prop_assert_eq!((u * inv) % m, BigUint::one());
    }

    /// Digit extraction then tower reconstruction returns to the seed,
    /// for Haar-random points at several primes.
    #[test]
    fn haar_points_round_trip(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample_haar_point(p, 96, &mut rng);
        let seq = digits(&x, 20).unwrap();
        prop_assume!(!seq.pairs.is_empty());
        // the tower below the last extracted digit is the orbit remainder
        let mut tail = x.clone();
        for _ in 0..seq.pairs.len() {
            tail = schneider::schneider_step(&tail).unwrap().next;
        }
        let back = reconstruct(&seq, &tail, 96).unwrap();
        let k = back
            .known_exponent()
            .unwrap()
            .min(x.known_exponent().unwrap());
        prop_assert!(back.congruent_mod(&x, k));
    }

    /// Finite-precision digits agree with the exact-rational oracle on
    /// the trusted prefix.
    #[test]
    fn padic_digits_match_exact_oracle(
        p in small_primes(),
        n in 1i64..500,
        d in 1i64..500,
    ) {
        prop_assume!(d % p as i64 != 0);
        let num = n * p as i64;
        let x = PAdicInt::from_rational(num, d, p, 128).unwrap();
        let seq = digits(&x, 24).unwrap();
        let rational = BigRational::new(num.into(), d.into());
        let (exact_pairs, _finite) = schneider::exact::digits(&rational, p, 24).unwrap();
        let trusted = seq.trusted_count.min(exact_pairs.len());
        prop_assert_eq!(&seq.pairs[..trusted], &exact_pairs[..trusted]);
    }

    /// Power means are nondecreasing in q.
    #[test]
    fn power_mean_monotone_in_q(
        digits in prop::collection::vec(1u64..50, 1..40),
        q1 in -5.0f64..5.0,
        dq in 0.01f64..5.0,
    ) {
        let m1: f64 = power_mean(&digits, q1).unwrap();
        let m2: f64 = power_mean(&digits, q1 + dq).unwrap();
        prop_assert!(m2 >= m1 - 1e-9 * m1.abs(), "M_{}={} > M_{}={}", q1, m1, q1 + dq, m2);
    }

    /// The Birkhoff potential mean is the q-th power of the digit mean
    /// scaled by (log p)^q, and log-additive at q = 0.
    #[test]
    fn birkhoff_identity(
        digits in prop::collection::vec(1u64..50, 1..40),
        q in -4.0f64..4.0,
        p in small_primes(),
    ) {
        let lp = (p as f64).ln();
        let b: f64 = birkhoff_potential_mean(&digits, q, p).unwrap();
        let m: f64 = power_mean(&digits, q).unwrap();
        if q.abs() < 1e-10 {
            prop_assert!((b - (lp.ln() + m.ln())).abs() < 1e-12 * (1.0 + b.abs()));
        } else {
            let expected = lp.powf(q) * m.powf(q);
            prop_assert!((b - expected).abs() < 1e-10 * (1.0 + expected.abs()));
        }
    }

    /// The geometric mean is the two-sided limit of M_q at q = 0.
    #[test]
    fn power_mean_continuous_at_zero(
        digits in prop::collection::vec(1u64..50, 1..40),
    ) {
        let g: f64 = power_mean(&digits, 0.0).unwrap();
        let above: f64 = power_mean(&digits, 1e-9).unwrap();
        let below: f64 = power_mean(&digits, -1e-9).unwrap();
        prop_assert!((above - g).abs() < 1e-6 * g);
        prop_assert!((below - g).abs() < 1e-6 * g);
    }
}

/// Trust can only shrink along an orbit.
#[test]
fn trust_is_monotone_along_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    for &p in &[2u64, 3, 7] {
        let mut x = sample_haar_point(p, 64, &mut rng);
        let mut budget = x.known_exponent().unwrap();
        for _ in 0..12 {
            match schneider::schneider_step(&x) {
                Ok(step) => {
                    let next_budget = step.next.known_exponent().unwrap_or(0);
                    assert!(next_budget < budget, "trust must strictly decrease");
                    budget = next_budget;
                    x = step.next;
                }
                Err(_) => break,
            }
        }
    }
}
