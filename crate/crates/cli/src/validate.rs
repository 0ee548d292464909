//! `pzp validate`: the self-check suite.
//!
//! Each check prints one JSON line `{"check": ..., "pass": ..., "detail": ...}`
//! so the output is grep- and jq-friendly. Returns the number of failures.

use serde_json::json;

use pzp_core::montecarlo::{estimate_mean, SamplerMode};
use pzp_core::padic::PAdicInt;
use pzp_core::schneider;
use pzp_core::spectrum;

fn report(check: &str, pass: bool, detail: String) -> u32 {
    println!(
        "{}",
        json!({ "check": check, "pass": pass, "detail": detail })
    );
    u32::from(!pass)
}

/// Legendre-transform oracle vs the closed-form dimension on a log grid.
fn oracle_equivalence() -> u32 {
    let mut worst: f64 = 0.0;
    for &p in &[2u64, 3, 5, 101] {
        let lp = (p as f64).ln();
        for i in 0..50 {
            let lam = (1.001 * lp) * (1000.0 / (1.001 * lp)).powf(i as f64 / 49.0);
            let closed = spectrum::lyapunov_dimension(lam, p).unwrap();
            let oracle = spectrum::legendre_oracle(lam, p).unwrap();
            worst = worst.max((closed - oracle).abs());
        }
    }
    report(
        "oracle_equivalence",
        worst < 1e-8,
        format!("max |closed - legendre| = {worst:.3e}"),
    )
}

/// solve_lambda then mean_at_lambda must invert each other.
fn inversion_round_trip() -> u32 {
    let mut worst: f64 = 0.0;
    for &p in &[2u64, 3, 5] {
        for &q in &[-1.0f64, 0.0, 1.0, 2.0] {
            for &beta in &[1.1f64, 2.0, 5.0, 20.0] {
                let lam = spectrum::solve_lambda(q, beta, p).unwrap();
                let back = spectrum::mean_at_lambda(q, lam, p).unwrap();
                worst = worst.max(((back - beta) / beta).abs());
            }
        }
    }
    report(
        "inversion_round_trip",
        worst < 1e-9,
        format!("max relative error = {worst:.3e}"),
    )
}

/// Closed forms for q = -1, 1, 2 against the generic solver.
fn closed_form_specializations() -> u32 {
    let mut worst: f64 = 0.0;
    for &p in &[2u64, 3, 5] {
        let lp = (p as f64).ln();
        for &beta in &[1.1f64, 2.0, 5.0, 20.0] {
            let harm = spectrum::lambda_harmonic_closed_form(beta, p).unwrap();
            worst = worst.max((spectrum::solve_lambda(-1.0, beta, p).unwrap() - harm).abs() / harm);
            let arith = beta * lp;
            worst = worst.max((spectrum::solve_lambda(1.0, beta, p).unwrap() - arith).abs() / arith);
            let quad = spectrum::lambda_quadratic_closed_form(beta, p).unwrap();
            worst = worst.max((spectrum::solve_lambda(2.0, beta, p).unwrap() - quad).abs() / quad);
        }
    }
    report(
        "closed_form_specializations",
        worst < 1e-9,
        format!("max relative error = {worst:.3e}"),
    )
}

/// Digit extraction followed by reconstruction is the identity.
fn schneider_round_trip() -> u32 {
    let cases = [(2u64, 2i64, 3i64), (2, 6, 7), (3, 3, 5), (5, 5, 7), (7, 7, 11)];
    let mut failures = Vec::new();
    for &(p, num, den) in &cases {
        let x = PAdicInt::from_rational(num, den, p, 128).unwrap();
        let seq = schneider::digits(&x, 40).unwrap();
        let tail = PAdicInt::zero(p);
        let back = schneider::reconstruct(&seq, &tail, 128).unwrap();
        if back != x {
            failures.push(format!("{num}/{den} at p={p}"));
        }
    }
    report(
        "schneider_round_trip",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} rationals reconstructed", cases.len())
        } else {
            failures.join("; ")
        },
    )
}

/// Haar-typical means must sit on the dimension-1 level set.
fn haar_dimension_one() -> u32 {
    let mut worst: f64 = 0.0;
    for &p in &[2u64, 3, 5, 7] {
        for &q in &[-1.0f64, 0.0, 1.0, 2.0] {
            let mean = spectrum::haar_mean(q, p).unwrap();
            let pt = spectrum::dimension(q, mean, p).unwrap();
            worst = worst.max((pt.dimension - 1.0).abs());
        }
    }
    report(
        "haar_dimension_one",
        worst < 1e-8,
        format!("max |dim - 1| = {worst:.3e}"),
    )
}

/// beta(lambda) is strictly increasing in lambda for each q.
fn beta_monotonicity() -> u32 {
    let mut ok = true;
    for &p in &[2u64, 5] {
        let lp = (p as f64).ln();
        for &q in &[-1.0f64, 0.0, 1.0, 2.0] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..40 {
                let lam = (1.01 * lp) * (500.0 / (1.01 * lp)).powf(i as f64 / 39.0);
                let beta = spectrum::mean_at_lambda(q, lam, p).unwrap();
                if beta <= prev {
                    ok = false;
                }
                prev = beta;
            }
        }
    }
    report(
        "beta_monotonicity",
        ok,
        "beta strictly increasing on the lambda grid".into(),
    )
}

/// ORBIT and DIGIT_MODEL samplers must agree within combined error bars.
fn sampler_mode_agreement() -> u32 {
    let mut worst: f64 = 0.0;
    for &p in &[2u64, 5] {
        for &q in &[1.0f64, 2.0] {
            let orbit = estimate_mean(q, p, SamplerMode::Orbit, 300, 120, 384, 42).unwrap();
            let model = estimate_mean(q, p, SamplerMode::DigitModel, 2000, 120, 384, 42).unwrap();
            let sigma = orbit.stderr.hypot(model.stderr);
            worst = worst.max((orbit.mean - model.mean).abs() / sigma);
        }
    }
    report(
        "sampler_mode_agreement",
        worst < 4.0,
        format!("max |orbit - model| = {worst:.2} combined sigma"),
    )
}

pub fn run_all() -> u32 {
    let failures = oracle_equivalence()
        + inversion_round_trip()
        + closed_form_specializations()
        + schneider_round_trip()
        + haar_dimension_one()
        + beta_monotonicity()
        + sampler_mode_agreement();
    println!(
        "{}",
        json!({ "check": "summary", "pass": failures == 0, "detail": format!("{failures} failure(s)") })
    );
    failures
}
