//! Cross-module property sweeps: optimizer-versus-grid agreement, unitary
//! invariance of certified minima, the inclusion order of the three
//! curvature cones, and proptest invariants of the tensor algebra.

use kahler_core::cones::{self, brute, CertifyOptions, Condition, Status};
use kahler_core::models;
use kahler_core::rng;
use kahler_core::tensor::{KahlerCurvatureTensor, C64};
use kahler_core::variations;
use proptest::prelude::*;

fn certify_min(t: &KahlerCurvatureTensor, c: Condition, seed: u64) -> (f64, Status) {
    let res = cones::certify(
        t,
        c,
        &CertifyOptions {
            seed,
            ..CertifyOptions::default()
        },
    )
    .unwrap();
    (res.min_value, res.status)
}

#[test]
fn ohb_certifier_agrees_with_quasi_random_grid_at_n2() {
    let mut r = rng::seeded(2024);
    for case in 0..20 {
        let t = models::random_tensor(&mut r, 2, 1.0);
        let grid = brute::ohb_grid_min_n2(&t, 1_000_000).unwrap();
        let (min, _) = certify_min(&t, Condition::Ohb, case);
        assert!(
            (min - grid).abs() <= 1e-4,
            "case {case}: optimizer {min:.8e} vs grid {grid:.8e}"
        );
        // The optimizer evaluates on exact frames, so it can only dip below
        // the grid by grid resolution, never above it.
        assert!(min <= grid + 1e-9, "case {case}");
    }
}

#[test]
fn certified_minima_are_unitarily_invariant() {
    let mut r = rng::seeded(31415);
    for n in [2usize, 3] {
        for case in 0..4 {
            let t = models::random_tensor(&mut r, n, 1.0);
            let u = rng::random_unitary(&mut r, n);
            let tc = t.conjugate_frame(&u).unwrap();
            for cond in [Condition::Ohb, Condition::HolSec, Condition::Isotropic] {
                let (m1, _) = certify_min(&t, cond, 9000 + case);
                let (m2, _) = certify_min(&tc, cond, 9100 + case);
                assert!(
                    (m1 - m2).abs() <= 1e-6,
                    "n={n} case={case} {cond:?}: {m1:.9e} vs {m2:.9e}"
                );
            }
        }
    }
}

/// Shift a random draw toward Fubini–Study until the whole-bisectional
/// condition certifies; on unit pairs the shift contributes at least its
/// coefficient, so bisection terminates.
fn hb_cone_sample(seed: u64, n: usize) -> KahlerCurvatureTensor {
    let mut r = rng::seeded(seed);
    let raw = models::random_tensor(&mut r, n, 1.0);
    let raw = raw.scaled(1.0 / raw.frobenius_norm().max(1e-300));
    let fs = models::fubini_study(n, 2.0);
    let probe = CertifyOptions {
        starts: 8,
        max_iters: 250,
        tolerance: 1e-9,
        seed: seed ^ 0xb1b,
    };
    let ok = |t: &KahlerCurvatureTensor| {
        let res = cones::certify(t, Condition::Hb, &probe).unwrap();
        res.min_value >= 0.0 && res.status == Status::CertifiedNonnegative
    };
    let mut hi = 0.5;
    while !ok(&raw.add_scaled(&fs, hi).unwrap()) {
        hi *= 2.0;
        assert!(hi < 1e6, "shift failed to certify");
    }
    let mut lo = 0.0;
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if ok(&raw.add_scaled(&fs, mid).unwrap()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    raw.add_scaled(&fs, hi + 1e-4).unwrap()
}

/// Nonnegative combinations of rotated products of nonnegatively curved
/// model factors: each summand has nonnegative isotropic curvature, and the
/// condition is linear in the tensor.
fn isotropic_cone_sample(seed: u64, n: usize) -> KahlerCurvatureTensor {
    let mut r = rng::seeded(seed);
    let mut acc = KahlerCurvatureTensor::zeros(n);
    let summands = 1 + (seed % 2) as usize;
    for _ in 0..summands {
        let factor = if n >= 2 && rand::Rng::gen_bool(&mut r, 0.5) {
            let k = rand::Rng::gen_range(&mut r, 1..n);
            let h1: f64 = rand::Rng::gen_range(&mut r, 1.0..4.0);
            let h2: f64 = rand::Rng::gen_range(&mut r, 1.0..4.0);
            models::product(
                &models::fubini_study(k, h1),
                &models::fubini_study(n - k, h2),
            )
        } else {
            let h: f64 = rand::Rng::gen_range(&mut r, 1.0..4.0);
            models::fubini_study(n, h)
        };
        let u = rng::random_unitary(&mut r, n);
        let rotated = factor.conjugate_frame(&u).unwrap();
        let weight: f64 = rand::Rng::gen_range(&mut r, 0.2..1.0);
        acc = acc.add_scaled(&rotated, weight).unwrap();
    }
    acc
}

#[test]
fn cone_ordering_isotropic_and_hb_imply_ohb() {
    for case in 0..50u64 {
        let n = 2 + (case % 2) as usize;

        let hb = hb_cone_sample(case, n);
        let (hb_min, hb_status) = certify_min(&hb, Condition::Hb, 100 + case);
        assert!(
            hb_min >= -1e-9 && hb_status == Status::CertifiedNonnegative,
            "case {case}"
        );
        let (ohb_min, ohb_status) = certify_min(&hb, Condition::Ohb, 200 + case);
        assert!(
            ohb_min >= -1e-9 && ohb_status == Status::CertifiedNonnegative,
            "hb case {case}: ohb min {ohb_min:.3e}"
        );

        let iso = isotropic_cone_sample(case, n);
        let (iso_min, iso_status) = certify_min(&iso, Condition::Isotropic, 300 + case);
        assert!(
            iso_min >= -1e-8 && iso_status == Status::CertifiedNonnegative,
            "iso case {case}: iso min {iso_min:.3e} {iso_status:?}"
        );
        let (ohb_min, _) = certify_min(&iso, Condition::Ohb, 400 + case);
        assert!(ohb_min >= -1e-8, "iso case {case}: ohb min {ohb_min:.3e}");
    }
}

#[test]
fn certified_cone_samples_pass_the_derived_inequalities() {
    for case in 0..30u64 {
        let n = 2 + (case % 3) as usize;
        let t = models::sample_cone(case, n).unwrap();
        let report = cones::derived_inequalities(&t, 1e-8);
        assert!(
            report.all_nonnegative(),
            "case {case}: {:?}",
            report.violations
        );
    }
}

#[test]
fn certified_products_have_no_negative_cross_factor_pair() {
    // For a product inside the orthogonal-bisectional cone, every pairwise
    // minimum holomorphic-sectional sum across factors is nonnegative.
    let mut r = rng::seeded(4242);
    let mut checked = 0;
    for _ in 0..20 {
        let h: f64 = rand::Rng::gen_range(&mut r, 1.0..4.0);
        let kappa: f64 = rand::Rng::gen_range(&mut r, -h..2.0);
        let p = models::product(&models::surface(kappa), &models::fubini_study(2, h));
        let cert = cones::certify(
            &p,
            Condition::Ohb,
            &CertifyOptions {
                seed: 17,
                ..CertifyOptions::default()
            },
        )
        .unwrap();
        if cert.status != Status::CertifiedNonnegative {
            continue;
        }
        checked += 1;
        let s = kahler_core::decomposition::detect_blocks(&p, 1e-8).unwrap();
        let report = cones::cross_factor_bound(
            &p,
            &s,
            &CertifyOptions {
                starts: 16,
                ..CertifyOptions::default()
            },
        )
        .unwrap();
        assert!(!report.any_flagged(), "kappa={kappa}, h={h}: {report:?}");
    }
    assert!(checked >= 10, "only {checked} products certified");
}

#[test]
fn rotation_propagation_holds_on_random_cross_block_products() {
    let mut r = rng::seeded(777);
    for case in 0..25 {
        let n1 = 1 + (case % 2);
        let n2 = 1 + (case % 3);
        let a = models::random_tensor(&mut r, n1, 1.0);
        let b = models::random_tensor(&mut r, n2, 1.0);
        let p = models::product(&a, &b);
        // Pick one index in each factor.
        let (alpha, beta) = (0usize, n1);
        for theta in [0.3f64, std::f64::consts::FRAC_PI_4, 1.1] {
            let run = variations::rotation_propagation(&p, alpha, beta, theta, 1e-12).unwrap();
            assert!(
                run.residual <= 1e-10,
                "case {case} theta {theta}: {:.3e}",
                run.residual
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bisectional_phase_invariance_and_scaling(seed in 0u64..1000, n in 1usize..4, s in 0.1f64..2.0, theta in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng::seeded(seed);
        let t = models::random_tensor(&mut r, n, 1.0);
        let x = rng::random_unit_vector(&mut r, n);
        let y = rng::random_unit_vector(&mut r, n);
        let base = t.bisectional(&x, &y).unwrap();
        let xs = &x * C64::new(0.0, theta).exp();
        prop_assert!((t.bisectional(&xs, &y).unwrap() - base).abs() < 1e-10);
        let scaled = t.bisectional(&(&x * C64::new(s, 0.0)), &y).unwrap();
        prop_assert!((scaled - s * s * base).abs() < 1e-9 * (1.0 + base.abs()));
    }

    #[test]
    fn conjugation_composes_and_preserves_scalar(seed in 0u64..1000, n in 2usize..4) {
        let mut r = rng::seeded(seed);
        let t = models::random_tensor(&mut r, n, 1.0);
        let u = rng::random_unitary(&mut r, n);
        let v = rng::random_unitary(&mut r, n);
        let a = t.conjugate_frame(&u).unwrap().conjugate_frame(&v).unwrap();
        let b = t.conjugate_frame(&(&v * &u)).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries().iter()) {
            prop_assert!((x - y).norm() < 1e-9);
        }
        prop_assert!((t.scalar() - a.scalar()).abs() < 1e-9);
    }

    #[test]
    fn serialization_round_trips_bit_for_bit(seed in 0u64..1000, n in 1usize..4) {
        let mut r = rng::seeded(seed);
        let t = models::random_tensor(&mut r, n, 1.0);
        let json = kahler_core::io::tensor_to_json(&t).unwrap();
        let back = kahler_core::io::tensor_from_json(&json).unwrap();
        prop_assert_eq!(back.tensor.entries(), t.entries());
    }
}
