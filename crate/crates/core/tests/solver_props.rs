mod common;

use bidisk_pick::agler::{
    bisect_constant, pick_feasible_at, verify_certificate, BisectOptions, BisectTarget, CertificateKind, PickProblem,
    SolverOptions, VerifyTolerances,
};
use bidisk_pick::analysis::{gleason, one_variable_pick_constant};
use bidisk_pick::kernels::{admissible_batch, PointSequence};
use bidisk_pick::realization::{build_interpolant, random_bidisk_samples, RealizationOptions};
use bidisk_pick::Complex64;
use common::*;
use proptest::prelude::*;

fn pick_instance(seed: u64, n: usize) -> (PointSequence, Vec<Complex64>) {
    let mut r = rng(seed);
    let seq = separated_sequence(&mut r, n, 0.9, 0.15);
    let w = (0..n).map(|_| disk(&mut r, 1.0)).collect();
    (seq, w)
}

fn m_star(seq: &PointSequence, w: Vec<Complex64>) -> (f64, PickProblem, bidisk_pick::agler::BisectResult) {
    let prob = PickProblem::scalar(seq.clone(), w).unwrap();
    let t = BisectTarget::Pick(prob.clone());
    let (lo, hi) = t.default_bracket();
    let r = bisect_constant(&t, lo, hi, &BisectOptions::default()).unwrap();
    (r.level, prob, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn feasibility_is_monotone_in_the_level(seed in any::<u64>(), n in 2usize..=5) {
        let (seq, w) = pick_instance(seed, n);
        let (m, prob, _) = m_star(&seq, w);
        let opts = SolverOptions::default();
        for f in [1.01, 1.5, 3.0] {
            prop_assert!(pick_feasible_at(&prob, m * f, &opts).unwrap().is_feasible());
        }
        let below = m - 10.0 * BisectOptions::default().bis_tol;
        if below > 0.0 {
            prop_assert!(!pick_feasible_at(&prob, below, &opts).unwrap().is_feasible());
        }
    }

    #[test]
    fn unimodular_rotation_of_targets_keeps_the_constant(seed in any::<u64>(), n in 2usize..=5, theta in 0.0f64..std::f64::consts::TAU) {
        let (seq, w) = pick_instance(seed, n);
        let rot: Vec<Complex64> = w.iter().map(|x| x * Complex64::from_polar(1.0, theta)).collect();
        let (a, ..) = m_star(&seq, w);
        let (b, ..) = m_star(&seq, rot);
        prop_assert!((a - b).abs() <= 2.0 * BisectOptions::default().bis_tol, "{a} vs {b}");
    }

    #[test]
    fn constant_is_homogeneous_in_the_targets(seed in any::<u64>(), n in 2usize..=5, c in 0.2f64..3.0) {
        let (seq, w) = pick_instance(seed, n);
        let scaled: Vec<Complex64> = w.iter().map(|x| x * c).collect();
        let (a, ..) = m_star(&seq, w);
        let (b, ..) = m_star(&seq, scaled);
        prop_assert!((c * a - b).abs() <= 2e-3 * (1.0 + c), "{} vs {b}", c * a);
    }

    #[test]
    fn certificates_are_affine_exact_and_pass_kernel_checks(seed in any::<u64>(), n in 2usize..=5) {
        let (seq, w) = pick_instance(seed, n);
        let (m, prob, r) = m_star(&seq, w);
        let p = prob.problem_at(m).unwrap();
        prop_assert!(decomposition_residual(&seq, p.lhs(), &r.certificate.gamma, &r.certificate.delta) <= 1e-7);
        let kernels = admissible_batch(&seq, 10, seed).unwrap();
        let rep = verify_certificate(&p, &r.certificate, CertificateKind::Pick, &VerifyTolerances::default(), &kernels).unwrap();
        prop_assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn interpolants_are_contractive_and_hit_the_targets(seed in any::<u64>(), n in 1usize..=5) {
        let (seq, w) = pick_instance(seed, n);
        let (m, prob, r) = m_star(&seq, w.clone());
        let f = build_interpolant(&prob, m, &r.certificate, &RealizationOptions::default()).unwrap();
        for (l, target) in seq.points().iter().zip(&w) {
            prop_assert!((f.eval_scalar(l).unwrap() - target).norm() < 1e-5);
        }
        for l in random_bidisk_samples(500, seed) {
            prop_assert!(f.eval_unscaled(&l).unwrap().operator_norm().unwrap() <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn slice_problems_reduce_to_the_disk(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let z = separated_disk_points(&mut r, n, 0.9, 0.1);
        let w: Vec<Complex64> = (0..n).map(|_| disk(&mut r, 1.0)).collect();
        let oracle = disk_pick_oracle(&z, &w);
        prop_assert!((one_variable_pick_constant(&z, &w).unwrap() - oracle).abs() < 1e-8);
        let (m, ..) = m_star(&slice(&z), w);
        prop_assert!((m - oracle).abs() <= 1e-3);
    }

    #[test]
    fn gleason_distance_is_a_symmetric_unit_quantity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let seq = separated_sequence(&mut r, 3, 0.99, 0.0);
        let (p, q, s) = (seq.get(0), seq.get(1), seq.get(2));
        let d = gleason(&p, &q);
        prop_assert!((d - gleason(&q, &p)).abs() < 1e-15);
        prop_assert!((0.0..1.0).contains(&d));
        prop_assert_eq!(gleason(&p, &p), 0.0);
        prop_assert!((d - gleason_oracle(&p, &q)).abs() < 1e-14);
        // the pseudo-hyperbolic metric satisfies the strong triangle inequality
        let (a, b) = (gleason(&p, &s), gleason(&s, &q));
        prop_assert!(d <= (a + b) / (1.0 + a * b) + 1e-12);
    }
}
