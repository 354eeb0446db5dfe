use dimwit::classical::{balanced_partition_value, enumerate_max, partition_sizes};
use dimwit::linalg::{eig_hermitian, positive_part_projector, trace_norm};
use dimwit::quantum::{
    average_state, fidelity_pure, fourier_ensemble, helstrom_effect, overlap_sum_identity_check, purity,
    trace_distance, DensityMatrix, Ensemble,
};
use dimwit::sampling::{haar_state, random_density_matrix, random_hermitian, stream_rng};
use dimwit::simulate::{born_table, noisy_table, NoiseModel};
use dimwit::witnesses::{eval_linear, eval_quadratic, quantum_bound, ProbabilityTable, WitnessKind};
use dimwit::PairMeasurementSet;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..=10) {
        let a = random_hermitian(&mut stream_rng(seed, 0), dim);
        let eig = eig_hermitian(&a).unwrap();
        prop_assert!(a.max_abs_diff(&eig.reconstruct()) <= 1e-8);
    }

    #[test]
    fn trace_norm_bounds_trace(seed in any::<u64>(), dim in 1usize..=8) {
        let a = random_hermitian(&mut stream_rng(seed, 0), dim);
        prop_assert!(trace_norm(&a).unwrap() + 1e-12 >= a.trace().re.abs());
    }

    #[test]
    fn projector_idempotent(seed in any::<u64>(), dim in 1usize..=8) {
        let a = random_hermitian(&mut stream_rng(seed, 0), dim);
        let p = positive_part_projector(&a).unwrap();
        prop_assert!(p.max_abs_diff(&(&p * &p)) <= 1e-8);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = stream_rng(seed, 0);
        let r = random_density_matrix(&mut rng, dim);
        let s = random_density_matrix(&mut rng, dim);
        let t = random_density_matrix(&mut rng, dim);
        let rs = trace_distance(&r, &s).unwrap();
        prop_assert_eq!(rs, trace_distance(&s, &r).unwrap());
        prop_assert!(rs <= trace_distance(&r, &t).unwrap() + trace_distance(&t, &s).unwrap() + 1e-8);
        prop_assert!(trace_distance(&r, &r).unwrap() <= 1e-10);
    }

    #[test]
    fn fidelity_sandwich_for_pure_states(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = stream_rng(seed, 0);
        let psi = haar_state(&mut rng, dim);
        let phi = haar_state(&mut rng, dim);
        let f = fidelity_pure(&psi, &phi).unwrap();
        let d = trace_distance(&DensityMatrix::from_pure(psi), &DensityMatrix::from_pure(phi)).unwrap();
        prop_assert!(1.0 - f <= d + 1e-8);
        prop_assert!((d - (1.0 - f * f).sqrt()).abs() <= 1e-8);
    }

    #[test]
    fn helstrom_attains_trace_distance(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = stream_rng(seed, 0);
        let r = random_density_matrix(&mut rng, dim);
        let s = random_density_matrix(&mut rng, dim);
        let m = helstrom_effect(&r, &s).unwrap();
        let value = r.probability(&m) - s.probability(&m);
        prop_assert!((value - trace_distance(&r, &s).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn overlap_identity_holds(seed in any::<u64>(), n in 2usize..=8, dim in 1usize..=5) {
        let mut rng = stream_rng(seed, 0);
        let e = Ensemble::from_pure((0..n).map(|_| haar_state(&mut rng, dim)).collect()).unwrap();
        let (lhs, rhs) = overlap_sum_identity_check(&e).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8);
        prop_assert!(purity(&average_state(&e)) >= 1.0 / dim as f64 - 1e-9);
    }

    #[test]
    fn linearization_bound(rows in (2usize..=6).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(proptest::collection::vec(0.0f64..=1.0, m), n))
    })) {
        let (n, mut p) = rows;
        // order each pair so its difference is nonnegative
        let mut y = 0;
        for x in 2..=n {
            for xp in 1..x {
                if p[x - 1][y] < p[xp - 1][y] {
                    let tmp = p[x - 1][y];
                    p[x - 1][y] = p[xp - 1][y];
                    p[xp - 1][y] = tmp;
                }
                y += 1;
            }
        }
        let t = ProbabilityTable::from_binary(n, &p).unwrap();
        let m = (n * (n - 1) / 2) as f64;
        prop_assert!(eval_linear(&t).unwrap() <= m.sqrt() * eval_quadratic(&t).unwrap().sqrt() + 1e-9);
    }

    #[test]
    fn random_models_respect_quantum_bounds(seed in any::<u64>(), n in 3usize..=6, d in 2usize..=4) {
        let mut rng = stream_rng(seed, 0);
        let e = Ensemble::new((0..n).map(|_| random_density_matrix(&mut rng, d)).collect()).unwrap();
        let ms = PairMeasurementSet::helstrom(&e).unwrap();
        let t = born_table(&e, &ms).unwrap();
        prop_assert!(eval_quadratic(&t).unwrap() <= quantum_bound(WitnessKind::Quadratic, n, d).unwrap() + 1e-8);
        prop_assert!(eval_linear(&t).unwrap() <= quantum_bound(WitnessKind::Linear, n, d).unwrap() + 1e-8);
    }

    #[test]
    fn depolarizing_is_linear(seed in any::<u64>(), eta in 0.0f64..=1.0) {
        let mut rng = stream_rng(seed, 0);
        let e = Ensemble::from_pure((0..5).map(|_| haar_state(&mut rng, 3)).collect()).unwrap();
        let ms = PairMeasurementSet::helstrom(&e).unwrap();
        let exact = born_table(&e, &ms).unwrap().pair_differences();
        let noisy = noisy_table(&e, &ms, &NoiseModel::new(eta, None).unwrap(), 0)
            .unwrap()
            .pair_differences();
        for (a, b) in exact.iter().zip(&noisy) {
            prop_assert!((b - (1.0 - eta) * a).abs() <= 1e-10);
        }
    }
}

#[test]
fn fourier_purity_is_minimal() {
    for n in 1..=10 {
        for d in 1..=n {
            let omega = average_state(&fourier_ensemble(n, d).unwrap());
            assert!((purity(&omega) - 1.0 / d as f64).abs() <= 1e-9, "N={n} d={d}");
        }
    }
}

#[test]
fn enumeration_matches_closed_form() {
    for n in 2..=8 {
        for d in 2..=n {
            let (v, s) = enumerate_max(WitnessKind::Quadratic, n, d).unwrap();
            assert_eq!(v, balanced_partition_value(n, d).unwrap(), "N={n} d={d}");
            let sizes = partition_sizes(&s);
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            assert!(hi - lo <= 1, "unbalanced {sizes:?}");

            let (lv, ls) = enumerate_max(WitnessKind::Linear, n, d).unwrap();
            assert_eq!(lv, v);
            let sizes = partition_sizes(&ls);
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }
}

#[test]
fn guessing_enumeration_is_d_over_n() {
    for n in 2..=7 {
        for d in 1..=n {
            assert_eq!(
                enumerate_max(WitnessKind::Guessing, n, d).unwrap().0,
                d as f64 / n as f64
            );
        }
    }
}

#[test]
fn fourier_helstrom_attains_quadratic_bound() {
    for n in 2..=8 {
        for d in 2..=n {
            let e = fourier_ensemble(n, d).unwrap();
            let t = born_table(&e, &PairMeasurementSet::helstrom(&e).unwrap()).unwrap();
            let w = eval_quadratic(&t).unwrap();
            assert!((w - quantum_bound(WitnessKind::Quadratic, n, d).unwrap()).abs() <= 1e-6);
        }
    }
}

#[test]
fn cauchy_schwarz_saturates_at_n_equals_d_plus_one() {
    for d in 2..=6 {
        let e = fourier_ensemble(d + 1, d).unwrap();
        let t = born_table(&e, &PairMeasurementSet::helstrom(&e).unwrap()).unwrap();
        let target = (1.0 - 1.0 / (d * d) as f64).sqrt();
        for diff in t.pair_differences() {
            assert!((diff - target).abs() <= 1e-8);
        }
    }
}

#[test]
fn shot_noise_converges() {
    let e = fourier_ensemble(7, 2).unwrap();
    let ms = PairMeasurementSet::helstrom(&e).unwrap();
    let t = noisy_table(&e, &ms, &NoiseModel::new(0.0, Some(1_000_000)).unwrap(), 2024).unwrap();
    assert!((eval_quadratic(&t).unwrap() - 12.25).abs() <= 5e-3);
}
