use proptest::prelude::*;

use tops_core::coupled_tops::{kicked_top_traces, lambda_for_spins};
use tops_core::entanglement::{predicted_lambda12, sample_haar_state, schmidt_spectrum};
use tops_core::linalg::{eig_unitary, kron, svd_values_and_squares, unitarity_probe};
use tops_core::rmt::{lambda_general, sample_circular};
use tops_core::spectral_stats::spacings_from_phases;
use tops_core::spin::top_floquet;
use tops_core::{CMatrix, LambdaMethod, MatrixElementLaw, RngStream, Symmetry, TopParams};

fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = RngStream::new(seed, 0).rng();
    CMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

fn symmetry() -> impl Strategy<Value = Symmetry> {
    prop_oneof![Just(Symmetry::Coe), Just(Symmetry::Cue)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eig_unitary_reconstructs(sym in symmetry(), n in 2usize..48, seed in any::<u64>()) {
        let u = sample_circular(sym, n, RngStream::new(seed, 1)).unwrap();
        let d = eig_unitary(&u).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&u).unwrap() < 1e-9);
        prop_assert!(d.phases.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn kron_mixed_product(a in 1usize..4, b in 1usize..4, c in 1usize..4, seed in any::<u64>()) {
        let x = random_matrix(a, b, seed);
        let y = random_matrix(b, c, seed ^ 1);
        let p = random_matrix(c, a, seed ^ 2);
        let q = random_matrix(a, b, seed ^ 3);
        let lhs = kron(&x, &p).unwrap().matmul(&kron(&y, &q).unwrap()).unwrap();
        let rhs = kron(&x.matmul(&y).unwrap(), &p.matmul(&q).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12 * (1.0 + rhs.max_abs()));
        let assoc_l = kron(&kron(&x, &y).unwrap(), &p).unwrap();
        let assoc_r = kron(&x, &kron(&y, &p).unwrap()).unwrap();
        prop_assert!(assoc_l.max_abs_diff(&assoc_r).unwrap() < 1e-12 * (1.0 + assoc_r.max_abs()));
    }

    #[test]
    fn svd_of_adjoint(rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
        let m = random_matrix(rows, cols, seed);
        let a = svd_values_and_squares(&m, false).unwrap().squares;
        let b = svd_values_and_squares(&m.adjoint(), false).unwrap().squares;
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10 * (1.0 + x));
        }
    }

    #[test]
    fn kicked_top_is_unitary(j in 1u32..16, k in 0.0f64..20.0, alpha in -1.0f64..1.0) {
        let u = top_floquet(&TopParams::new(j, k, alpha).unwrap()).unwrap();
        prop_assert!(unitarity_probe(&u).unwrap() < 1e-12);
    }

    #[test]
    fn lambda_is_nonnegative(j1 in 1u32..30, j2 in 1u32..30, eps in 0.0f64..10.0) {
        let t = kicked_top_traces(j1, j2, eps);
        prop_assert!(t.trace_sq >= 0.0 && t.norm1_sq >= 0.0 && t.norm2_sq >= 0.0);
        prop_assert!(lambda_for_spins(j1, j2, eps, LambdaMethod::ExactSum).lambda >= 0.0);
        prop_assert_eq!(lambda_for_spins(j1, j2, 0.0, LambdaMethod::ExactSum).lambda, 0.0);
    }

    #[test]
    fn identity_coupling_has_zero_lambda(sym in symmetry(), n1 in 2usize..9, n2 in 2usize..9) {
        let l = lambda_general(sym, &CMatrix::identity(n1 * n2), n1, n2).unwrap();
        prop_assert!(l.abs() < 1e-12);
    }

    #[test]
    fn spacings_sum_to_count(mut phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 1..200)) {
        phases.sort_by(f64::total_cmp);
        let s = spacings_from_phases(&phases).unwrap();
        let n = phases.len() as f64;
        prop_assert!((s.spacings.iter().sum::<f64>() - n).abs() < 1e-9 * n);
    }

    #[test]
    fn schmidt_normalized_and_moments_ordered(n1 in 1usize..8, n2 in 1usize..8, seed in any::<u64>()) {
        let psi = sample_haar_state(n1 * n2, RngStream::new(seed, 3));
        let sp = schmidt_spectrum(&psi, n1, n2).unwrap();
        prop_assert!((sp.values().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let mut last = f64::INFINITY;
        for a in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let mu = sp.moment(a).unwrap();
            prop_assert!(mu <= last + 1e-14);
            last = mu;
        }
    }

    #[test]
    fn leading_schmidt_predictions_bounded(lambda in 1e-8f64..0.05) {
        let (l1, l2) = predicted_lambda12(lambda, MatrixElementLaw::BesselCoe).unwrap();
        prop_assert!(l1 + l2 <= 1.0);
        prop_assert!(l2 >= 0.0);
    }
}

#[test]
fn streams_are_uncorrelated() {
    let n = 20_000;
    let draw = |i| {
        let mut r = RngStream::new(99, i).rng();
        (0..n).map(|_| r.gaussian()).collect::<Vec<f64>>()
    };
    let streams: Vec<Vec<f64>> = (0..6).map(draw).collect();
    for i in 0..streams.len() {
        for k in i + 1..streams.len() {
            let rho: f64 = streams[i].iter().zip(&streams[k]).map(|(a, b)| a * b).sum::<f64>() / n as f64;
            assert!(rho.abs() < 4.0 / (n as f64).sqrt(), "streams {i},{k}: {rho}");
        }
    }
}
