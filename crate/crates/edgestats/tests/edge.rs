use irm_edgestats::*;
use irm_ensembles::{Basis, Beta, Deformation, EnsembleSpec, EntryLaw, Matrix, Model};
use irm_profiles::{cycle_graph, ProfileSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn goe(n: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec { beta: Beta::Real, entry_law: EntryLaw::Gaussian, profile: ProfileSpec::Uniform { n }, deformation: None, model: Model::Wigner, seed }
}

fn block_diag(blocks: usize, m: usize) -> EnsembleSpec {
    EnsembleSpec { profile: ProfileSpec::BlockWegner { blocks, m, lambda: 0.0 }, ..goe(blocks * m, 0) }
}

fn random_symmetric(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Matrix::Real(m)
}

fn random_hermitian(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = if i == j {
                Complex64::new(rng.random_range(-1.0..1.0), 0.0)
            } else {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            };
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Matrix::Complex(m)
}

fn config(replicas: usize, seed: u64) -> EdgeConfig {
    EdgeConfig { k: 2, replicas, seed, level: 0.01, side: EdgeSide::Upper }
}

#[test]
fn spectrum_examples() {
    let d = Matrix::Real(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0])));
    let s = spectrum(&d).unwrap();
    assert!(s.iter().zip([3.0, 2.0, 1.0]).all(|(a, b)| (a - b).abs() < 1e-15));
    let swap = Matrix::Real(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let s = spectrum(&swap).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] + 1.0).abs() < 1e-15);
}

#[test]
fn goe_spectrum_residual_is_small() {
    let x = irm_ensembles::Ensemble::new(goe(100, 3)).unwrap().sample(0).unwrap().matrix;
    let (vals, res) = spectrum_with_residual(&x).unwrap();
    assert!(res <= RESIDUAL_TOL);
    // Independent check: X − λ is singular at both ends.
    let Matrix::Real(m) = &x else { unreachable!() };
    let norm = vals[0].abs().max(vals[99].abs());
    for lam in [vals[0], vals[99]] {
        let shifted = m - DMatrix::identity(100, 100) * lam;
        let smin = shifted.singular_values().min();
        assert!(smin <= 1e-8 * norm, "{smin}");
    }
}

#[test]
fn non_hermitian_input_is_refused() {
    let bad = Matrix::Real(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
    assert!(matches!(spectrum(&bad), Err(EdgeError::Domain(_))));
    assert!(matches!(extreme_eigenvalues(&bad, 1, EdgeSide::Upper), Err(EdgeError::Domain(_))));
    assert!(spectrum(&Matrix::Real(DMatrix::zeros(2, 3))).is_err());
}

#[test]
fn bisection_matches_full_decomposition() {
    for seed in 0..6 {
        let n = 5 + 13 * seed as usize;
        for x in [random_symmetric(n, seed), random_hermitian(n, seed)] {
            let full = spectrum(&x).unwrap();
            let k = 3.min(n);
            let top = extreme_eigenvalues(&x, k, EdgeSide::Upper).unwrap();
            let bottom = extreme_eigenvalues(&x, k, EdgeSide::Lower).unwrap();
            for j in 0..k {
                assert!((top[j] - full[j]).abs() < 1e-10);
                assert!((bottom[j] - full[n - 1 - j]).abs() < 1e-10);
            }
            let (lo, hi) = extreme_pair(&x).unwrap();
            assert!((lo - full[n - 1]).abs() < 1e-10 && (hi - full[0]).abs() < 1e-10);
        }
    }
    assert!(extreme_eigenvalues(&random_symmetric(4, 0), 5, EdgeSide::Upper).is_err());
}

#[test]
fn repeated_eigenvalues_are_resolved() {
    let x = Matrix::Real(DMatrix::identity(6, 6) * 2.0);
    assert!(extreme_eigenvalues(&x, 3, EdgeSide::Upper).unwrap().iter().all(|v| (v - 2.0).abs() < 1e-14));
}

#[test]
fn kolmogorov_distribution_values() {
    // Tabulated critical values of the Kolmogorov law.
    for (lambda, p) in [(1.3581, 0.05), (1.6276, 0.01), (1.9495, 0.001), (1.2239, 0.1)] {
        assert!((kolmogorov_survival(lambda) - p).abs() < 2e-4 * p.max(0.01) / 0.01, "{lambda}");
    }
    for i in 0..80 {
        let l = 0.6 + 0.0125 * i as f64;
        let tail: f64 = (1..=100).map(|k| 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k * k) as f64 * l * l).exp()).sum();
        assert!((1.0 - kolmogorov_cdf_small(l) - tail).abs() < 1e-12, "{l}");
    }
    assert_eq!(kolmogorov_survival(0.0), 1.0);
    assert!(kolmogorov_survival(5.0) < 1e-20);
}

#[test]
fn ks_statistic_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..20 {
        let a: Vec<f64> = (0..10 + trial).map(|_| rng.random_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..7 + 2 * trial).map(|_| rng.random_range(0.2..1.2)).collect();
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        let naive = a.iter().chain(&b).map(|&x| (ecdf(&a, x) - ecdf(&b, x)).abs()).fold(0.0, f64::max);
        assert!((ks_statistic(&a, &b) - naive).abs() < 1e-15);
    }
}

#[test]
fn ks_ties_use_seeded_jitter() {
    let a = vec![1.0, 2.0, 2.0, 3.0];
    let b = vec![2.0, 3.0, 3.0, 4.0];
    let r1 = ks_two_sample(&a, &b, 5).unwrap();
    let r2 = ks_two_sample(&a, &b, 5).unwrap();
    assert!(r1.jittered);
    assert_eq!(r1, r2);
    assert!(!ks_two_sample(&[1.0, 2.0], &[1.5], 0).unwrap().jittered);
    assert!(ks_two_sample(&[], &[1.0], 0).is_err());
}

#[test]
fn ks_calibration_under_the_null() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 400;
    let mut rejections = 0;
    for _ in 0..trials {
        let a: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
        if ks_two_sample(&a, &b, 0).unwrap().p_value < 0.05 {
            rejections += 1;
        }
    }
    // Binomial(400, 0.05): mean 20, sd 4.4.
    assert!((5..=40).contains(&rejections), "{rejections}");
    let a: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..200).map(|_| rng.random::<f64>() + 0.3).collect();
    assert!(ks_two_sample(&a, &b, 0).unwrap().p_value < 1e-6);
}

#[test]
fn wilson_examples() {
    let [lo, hi] = wilson_interval(0, 10, 0.95).unwrap();
    assert!(lo.abs() < 1e-15 && (hi - 0.2775).abs() < 1e-4, "{lo} {hi}");
    let [lo, hi] = wilson_interval(5, 10, 0.95).unwrap();
    assert!((lo - 0.2366).abs() < 1e-4 && (hi - 0.7634).abs() < 1e-4);
    assert!(wilson_interval(3, 2, 0.95).is_err());
}

#[test]
fn too_few_replicas_are_refused() {
    let r = universality_test(&goe(20, 0), &goe(20, 0), &config(99, 0));
    assert!(matches!(r, Err(EdgeError::Power { replicas: 99, min: 100 })));
}

#[test]
fn mismatched_specs_are_refused() {
    assert!(matches!(universality_test(&goe(20, 0), &goe(21, 0), &config(100, 0)), Err(EdgeError::Domain(_))));
    let mut spiked = goe(20, 0);
    spiked.deformation = Some(Deformation::spike(0.0));
    assert!(matches!(universality_test(&spiked, &goe(20, 0), &config(100, 0)), Err(EdgeError::Domain(_))));
}

#[test]
fn self_comparison_does_not_reject() {
    let r = universality_test(&goe(40, 0), &goe(40, 0), &config(300, 17)).unwrap();
    assert!(!r.reject, "{:?}", r.coordinates);
    assert_ne!(r.test.spec.seed, r.baseline.spec.seed);
    assert_eq!(r.coordinate_level, 0.005);
    assert!(r.gap.is_some());
}

#[test]
fn block_diagonal_profile_is_rejected() {
    let r = universality_test(&block_diag(2, 60), &goe(120, 0), &config(600, 3)).unwrap();
    assert!(r.reject && r.min_p < 1e-3, "{:?}", r.coordinates);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            serde_json::to_string(&universality_test(&goe(30, 0), &goe(30, 0), &config(120, 4)).unwrap()).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn rescaling_is_invertible_bookkeeping() {
    let s = sample_edges(&goe(50, 1), 3, 10, EdgeSide::Upper).unwrap();
    assert_eq!(s.edge, 2.0);
    assert!((s.scale - 50f64.powf(2.0 / 3.0)).abs() < 1e-12);
    for (raw, r) in s.extremes.iter().zip(&s.rescaled) {
        assert!(raw.windows(2).all(|w| w[0] >= w[1]));
        for (a, b) in raw.iter().zip(r) {
            assert!((s.unscale(*b) - a).abs() < 1e-12);
        }
    }
    let low = sample_edges(&goe(50, 1), 2, 5, EdgeSide::Lower).unwrap();
    assert_eq!(low.edge, -2.0);
    assert!(low.extremes.iter().all(|r| r[0] <= r[1]));
}

#[test]
fn wishart_edges() {
    let spec = |m, n| EnsembleSpec {
        beta: Beta::Complex,
        entry_law: EntryLaw::Gaussian,
        profile: ProfileSpec::Wishart { m, n, width: None },
        deformation: None,
        model: Model::Wishart,
        seed: 0,
    };
    let e = irm_ensembles::Ensemble::new(spec(25, 100)).unwrap();
    let (up, n) = edge_location(&e, EdgeSide::Upper).unwrap();
    assert!((up - 2.25).abs() < 1e-15 && n == 100);
    let (down, _) = edge_location(&e, EdgeSide::Lower).unwrap();
    assert!((down - 0.25).abs() < 1e-15);
    let square = irm_ensembles::Ensemble::new(spec(95, 100)).unwrap();
    assert!(edge_location(&square, EdgeSide::Lower).is_err());
    let s = sample_edges(&spec(25, 100), 1, 20, EdgeSide::Lower).unwrap();
    assert!(s.extremes.iter().all(|r| r[0] > 0.0 && r[0] < 1.0));
}

#[test]
fn bbp_without_spikes_is_the_plain_comparison() {
    let cfg = config(120, 8);
    let a = bbp_test(&goe(30, 0), &[], true, &cfg).unwrap();
    let b = universality_test(&goe(30, 0), &goe(30, 0), &EdgeConfig { k: 1, ..cfg }).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(bbp_test(&goe(30, 0), &[5.5], true, &cfg).is_err());
    let spiked = bbp_test(&goe(30, 0), &[0.0], true, &cfg).unwrap();
    assert_eq!(spiked.test.k, 2);
    assert_eq!(spiked.test.spec.deformation, spiked.baseline.spec.deformation);
    assert!(matches!(spiked.test.spec.deformation.as_ref().unwrap().basis, Basis::Random { .. }));
}

#[test]
fn strongly_supercritical_spike_is_detected() {
    let r = bbp_test(&goe(60, 0), &[4.0], false, &config(200, 2)).unwrap();
    assert!(r.reject);
}

#[test]
fn tail_table_properties() {
    let t = tail_estimate(&goe(60, 0), &[0.0, 1.0, 2.0, 4.0], 400, 6).unwrap();
    assert!(t.monotone);
    assert!(t.survival.iter().all(|p| (0.0..=1.0).contains(p)));
    assert!(t.survival[0] > t.survival[3]);
    for (w, p) in t.wilson.iter().zip(&t.survival) {
        assert!(w[0] <= *p && *p <= w[1]);
    }
    assert!(tail_estimate(&goe(10, 0), &[2.0, 1.0], 10, 0).is_err());
    assert!(tail_estimate(&goe(10, 0), &[-1.0], 10, 0).is_err());
    let c = tail_compare(&goe(60, 0), &[0.0, 1.0, 4.0], 400, 1).unwrap();
    assert!(c.matches && c.dominated && c.separated, "{c:?}");
}

#[test]
fn lift_with_positive_signs_doubles_the_spectrum() {
    let g = cycle_graph(6);
    let r = lift_spectrum_check(&g, &g).unwrap();
    assert!(r.passed && r.max_deviation < 1e-12 && r.degree == 2);
    let lift = lift_adjacency(&g, &g).unwrap();
    let s = spectrum(&Matrix::Real(lift)).unwrap();
    let base = spectrum(&Matrix::Real(g.clone())).unwrap();
    for (i, v) in base.iter().enumerate() {
        assert!((s[2 * i] - v).abs() < 1e-12 && (s[2 * i + 1] - v).abs() < 1e-12);
    }
}

#[test]
fn lift_with_negative_signs_on_a_bipartite_graph() {
    let g = cycle_graph(6);
    let r = lift_spectrum_check(&g, &(-&g)).unwrap();
    assert!(r.passed);
    let base = spectrum(&Matrix::Real(g.clone())).unwrap();
    let neg = spectrum(&Matrix::Real(-&g)).unwrap();
    for (a, b) in base.iter().zip(neg.iter().rev()) {
        assert!((a + b).abs() < 1e-12);
    }
}

#[test]
fn random_signs_on_a_cycle() {
    let g = cycle_graph(6);
    for seed in 0..10 {
        let r = lift_spectrum_check(&g, &random_signs(&g, seed)).unwrap();
        assert!(r.passed && r.max_deviation <= 1e-10);
        assert_eq!(r.trace_lift, 0.0);
        assert_eq!(r.trace_base, 0.0);
    }
}

#[test]
fn lift_rejects_bad_signs() {
    let g = cycle_graph(5);
    let mut s = g.clone();
    s[(0, 2)] = 1.0;
    s[(2, 0)] = 1.0;
    assert!(matches!(lift_spectrum_check(&g, &s), Err(EdgeError::Domain(_))));
    let mut s = g.clone();
    s[(0, 1)] = -1.0;
    assert!(lift_spectrum_check(&g, &s).is_err());
    let mut irregular = g.clone();
    irregular[(0, 2)] = 1.0;
    irregular[(2, 0)] = 1.0;
    assert!(lift_spectrum_check(&irregular, &irregular).is_err());
}

#[test]
fn random_regular_lifts() {
    for (i, (n, d)) in [(16, 4), (32, 8), (20, 2)].into_iter().enumerate() {
        let r = random_lift_check(n, d, i as u64).unwrap();
        assert!(r.passed && r.n == n && r.degree == d, "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rescaling_preserves_order(vals in proptest::collection::vec(-3.0f64..3.0, 1..20), n in 10usize..1000) {
        let scale = (n as f64).powf(2.0 / 3.0);
        let resc: Vec<f64> = vals.iter().map(|v| scale * (v - 2.0)).collect();
        let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        prop_assert_eq!(argmax(&vals), argmax(&resc));
    }

    #[test]
    fn ks_statistic_is_symmetric_and_bounded(a in proptest::collection::vec(-5.0f64..5.0, 1..30), b in proptest::collection::vec(-5.0f64..5.0, 1..30)) {
        let d = ks_statistic(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_statistic(&b, &a));
        prop_assert_eq!(ks_statistic(&a, &a), 0.0);
    }
}
