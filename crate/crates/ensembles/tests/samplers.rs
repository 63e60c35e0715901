use irm_ensembles::*;
use irm_profiles::*;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

const DRAWS: u64 = 100_000;

fn mean(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.collect();
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn real_wigner_diagonal_variance() {
    let (m, _) = mean((0..DRAWS).map(|r| {
        let w = sample_noise(2, EntryLaw::Gaussian, Beta::Real, 7, r).unwrap();
        w.entry(0, 0).re.powi(2)
    }));
    assert!((m - 2.0).abs() < 0.05, "{m}");
}

#[test]
fn complex_wigner_pseudo_variance_vanishes() {
    let (m, _) = mean((0..DRAWS).map(|r| {
        let w = sample_noise(2, EntryLaw::Gaussian, Beta::Complex, 7, r).unwrap();
        (w.entry(0, 1) * w.entry(0, 1)).re
    }));
    assert!(m.abs() < 0.02, "{m}");
}

#[test]
fn samplers_are_exactly_hermitian() {
    for beta in [Beta::Real, Beta::Complex] {
        assert_eq!(sample_wigner(30, beta, 1).unwrap().hermitian_defect(), 0.0);
    }
    for a in [0.0, 0.5, 1.0, 3.0, f64::INFINITY] {
        assert_eq!(sample_interpolating(20, a, 2).unwrap().hermitian_defect(), 0.0);
    }
}

#[test]
fn theta_one_is_goe() {
    assert_eq!(sample_theta_goe(25, 1.0, 99).unwrap(), sample_wigner(25, Beta::Real, 99).unwrap());
}

#[test]
fn theta_goe_moments_and_sparsity() {
    let (m, _) = mean((0..DRAWS).map(|r| {
        let w = sample_noise(2, EntryLaw::ThetaGoe { theta: 10.0 }, Beta::Real, 3, r).unwrap();
        w.entry(0, 1).re.powi(2)
    }));
    assert!((m - 1.0).abs() < 0.1, "{m}");
    let w = sample_theta_goe(200, 4.0, 5).unwrap();
    let mut zeros = 0;
    for i in 0..200 {
        for j in 0..i {
            if w.entry(i, j).re == 0.0 {
                zeros += 1;
            }
        }
    }
    let frac = zeros as f64 / (200.0 * 199.0 / 2.0);
    assert!((frac - 0.75).abs() < 0.01, "{frac}");
}

#[test]
fn interpolating_limits() {
    let w = sample_interpolating(30, 0.0, 4).unwrap();
    if let Matrix::Complex(m) = &w {
        assert!(m.iter().all(|z| z.im == 0.0));
    } else {
        panic!("interpolating matrices are complex");
    }
    let (m, _) = mean((0..DRAWS).map(|r| {
        let w = sample_noise(2, EntryLaw::Interpolating { alpha_mix: Some(1.0) }, Beta::Complex, 8, r).unwrap();
        (w.entry(0, 1) * w.entry(0, 1)).re
    }));
    assert!(m.abs() < 0.02, "{m}");
    let inf = sample_interpolating(10, f64::INFINITY, 4).unwrap();
    for i in 0..10 {
        assert_eq!(inf.entry(i, i), Complex64::new(0.0, 0.0));
        assert_eq!(inf.entry(i, (i + 1) % 10).re, 0.0);
    }
    assert!(sample_noise(3, EntryLaw::Interpolating { alpha_mix: Some(1.0) }, Beta::Real, 0, 0).is_err());
}

/// Empirical `E|H_ij|²` against `σ²_ij` times the diagonal factor.
#[test]
fn entry_variances_match_profile() {
    let profile = generalized_wigner_profile(4, 0.4, 3.0, 21).unwrap();
    let sigma2 = profile.dense();
    let laws = [
        (EntryLaw::Gaussian, Beta::Real),
        (EntryLaw::Gaussian, Beta::Complex),
        (EntryLaw::ThetaGoe { theta: 4.0 }, Beta::Real),
        (EntryLaw::Rademacher, Beta::Real),
        (EntryLaw::Rademacher, Beta::Complex),
        (EntryLaw::HeavyTailed { dof: 9.0, zeta: None }, Beta::Real),
        (EntryLaw::Interpolating { alpha_mix: Some(0.7) }, Beta::Complex),
    ];
    for (law, beta) in laws {
        let hs: Vec<Matrix> =
            (0..DRAWS).map(|r| assemble(&profile, &sample_noise(4, law, beta, 13, r).unwrap(), None).unwrap()).collect();
        for i in 0..4 {
            for j in 0..4 {
                let factor = match law {
                    // Diagonal variance 2/(1+α²) interpolates between GOE and GUE.
                    EntryLaw::Interpolating { alpha_mix: Some(a) } if i == j => 2.0 / (1.0 + a * a),
                    _ if i == j && beta == Beta::Real => 2.0,
                    _ => 1.0,
                };
                let (m, se) = mean(hs.iter().map(|h| h.entry(i, j).norm_sqr()));
                let target = sigma2[(i, j)] * factor;
                assert!((m - target).abs() <= 5.0 * se + 1e-10 * target, "{law:?} ({i},{j}): {m} vs {target} ± {se}");
            }
        }
    }
}

#[test]
fn assemble_examples() {
    let n = 6;
    let w = sample_wigner(n, Beta::Real, 3).unwrap();
    let x = assemble(&uniform_profile(n).unwrap(), &w, None).unwrap();
    for i in 0..n {
        for j in 0..n {
            let expect = w.entry(i, j).re / (n as f64).sqrt();
            assert!((x.entry(i, j).re - expect).abs() <= 1e-15 * expect.abs().max(1.0));
        }
    }
    let d = Deformation::spike(0.0);
    let a = d.materialize(n, Beta::Real).unwrap();
    assert_eq!(d.eigenvalues(1.0, n).unwrap(), vec![1.0]);
    let h = assemble(&uniform_profile(n).unwrap(), &w, None).unwrap();
    let xa = assemble(&uniform_profile(n).unwrap(), &w, Some(&a)).unwrap();
    for i in 0..n {
        for j in 0..n {
            let diff = (xa.entry(i, j) - h.entry(i, j)).re;
            if (i, j) == (0, 0) {
                assert!((diff - 1.0).abs() < 1e-15);
            } else {
                assert_eq!(diff, 0.0);
            }
        }
    }
    let wrong = sample_wigner(n + 1, Beta::Real, 3).unwrap();
    assert!(matches!(assemble(&uniform_profile(n).unwrap(), &wrong, None), Err(EnsembleError::Dimension(_))));
}

#[test]
fn random_frames_are_orthonormal() {
    for beta in [Beta::Real, Beta::Complex] {
        let d = Deformation { spikes: vec![0.5, -1.0], bulk: vec![0.3], basis: Basis::Random { seed: 4 } };
        let a = d.materialize(12, beta).unwrap();
        assert!(a.hermitian_defect() < 1e-14);
        let ev = a.hermitian_eigenvalues().unwrap();
        let mut expect = d.eigenvalues(1.0, 12).unwrap();
        expect.extend(std::iter::repeat(0.0).take(9));
        expect.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }
    let bad = Deformation { spikes: vec![], bulk: vec![1.2], basis: Basis::Coordinate };
    assert!(bad.materialize(5, Beta::Real).is_err());
}

#[test]
fn wishart_trace_and_positivity() {
    let p = wishart_profile(50, 50, WishartBuilder::Uniform).unwrap();
    let (m, _) = mean((0..10_000u64).map(|r| {
        let x = sample_wishart(&p, Beta::Real, None, 1, r).unwrap();
        (0..50).map(|i| x.entry(i, i).re).sum::<f64>() / 50.0
    }));
    assert!((m - 1.0).abs() < 0.05, "{m}");
    let q = wishart_profile(20, 40, WishartBuilder::Banded { width: 0.2 }).unwrap();
    for beta in [Beta::Real, Beta::Complex] {
        for r in 0..5 {
            let x = sample_wishart(&q, beta, Some(&Deformation::spike(1.0)), 2, r).unwrap();
            assert!(x.hermitian_eigenvalues().unwrap()[0] >= -1e-10);
        }
    }
}

#[test]
fn scalar_wishart() {
    let p = wishart_profile(1, 1, WishartBuilder::Uniform).unwrap();
    let tau = 0.3;
    let x = sample_wishart(&p, Beta::Complex, Some(&Deformation::spike(tau)), 5, 0).unwrap();
    let w = sample_rect_noise(1, 1, EntryLaw::Gaussian, Beta::Complex, 5, 0).unwrap();
    let h = w.entry(0, 0);
    let expect = (h + Complex64::new(1.0 + tau, 0.0)).norm_sqr();
    assert!((x.entry(0, 0).re - expect).abs() < 1e-14);
}

#[test]
fn wishart_deformation_norm_is_enforced() {
    let big = Matrix::Real(DMatrix::from_element(2, 4, 1.0));
    assert!(check_wishart_deformation(&big, 0.5, 4, 0.0).is_err());
    let p = wishart_profile(2, 4, WishartBuilder::Uniform).unwrap();
    let bad = Deformation { spikes: vec![], bulk: vec![0.9], basis: Basis::Coordinate };
    assert!(sample_wishart(&p, Beta::Real, Some(&bad), 0, 0).is_err());
    let ok = Deformation { spikes: vec![2.0], bulk: vec![0.5], basis: Basis::Random { seed: 1 } };
    assert!(sample_wishart(&p, Beta::Real, Some(&ok), 0, 0).is_ok());
}

#[test]
fn truncation_examples() {
    let w = Matrix::Real(DMatrix::from_element(3, 3, 0.5));
    let (t, f) = truncate_heavy(&w, 100, 0.3).unwrap();
    assert_eq!(t, w);
    assert_eq!(f, 0.0);
    let big = Matrix::Real(DMatrix::from_element(3, 3, 50.0));
    let (t, f) = truncate_heavy(&big, 100, 0.3).unwrap();
    assert!(matches!(t, Matrix::Real(ref m) if m.iter().all(|v| *v == 0.0)));
    assert_eq!(f, 1.0);
    assert!(truncate_heavy(&w, 100, 0.4).is_err());
}

/// At N = 400, ζ = 0.3 the cut sits at 400^0.15 ≈ 2.46 unit-variance
/// standard deviations, so about 2% of Student-t(9) entries are removed.
#[test]
fn student_t_truncation_matches_tail_probability() {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let n = 400;
    let zeta = 0.3;
    let law = EntryLaw::HeavyTailed { dof: 9.0, zeta: None };
    let cut = (n as f64).powf(zeta / 2.0) * (9.0f64 / 7.0).sqrt();
    let t = StudentsT::new(0.0, 1.0, 9.0).unwrap();
    let oracle = 2.0 * (1.0 - t.cdf(cut));
    let mut fracs = vec![];
    for r in 0..10 {
        let w = sample_noise(n, law, Beta::Real, 31, r).unwrap();
        // Compare off-diagonal entries only; the diagonal has variance 2.
        if let Matrix::Real(m) = &w {
            let off = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { m[(i, j)] });
            let (_, f) = truncate_heavy(&Matrix::Real(off), n, zeta).unwrap();
            fracs.push(f * (n * n) as f64 / (n * (n - 1)) as f64);
        }
    }
    let avg = fracs.iter().sum::<f64>() / fracs.len() as f64;
    // Each replica averages ~80k independent pairs.
    let se = (oracle * (1.0 - oracle) / (10.0 * 79_800.0)).sqrt();
    assert!((avg - oracle).abs() < 5.0 * se, "{avg} vs {oracle}");
    assert!(avg > 1e-3);
}

#[test]
fn ensemble_is_a_pure_function_of_seed() {
    let spec = EnsembleSpec {
        beta: Beta::Complex,
        entry_law: EntryLaw::HeavyTailed { dof: 7.0, zeta: Some(0.25) },
        profile: ProfileSpec::Band { d: 1, l: 40, w: 6.0, density: BandDensity::Gaussian },
        deformation: Some(Deformation { spikes: vec![0.5], bulk: vec![], basis: Basis::Random { seed: 3 } }),
        model: Model::Wigner,
        seed: 42,
    };
    let e = Ensemble::new(spec.clone()).unwrap();
    let later = e.sample(7).unwrap().matrix;
    let _ = e.sample(3).unwrap();
    assert_eq!(Ensemble::new(spec).unwrap().sample(7).unwrap().matrix, later);
    let s = e.sample(0).unwrap();
    assert!(s.truncated_fraction.is_some());
    assert_eq!(s.matrix.hermitian_defect(), 0.0);
}

#[test]
fn spec_serialization() {
    let spec = EnsembleSpec {
        beta: Beta::Real,
        entry_law: EntryLaw::ThetaGoe { theta: 4.0 },
        profile: ProfileSpec::Uniform { n: 10 },
        deformation: None,
        model: Model::Wigner,
        seed: 1,
    };
    let js = serde_json::to_string(&spec).unwrap();
    assert!(js.contains("\"beta\":1"));
    let back: EnsembleSpec = serde_json::from_str(&js).unwrap();
    assert_eq!(back, spec);
    assert!(serde_json::from_str::<EnsembleSpec>(&js.replace("\"beta\":1", "\"beta\":4")).is_err());
    assert!(serde_json::from_str::<EnsembleSpec>(&js.replace("\"seed\":1", "\"seed\":1,\"x\":0")).is_err());
    let wrong_model = EnsembleSpec { model: Model::Wishart, ..spec };
    assert!(Ensemble::new(wrong_model).is_err());
}

/// Independent evaluation by binomial expansion over Gaussian even moments.
fn moment_by_expansion(a: usize, b: usize) -> BigInt {
    let mut binom = vec![BigInt::from(1)];
    for k in 1..=a {
        let next = &binom[k - 1] * BigInt::from(a - k + 1) / BigInt::from(k);
        binom.push(next);
    }
    let mut total = BigInt::from(0);
    for k in 0..=a {
        let term = &binom[k] * odd_double_factorial(k + b);
        if (a - k) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[test]
fn mixed_moment_values() {
    assert_eq!(gaussian_mixed_moment(0, 2), BigInt::from(3));
    assert_eq!(gaussian_mixed_moment(1, 0), BigInt::from(0));
    assert_eq!(gaussian_mixed_moment(2, 0), BigInt::from(2));
    assert_eq!(gaussian_mixed_moment(1, 1), BigInt::from(2));
    for a in 0..=8 {
        for b in 0..=8 - a {
            assert_eq!(gaussian_mixed_moment(a, b), moment_by_expansion(a, b), "I({a},{b})");
        }
    }
    let big = gaussian_mixed_moment(30, 10);
    assert_eq!(big, moment_by_expansion(30, 10));
}

#[test]
fn mixed_moment_inequality_and_monotonicity() {
    let r = check_moment_inequality(12);
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert_eq!(r.cases, (0..=12).map(|a| 13 - a).sum::<usize>() - 2);
    let t = gaussian_mixed_moment_table(20, 0);
    for a in 1..20 {
        assert!(t[a][0] >= BigInt::from(0));
        assert!(t[a + 1][0] >= t[a][0]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn superposition(seed in 0u64..10_000, n in 2usize..12, tau in -2.0f64..2.0, complex in any::<bool>()) {
        let beta = if complex { Beta::Complex } else { Beta::Real };
        let p = generalized_wigner_profile(n, 0.5, 2.0, seed).unwrap();
        let w = sample_wigner(n, beta, seed).unwrap();
        let d = Deformation { spikes: vec![tau], bulk: vec![], basis: Basis::Random { seed } };
        let a = d.materialize(n, beta).unwrap();
        let x = assemble(&p, &w, Some(&a)).unwrap();
        let h = assemble(&p, &w, None).unwrap();
        for i in 0..n {
            for j in 0..n {
                let diff = x.entry(i, j) - h.entry(i, j) - a.entry(i, j);
                // One rounding of the sum h + a.
                prop_assert!(diff.norm() <= 2.0 * f64::EPSILON * (h.entry(i, j).norm() + a.entry(i, j).norm()));
            }
        }
        prop_assert_eq!(x.hermitian_defect() < 1e-15, true);
    }

    #[test]
    fn replicas_do_not_depend_on_order(seed in 0u64..1000, r in 0u64..50) {
        let a = sample_noise(8, EntryLaw::Gaussian, Beta::Complex, seed, r).unwrap();
        let _ = sample_noise(8, EntryLaw::Gaussian, Beta::Complex, seed, r + 1).unwrap();
        prop_assert_eq!(a, sample_noise(8, EntryLaw::Gaussian, Beta::Complex, seed, r).unwrap());
    }
}
