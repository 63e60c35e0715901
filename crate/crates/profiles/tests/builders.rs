use irm_profiles::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn row_sums(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.nrows()).map(|i| m.row(i).iter().sum()).collect()
}

#[test]
fn uniform_examples() {
    let p = uniform_profile(2).unwrap();
    assert!(p.dense().iter().all(|v| *v == 0.5));
    assert_eq!(uniform_profile(1).unwrap().entry(0, 0), 1.0);
    let p5 = uniform_profile(5).unwrap().dense();
    for s in row_sums(&p5) {
        assert!((s - 1.0).abs() < 1e-15);
    }
    assert!(matches!(uniform_profile(0), Err(ProfileError::Domain(_))));
}

/// Direct evaluation of the periodized Gaussian kernel, independent of the builder.
fn gaussian_band_row(l: usize, w: f64) -> Vec<f64> {
    let f = |z: f64| (-0.5 * z * z).exp();
    let raw: Vec<f64> = (0..l)
        .map(|x| (-200i64..=200).map(|n| f((x as f64 + (n * l as i64) as f64) / w)).sum())
        .collect();
    let m: f64 = (-100_000i64..=100_000).map(|n| f(n as f64 / w)).sum();
    raw.iter().map(|v| v / m).collect()
}

#[test]
fn band_near_uniform_when_w_equals_l() {
    let p = band_profile(1, 8, 8.0, BandDensity::Gaussian).unwrap();
    let oracle = gaussian_band_row(8, 8.0);
    let mut worst: f64 = 0.0;
    for x in 0..8 {
        assert!((p.entry(0, x) - oracle[x]).abs() < 1e-13);
        worst = worst.max((8.0 * p.entry(0, x) - 1.0).abs());
    }
    assert!(worst < 0.5, "max |Nσ² - 1| = {worst}");
}

#[test]
fn band_rows_sum_to_one() {
    for (d, l, w, f) in [
        (1, 64, 4.0, BandDensity::Gaussian),
        (1, 50, 7.5, BandDensity::Bump),
        (1, 40, 3.0, BandDensity::PowerLaw { alpha: 1.0 }),
        (2, 12, 3.0, BandDensity::Gaussian),
        (2, 10, 2.0, BandDensity::PowerLaw { alpha: 1.5 }),
    ] {
        let p = band_profile(d, l, w, f).unwrap();
        assert!(p.max_row_defect() < 1e-14, "{f:?}");
        assert!(p.is_symmetric());
        let dense = p.dense();
        for s in row_sums(&dense) {
            assert!((s - 1.0).abs() < 1e-13);
        }
    }
}

#[test]
fn bump_has_compact_support() {
    let p = band_profile(1, 64, 4.0, BandDensity::Bump).unwrap();
    assert_eq!(p.entry(0, 32), 0.0);
    assert!(p.entry(0, 3) > 0.0);
    assert_eq!(p.entry(0, 4), 0.0);
}

#[test]
fn wide_gaussian_band_is_close_to_uniform() {
    let l = 16;
    let p = band_profile(1, l, 4.0 * l as f64, BandDensity::Gaussian).unwrap();
    let n = l as f64;
    for x in 0..l {
        assert!((p.entry(0, x) - 1.0 / n).abs() <= 0.5 / n);
    }
}

#[test]
fn custom_band_density_must_be_even() {
    let odd = |x: &[f64]| if x[0] > 0.0 { 1.0 } else { 0.5 };
    assert!(band_profile_custom(1, 16, 2.0, &odd).is_err());
    let even = |x: &[f64]| (-x[0].abs()).exp();
    let p = band_profile_custom(1, 16, 2.0, &even).unwrap();
    assert!(p.max_row_defect() < 1e-14 && p.is_symmetric());
}

/// Trapezoid quadrature of a radial density in d = 1 and d = 2.
#[test]
fn densities_integrate_to_one() {
    let fams = [BandDensity::Gaussian, BandDensity::Bump, BandDensity::PowerLaw { alpha: 1.0 }, BandDensity::PowerLaw { alpha: 1.7 }];
    for f in fams {
        // d = 1: substitute x = tan(u) to cover the real line.
        let k = 400_000;
        let h = std::f64::consts::PI / k as f64;
        let mut s = 0.0;
        for i in 1..k {
            let u = -std::f64::consts::FRAC_PI_2 + i as f64 * h;
            let x = u.tan();
            s += f.eval(&[x]) / u.cos().powi(2) * h;
        }
        let tol1 = if matches!(f, BandDensity::PowerLaw { .. }) { 1e-5 } else { 1e-6 };
        assert!((s - 1.0).abs() < tol1, "{f:?} d=1: {s}");
        // d = 2 radially: 2π ∫ r f(r) dr with r = tan(u).
        let mut s2 = 0.0;
        for i in 1..k {
            let u = i as f64 * h / 2.0;
            let r = u.tan();
            s2 += 2.0 * std::f64::consts::PI * r * f.eval(&[r, 0.0]) / u.cos().powi(2) * (h / 2.0);
        }
        let tol = if matches!(f, BandDensity::PowerLaw { alpha } if alpha < 1.5) { 1e-3 } else { 1e-6 };
        assert!((s2 - 1.0).abs() < tol, "{f:?} d=2: {s2}");
    }
}

#[test]
fn generalized_wigner_examples() {
    let u = generalized_wigner_profile(7, 1.0, 1.0, 3).unwrap().dense();
    assert!(u.iter().all(|v| (*v - 1.0 / 7.0).abs() < 1e-15));

    let p = generalized_wigner_profile(4, 0.5, 2.0, 11).unwrap();
    let d = p.dense();
    assert!(d.iter().all(|v| *v > 0.125 && *v < 0.5));
    for i in 0..4 {
        assert!((d.row(i).sum() - 1.0).abs() < 1e-10);
        assert!((d.column(i).sum() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn generalized_wigner_coupling_bound() {
    let n = 12;
    let d = generalized_wigner_profile(n, 0.5, 2.0, 5).unwrap().dense();
    let mut pn = d.clone();
    for step in 1..=12 {
        for x in 0..n {
            let tv: f64 = 0.5 * pn.row(x).iter().map(|v| (v - 1.0 / n as f64).abs()).sum::<f64>();
            assert!(tv <= 0.5f64.powi(step) + 1e-14, "step {step}: tv {tv}");
        }
        pn = &pn * &d;
    }
}

#[test]
fn generalized_wigner_rejects_infeasible() {
    assert!(generalized_wigner_profile(5, 1.5, 2.0, 0).is_err());
    assert!(generalized_wigner_profile(5, 0.5, 0.8, 0).is_err());
}

#[test]
fn sparse_examples() {
    let n = 8;
    let theta = 4.0;
    let p = DMatrix::from_element(n, n, 1.0 / theta);
    let w = DMatrix::from_element(n, n, theta);
    let s = sparse_profile(&p, &w, n as f64).unwrap().dense();
    assert!(s.iter().all(|v| (*v - 1.0 / n as f64).abs() < 1e-15));

    let mut p0 = p.clone();
    p0.row_mut(2).fill(0.0);
    p0.column_mut(2).fill(0.0);
    match sparse_profile(&p0, &w, n as f64) {
        Err(ProfileError::RowSum { row, .. }) => assert_eq!(row, 2),
        other => panic!("expected a row-sum error, got {other:?}"),
    }
}

#[test]
fn sparse_random_feasible() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(9);
    let n = 6;
    let mut base = DMatrix::zeros(n, n);
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = rng.random_range(0.1..1.0);
            base[(i, j)] = v;
            base[(j, i)] = v;
            let q: f64 = rng.random_range(0.2..1.0);
            p[(i, j)] = q;
            p[(j, i)] = q;
        }
    }
    let ds = symmetric_sinkhorn(base).unwrap();
    let d = 3.5;
    let w = (&ds * d).component_div(&p);
    let s = sparse_profile(&p, &w, d).unwrap().dense();
    for x in row_sums(&s) {
        assert!((x - 1.0).abs() < 1e-10);
    }
}

#[test]
fn block_wegner_examples() {
    let p = block_wegner_profile(3, 2, 0.5).unwrap().dense();
    for i in 0..6 {
        let mut row: Vec<f64> = p.row(i).iter().copied().collect();
        row.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(&row[..2], &[0.25, 0.25]);
        assert!(row[2..].iter().all(|v| *v == 0.125));
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
    let p0 = block_wegner_profile(4, 3, 0.0).unwrap().dense();
    for i in 0..12 {
        for j in 0..12 {
            if i / 3 != j / 3 {
                assert_eq!(p0[(i, j)], 0.0);
            }
        }
    }
    let p1 = block_wegner_profile(6, 2, 1.0).unwrap().dense();
    for i in 0..12 {
        assert_eq!(p1[(i, i)], 0.0);
        assert!((p1.row(i).sum() - 1.0).abs() < 1e-15);
    }
    for (d, lam) in [(1, 0.3), (2, 0.3), (2, 1.0)] {
        let q = block_wegner_profile(d, 4, lam).unwrap();
        assert!(q.max_row_defect() < 1e-15 && q.is_symmetric());
    }
}

#[test]
fn regular_graph_examples() {
    let c = regular_graph_profile(&cycle_graph(7), 2).unwrap().dense();
    assert_eq!(c[(0, 1)], 0.5);
    assert_eq!(c[(0, 6)], 0.5);
    assert_eq!(c[(0, 3)], 0.0);
    let k = regular_graph_profile(&complete_graph(5), 4).unwrap().dense();
    assert!(k.iter().enumerate().all(|(i, v)| if i % 6 == 0 { *v == 0.0 } else { *v == 0.25 }));
    let g = random_regular_graph(10, 4, 1).unwrap();
    let p = regular_graph_profile(&g, 4).unwrap().dense();
    for s in row_sums(&p) {
        assert!((s - 1.0).abs() < 1e-15);
    }
    assert!(regular_graph_profile(&cycle_graph(7), 3).is_err());
}

#[test]
fn wishart_examples() {
    let u = wishart_profile(3, 5, WishartBuilder::Uniform).unwrap();
    assert!(u.max_row_defect() < 1e-15 && u.max_col_defect() < 1e-15);
    let sq = wishart_profile(4, 4, WishartBuilder::Uniform).unwrap().transition_matrix();
    for i in 0..8 {
        assert!((sq.row(i).sum() - 1.0).abs() < 1e-15 && (sq.column(i).sum() - 1.0).abs() < 1e-15);
    }
    let b = wishart_profile(2, 4, WishartBuilder::Banded { width: 0.2 }).unwrap();
    let ps = b.transition_matrix();
    for i in 0..6 {
        assert!((ps.row(i).sum() - 1.0).abs() < 1e-12);
    }
    let ps2 = &ps * &ps;
    // Two steps return to the starting side.
    for i in 2..6 {
        let s: f64 = (2..6).map(|j| ps2[(i, j)]).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
    assert!(wishart_profile(5, 4, WishartBuilder::Uniform).is_err());
}

#[test]
fn validation_and_renormalization() {
    let mut m = DMatrix::from_element(3, 3, 1.0 / 3.0);
    m[(0, 0)] += 1e-8;
    let p = VarianceProfile::square(m.clone(), "test").unwrap();
    assert!(p.max_row_defect() < 1e-15);
    m[(0, 0)] += 1e-3;
    assert!(matches!(VarianceProfile::square(m, "test"), Err(ProfileError::RowSum { row: 0, .. })));
    let neg = DMatrix::from_row_slice(2, 2, &[1.5, -0.5, -0.5, 1.5]);
    assert!(VarianceProfile::square(neg, "test").is_err());
}

#[test]
fn json_round_trip() {
    for p in [
        uniform_profile(4).unwrap(),
        band_profile(2, 6, 2.0, BandDensity::Bump).unwrap(),
        wishart_profile(2, 4, WishartBuilder::Banded { width: 0.3 }).unwrap(),
    ] {
        let back = VarianceProfile::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
    let bad = r#"{"kind":"square","n_rows":1,"n_cols":1,"storage":"dense","data":[1.0],"metadata":{"builder":"x"},"extra":1}"#;
    assert!(VarianceProfile::from_json(bad).is_err());
}

proptest! {
    #[test]
    fn square_builders_are_doubly_stochastic(n in 2usize..24, seed in 0u64..1000, lam in 0.0f64..1.0, d in 1usize..5) {
        let profiles = vec![
            uniform_profile(n).unwrap(),
            generalized_wigner_profile(n, 0.5, 2.0, seed).unwrap(),
            block_wegner_profile(d, n, lam).unwrap(),
            band_profile(1, n.max(2), (n as f64 / 3.0).max(1.0), BandDensity::Gaussian).unwrap(),
        ];
        for p in profiles {
            prop_assert!(p.max_row_defect() <= 1e-10);
            prop_assert!(p.symmetry_defect() <= 1e-10);
        }
    }

    #[test]
    fn decoupled_blocks_stay_decoupled(d in 2usize..5, m in 1usize..5, k in 1u32..6) {
        let p = block_wegner_profile(d, m, 0.0).unwrap().dense();
        let pk = (0..k - 1).fold(p.clone(), |acc, _| &acc * &p);
        for i in 0..d * m {
            for j in 0..d * m {
                if i / m != j / m {
                    prop_assert_eq!(pk[(i, j)], 0.0);
                }
            }
        }
    }
}
