use irm_diagrams::*;
use irm_ensembles::{assemble_with_sigma, sample_noise, Beta, EntryLaw, Matrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0 / n as f64)
}

fn lazy(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.5 } else { 0.5 / (n - 1) as f64 })
}

fn spike(n: usize, beta: Beta, tau: f64) -> DMatrix<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|i| match beta {
            Beta::Real => Complex64::new(0.4 + 0.15 * i as f64, 0.0),
            Beta::Complex => Complex64::new(0.4 + 0.15 * i as f64, 0.1 * i as f64),
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() * tau)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn catalan_corrections_examples() {
    assert_eq!(catalan_correction(2), rat(0, 1));
    assert_eq!(catalan_correction(4), rat(1, 1));
    assert_eq!(catalan_correction(3), rat(0, 1));
    assert_eq!(b_prime(0), rat(-1, 2));
    assert_eq!(b_prime(2), rat(1, 1));
    assert_eq!(b_prime(4), rat(0, 1));
}

/// The corrections transformed to the first-kind basis collapse to the two
/// nonzero values: `b'_n = Σ_m (−1)^m n/(n−m) binom(n−m, m) b_{n−2m}`.
#[test]
fn corrections_transform_to_b_prime() {
    for n in 1..=24usize {
        let mut acc = rat(0, 1);
        for m in 0..=n / 2 {
            let c = irm_chebyshev::binom(n - m, m);
            let term = BigRational::new(c * n as i64, ((n - m) as i64).into()) * catalan_correction(n - 2 * m);
            acc = if m % 2 == 0 { acc + term } else { acc - term };
        }
        assert_eq!(acc, b_prime(n), "n = {n}");
    }
}

#[test]
fn gluing_counts() {
    assert_eq!(enumerate_gluings(&[4], Beta::Complex, false).unwrap().count(), 3);
    assert_eq!(enumerate_gluings(&[4], Beta::Real, false).unwrap().count(), 12);
    let open: Vec<_> = enumerate_gluings(&[2], Beta::Complex, true).unwrap().filter(|g| g.open.len() == 2).collect();
    assert_eq!(open.len(), 1);
    assert!(open[0].pairs.is_empty());
    for (p, beta, o) in [(vec![6], Beta::Complex, false), (vec![3, 3], Beta::Real, true), (vec![2, 1, 3], Beta::Complex, true)] {
        let n = enumerate_gluings(&p, beta, o).unwrap().count();
        assert_eq!(n as f64, gluing_count(&p, beta, o));
    }
    // (2m−1)!! matchings of 2m sides.
    assert_eq!(enumerate_gluings(&[5, 5], Beta::Complex, false).unwrap().count(), 945);
    assert_eq!(enumerate_gluings(&[3], Beta::Real, false).unwrap().count(), 0);
}

#[test]
fn gluing_budget_refuses_with_estimate() {
    let e = enumerate_gluings(&[7, 7], Beta::Complex, false).err().expect("over budget");
    match e {
        DiagramError::Budget { estimate, .. } => assert_eq!(estimate, 135135.0),
        other => panic!("{other:?}"),
    }
    let e = enumerate_gluings(&[11], Beta::Real, true).err().expect("over budget");
    assert!(matches!(e, DiagramError::Budget { .. }));
    assert!(enumerate_gluings(&[10], Beta::Real, true).is_ok());
    assert!(enumerate_gluings(&[12], Beta::Complex, false).is_ok());
}

#[test]
fn malformed_gluings_are_rejected() {
    let g = RibbonGluing { perimeters: vec![4], open: vec![], pairs: vec![(0, 1, Orientation::Opposite), (1, 2, Orientation::Opposite)], beta: Beta::Complex };
    assert!(matches!(glue(&g), Err(DiagramError::Malformed(_))));
    let g = RibbonGluing { perimeters: vec![2], open: vec![], pairs: vec![(0, 1, Orientation::Same)], beta: Beta::Complex };
    assert!(matches!(glue(&g), Err(DiagramError::Malformed(_))));
    let g = RibbonGluing { perimeters: vec![4], open: vec![], pairs: vec![(0, 1, Orientation::Opposite)], beta: Beta::Real };
    assert!(matches!(glue(&g), Err(DiagramError::Malformed(_))));
}

fn gluing(perims: &[usize], pairs: &[(usize, usize, Orientation)], open: &[usize], beta: Beta) -> RibbonGluing {
    RibbonGluing { perimeters: perims.to_vec(), open: open.to_vec(), pairs: pairs.to_vec(), beta }
}

#[test]
fn glued_surfaces_have_expected_euler_characteristic() {
    use Orientation::*;
    let bigon = glue(&gluing(&[2], &[(0, 1, Opposite)], &[], Beta::Complex)).unwrap();
    assert_eq!((bigon.n_vertices, bigon.edges.len()), (2, 1));
    assert_eq!(bigon.euler_characteristic(), 2);
    let planar = glue(&gluing(&[4], &[(0, 1, Opposite), (2, 3, Opposite)], &[], Beta::Complex)).unwrap();
    assert_eq!(planar.euler_characteristic(), 2);
    let torus = glue(&gluing(&[4], &[(0, 2, Opposite), (1, 3, Opposite)], &[], Beta::Complex)).unwrap();
    assert_eq!(torus.euler_characteristic(), 0);
    // Projective plane: a bigon with its sides glued in the same direction.
    let rp2 = glue(&gluing(&[2], &[(0, 1, Same)], &[], Beta::Real)).unwrap();
    assert_eq!(rp2.euler_characteristic(), 1);
}

#[test]
fn catalan_gluings_contract_to_the_trivial_diagram() {
    use Orientation::*;
    let c = okounkov_contract(&glue(&gluing(&[6], &[(0, 5, Opposite), (1, 2, Opposite), (3, 4, Opposite)], &[], Beta::Complex)).unwrap());
    assert!(c.diagram.is_trivial());
    assert_eq!(c.trees_removed, 3);
    assert_eq!(c.tree_steps, vec![6]);
    assert_eq!(c.diagram.vertices().count, 1);
}

#[test]
fn torus_contracts_to_two_loops() {
    use Orientation::*;
    let c = okounkov_contract(&glue(&gluing(&[4], &[(0, 2, Opposite), (1, 3, Opposite)], &[], Beta::Complex)).unwrap());
    let d = &c.diagram;
    assert_eq!(d.vertices().count, 1);
    assert_eq!(d.n_edges(), 2);
    assert_eq!(d.vertices().ends, vec![(0, 0), (0, 0)]);
    assert_eq!(c.weights, vec![1, 1]);
    assert_eq!(c.face_weights(), vec![4]);
    assert_eq!(d.euler_characteristic(), 0);
    // A tree hanging off the torus changes the weights, not the diagram.
    let with_tree = okounkov_contract(
        &glue(&gluing(&[6], &[(0, 2, Opposite), (1, 3, Opposite), (4, 5, Opposite)], &[], Beta::Complex)).unwrap(),
    );
    assert_eq!(with_tree.trees_removed, 1);
    assert_eq!(with_tree.diagram, c.diagram);
    assert_eq!(with_tree.face_weights()[0] + with_tree.tree_steps[0], 6);
}

#[test]
fn divalent_chains_merge_into_weighted_edges() {
    use Orientation::*;
    // Hexagon glued as a torus with sides (0,3), (1,4), (2,5): a theta graph
    // embedded in the torus has two trivalent vertices.
    let c = okounkov_contract(&glue(&gluing(&[6], &[(0, 3, Opposite), (1, 4, Opposite), (2, 5, Opposite)], &[], Beta::Complex)).unwrap());
    let v = c.diagram.vertices();
    assert_eq!(v.count, 2);
    assert!(v.degrees.iter().all(|&d| d == 3));
    // An open hexagon contracts to a single open loop of weight 6.
    let open = okounkov_contract(&glue(&gluing(&[6], &[], &[0, 1, 2, 3, 4, 5], Beta::Complex)).unwrap());
    assert_eq!(open.diagram.kinds, vec![EdgeKind::Open]);
    assert_eq!(open.weights, vec![6]);
    assert_eq!(open.diagram.boundary_vertices(), 1);
}

#[test]
fn empty_polygon_is_an_isolated_marked_vertex() {
    use Orientation::*;
    let g = glue(&gluing(&[0, 2], &[(0, 1, Same)], &[], Beta::Real)).unwrap();
    assert_eq!(g.n_vertices, 2);
    let c = okounkov_contract(&g);
    assert!(c.diagram.faces[0].is_empty());
    assert!(!c.diagram.is_connected());
    assert_eq!(c.diagram.euler_characteristic(), c.euler_before);
}

fn one_loop() -> Diagram {
    Diagram { faces: vec![vec![Step { edge: 0, forward: true }, Step { edge: 0, forward: true }]], kinds: vec![EdgeKind::Interior] }
}

#[test]
fn frak_f_examples() {
    let n = 3;
    let ctx = EvalContext::new(&uniform(n), None, 8).unwrap();
    let trivial = Diagram { faces: vec![vec![]], kinds: vec![] };
    assert_eq!(ctx.frak_f(&trivial, &[0]).unwrap().re, 3.0);
    assert_eq!(ctx.frak_f(&trivial, &[2]).unwrap().re, 0.0);
    // One vertex with a loop traversed twice: l = 2w and the value is Tr P^w.
    let d = one_loop();
    assert!((ctx.frak_f(&d, &[2]).unwrap().re - 1.0).abs() < 1e-14);
    assert!((ctx.frak_f(&d, &[4]).unwrap().re - 1.0).abs() < 1e-14);
    assert_eq!(ctx.frak_f(&d, &[3]).unwrap().re, 0.0);
    let p = lazy(4);
    let ctx = EvalContext::new(&p, None, 8).unwrap();
    let p3 = &p * &p * &p;
    assert!((ctx.frak_f(&d, &[6]).unwrap().re - p3.trace()).abs() < 1e-14);
}

#[test]
fn f_gamma_examples() {
    let ctx = EvalContext::new(&lazy(3), None, 8).unwrap();
    let d = one_loop();
    assert_eq!(ctx.f_gamma(&d, &[0]).unwrap().re, 0.0);
    // F(n = 6) sums Tr P, Tr P², Tr P³.
    let p = lazy(3);
    let want = p.trace() + (&p * &p).trace() + (&p * &p * &p).trace();
    assert!((ctx.f_gamma(&d, &[6]).unwrap().re - want).abs() < 1e-13);
    assert!((ctx.f_gamma_formula(&d, &[6]).unwrap().re - want).abs() < 1e-13);
    // With p ≡ 1/N every labeling weighs N^{−|E|}, so F = N^{|V|−|E|} × #weightings.
    let n = 4;
    let ctx = EvalContext::new(&uniform(n), None, 8).unwrap();
    let (set, _) = diagram_set(&[6], Beta::Real, false).unwrap();
    for d in set.keys().filter(|d| !d.is_trivial()) {
        let v = d.vertices().count as i32;
        let e = d.n_edges() as i32;
        let mut count = 0usize;
        for w in 0..(6usize.pow(e as u32)) {
            let ws: Vec<usize> = (0..e).map(|i| 1 + w / 6usize.pow(i as u32) % 6).collect();
            let s: usize = d.faces[0].iter().map(|st| ws[st.edge]).sum();
            if s <= 6 && s % 2 == 0 {
                count += 1;
            }
        }
        let want = (n as f64).powi(v - e) * count as f64;
        assert!((ctx.f_gamma(d, &[6]).unwrap().re - want).abs() < 1e-12, "{}", d.code());
    }
}

#[test]
fn open_edges_vanish_without_deformation() {
    let d = Diagram { faces: vec![vec![Step { edge: 0, forward: true }]], kinds: vec![EdgeKind::Open] };
    let ctx = EvalContext::new(&uniform(3), None, 4).unwrap();
    assert_eq!(ctx.frak_f(&d, &[1]).unwrap(), Complex64::default());
    let a = spike(3, Beta::Complex, 0.9);
    let ctx = EvalContext::new(&uniform(3), Some(&a), 4).unwrap();
    let a3 = &a * &a * &a;
    assert!((ctx.frak_f(&d, &[3]).unwrap() - a3.trace()).norm() < 1e-14);
}

#[test]
fn bad_inputs_are_domain_errors() {
    let asym = DMatrix::from_row_slice(2, 2, &[0.5, 0.4, 0.6, 0.5]);
    assert!(matches!(EvalContext::new(&asym, None, 2), Err(DiagramError::Domain(_))));
    let mut a = spike(2, Beta::Complex, 1.0);
    a[(0, 1)] += Complex64::new(0.0, 0.3);
    assert!(matches!(EvalContext::new(&uniform(2), Some(&a), 2), Err(DiagramError::Domain(_))));
    let ctx = EvalContext::new(&uniform(2), None, 2).unwrap();
    assert!(ctx.frak_f(&one_loop(), &[4]).is_err());
    assert!(wick_moment(&[2], &uniform(2), Some(&spike(2, Beta::Complex, 1.0)), Beta::Real).is_err());
    assert!(matches!(wick_moment(&[6, 6], &uniform(5), None, Beta::Real), Err(DiagramError::Budget { .. })));
}

#[test]
fn wick_examples() {
    assert_eq!(wick_moment(&[1], &uniform(3), None, Beta::Real).unwrap().re, 0.0);
    assert!((wick_moment(&[2], &uniform(2), None, Beta::Real).unwrap().re - 3.0).abs() < 1e-15);
    assert!((wick_moment(&[2], &uniform(2), None, Beta::Complex).unwrap().re - 2.0).abs() < 1e-15);
    assert_eq!(wick_moment(&[0, 0], &uniform(3), None, Beta::Real).unwrap().re, 9.0);
    // E Tr (H + A)² = E Tr H² + Tr A².
    let p = lazy(3);
    let a = spike(3, Beta::Complex, 0.7);
    let got = wick_moment(&[2], &p, Some(&a), Beta::Complex).unwrap().re;
    assert!((got - (p.sum() + (&a * &a).trace().re)).abs() < 1e-14);
}

/// Sampled averages of trace products agree with the oracle.
#[test]
fn wick_oracle_matches_monte_carlo() {
    let n = 3;
    let p = lazy(n);
    let sigma = p.map(f64::sqrt);
    for beta in [Beta::Real, Beta::Complex] {
        let a = spike(n, beta, 0.8);
        let def = match beta {
            Beta::Real => Matrix::Real(a.map(|z| z.re)),
            Beta::Complex => Matrix::Complex(a.clone()),
        };
        for perims in [vec![4], vec![3, 1], vec![2, 2]] {
            let reps = 40_000;
            let (mut s, mut s2) = (0.0, 0.0);
            for r in 0..reps {
                let w = sample_noise(n, EntryLaw::Gaussian, beta, 77, r).unwrap();
                let x = assemble_with_sigma(&sigma, &w, Some(&def)).unwrap().to_complex();
                let v: f64 = perims.iter().map(|&m| x.pow(m as u32).trace().re).product();
                s += v;
                s2 += v * v;
            }
            let mean = s / reps as f64;
            let se = ((s2 / reps as f64 - mean * mean) / reps as f64).sqrt();
            let want = wick_moment(&perims, &p, Some(&a), beta).unwrap().re;
            assert!((mean - want).abs() < 5.0 * se, "{beta:?} {perims:?}: {mean} ± {se} vs {want}");
        }
    }
}

fn grid_profiles(n: usize) -> [DMatrix<f64>; 2] {
    [uniform(n), lazy(n)]
}

#[test]
fn ribbon_expansion_small_grid() {
    for n in [2, 3] {
        for p in grid_profiles(n) {
            for beta in [Beta::Real, Beta::Complex] {
                let a = spike(n, beta, 0.9);
                for deform in [None, Some(&a)] {
                    for ms in [vec![1], vec![2], vec![3], vec![4], vec![5], vec![6], vec![2, 2], vec![3, 3], vec![2, 4]] {
                        let c = verify_ribbon(&ms, &p, deform, beta).unwrap();
                        assert!(c.passed, "{beta:?} N={n} {ms:?}: {} vs {}", c.lhs, c.rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn chebyshev_expansion_small_grid() {
    for n in [2, 3] {
        for p in grid_profiles(n) {
            for beta in [Beta::Real, Beta::Complex] {
                let a = spike(n, beta, 0.9);
                for deform in [None, Some(&a)] {
                    for ns in [vec![0], vec![1], vec![2], vec![3], vec![5], vec![6], vec![0, 3], vec![2, 2], vec![3, 3]] {
                        let c = verify_chebyshev(&ns, &p, deform, beta).unwrap();
                        assert!(c.passed, "{beta:?} N={n} {ns:?}: {} vs {}", c.lhs, c.rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn cumulants_come_from_connected_diagrams() {
    let n = 3;
    for p in grid_profiles(n) {
        for beta in [Beta::Real, Beta::Complex] {
            let a = spike(n, beta, 0.9);
            for deform in [None, Some(&a)] {
                for ns in [vec![2, 2], vec![3, 3], vec![1, 2, 1]] {
                    let c = verify_cumulant(&ns, &p, deform, beta).unwrap();
                    assert!(c.passed, "{beta:?} {ns:?}: {} vs {}", c.lhs, c.rhs);
                    assert!(c.contributions.iter().all(|d| d.connected));
                }
            }
        }
    }
    // Without connectivity filtering the sum is the moment, not the
    // cumulant, and the two differ.
    let full = verify_chebyshev(&[2, 2], &uniform(3), None, Beta::Real).unwrap();
    let cum = verify_cumulant(&[2, 2], &uniform(3), None, Beta::Real).unwrap();
    assert!((full.rhs - cum.rhs).abs() > 0.5);
}

#[test]
fn first_kind_expansion_needs_positive_orders() {
    let p = lazy(3);
    for ns in [vec![1], vec![2], vec![4], vec![6], vec![2, 3], vec![1, 1]] {
        let c = verify_chebyshev_t(&ns, &p, None, Beta::Real).unwrap();
        assert!(c.passed, "{ns:?}: {} vs {}", c.lhs, c.rhs);
    }
    let zero = verify_chebyshev_t(&[0], &p, None, Beta::Real).unwrap();
    assert!((zero.lhs - 4.5).abs() < 1e-12 && (zero.rhs - 3.0).abs() < 1e-12);
    assert!(!zero.passed);
}

#[test]
fn verify_expansions_reports_all_three() {
    let r = verify_expansions(&[2, 2], &lazy(3), None, Beta::Real).unwrap();
    assert_eq!(r.checks.len(), 3);
    assert!(r.passed);
    assert!(r.checks.iter().all(|c| !c.contributions.is_empty()));
}

#[test]
fn perimeter_n_already_contains_smaller_diagrams() {
    for beta in [Beta::Real, Beta::Complex] {
        for n in [4usize, 5, 6] {
            let (big, _) = diagram_set(&[n], beta, true).unwrap();
            for m in (n % 2..n).step_by(2) {
                let (small, _) = diagram_set(&[m], beta, true).unwrap();
                assert!(small.keys().all(|d| big.contains_key(d)), "{beta:?} {m} ⊄ {n}");
            }
        }
    }
}

#[test]
fn open_edges_match_boundary_vertices() {
    for beta in [Beta::Real, Beta::Complex] {
        for p in [vec![6], vec![3, 3], vec![2, 2, 2]] {
            let (set, _) = diagram_set(&p, beta, true).unwrap();
            for d in set.keys().filter(|d| d.has_open()) {
                assert_eq!(d.n_open(), d.boundary_vertices(), "{}", d.code());
            }
        }
    }
}

#[test]
fn orientable_gluings_give_orientable_diagrams() {
    // χ is even on closed orientable surfaces; all complex diagrams without
    // open edges come from such surfaces.
    let (set, _) = diagram_set(&[8], Beta::Complex, false).unwrap();
    assert!(set.keys().all(|d| d.euler_characteristic() % 2 == 0));
    let (set, _) = diagram_set(&[6], Beta::Real, false).unwrap();
    assert!(set.keys().any(|d| d.euler_characteristic() % 2 != 0));
}

#[test]
fn f_dual_paths_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pool = vec![];
    for (p, beta) in [(vec![6], Beta::Real), (vec![3, 3], Beta::Complex), (vec![2, 4], Beta::Real), (vec![5], Beta::Complex)] {
        let (set, _) = diagram_set(&p, beta, true).unwrap();
        pool.extend(set.into_keys().map(|d| (d, p.clone(), beta)));
    }
    for _ in 0..50 {
        let (d, p, beta) = &pool[rng.random_range(0..pool.len())];
        let n = rng.random_range(2..=4usize);
        let prof = if rng.random_bool(0.5) { uniform(n) } else { lazy(n) };
        let a = spike(n, *beta, rng.random_range(0.2..1.2));
        let ns: Vec<usize> = p.iter().map(|&m| m + 2 * rng.random_range(0..2usize)).collect();
        let ctx = EvalContext::new(&prof, Some(&a), 8).unwrap();
        ctx.f_gamma_checked(d, &ns, 1e-10).unwrap();
    }
}

#[test]
fn envelope_holds_for_mixing_profiles() {
    // Uniform: t_N = 1 and γ = 1.
    for beta in [Beta::Real, Beta::Complex] {
        let r = envelope_check(&[6], &uniform(4), beta, 1.0, 1).unwrap();
        assert!(r.cases > 0 && r.violations == 0, "{r:?}");
        let r = envelope_check(&[3, 3], &uniform(3), beta, 1.0, 1).unwrap();
        assert_eq!(r.violations, 0, "{r:?}");
    }
    let n = 4;
    let prof = irm_profiles::generalized_wigner_profile(n, 0.5, 2.0, 5).unwrap();
    let mix = irm_markov::check_mixing(&prof, 2, 3.0, 0.05, 40).unwrap();
    assert!(mix.b1_pass);
    let r = envelope_check(&[6], &prof.dense(), Beta::Real, mix.gamma_observed, 2).unwrap();
    assert_eq!(r.violations, 0, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Pair order and the order within a pair carry no information.
    #[test]
    fn canonical_form_ignores_pair_presentation(idx in 0usize..2000, seed in 0u64..1000) {
        let all: Vec<RibbonGluing> = enumerate_gluings(&[3, 3], Beta::Real, true).unwrap().collect();
        let g = &all[idx % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = g.clone();
        for i in (1..h.pairs.len()).rev() {
            let j = rng.random_range(0..=i);
            h.pairs.swap(i, j);
        }
        for p in h.pairs.iter_mut() {
            if rng.random_bool(0.5) {
                *p = (p.1, p.0, p.2);
            }
        }
        let a = okounkov_contract(&glue(g).unwrap());
        let b = okounkov_contract(&glue(&h).unwrap());
        prop_assert_eq!(&a.diagram, &b.diagram);
        prop_assert_eq!(&a.weights, &b.weights);
    }

    /// V − E + F survives contraction and weights are conserved.
    #[test]
    fn contraction_invariants(idx in 0usize..20000) {
        let all: Vec<RibbonGluing> = enumerate_gluings(&[4, 3, 1], Beta::Real, true).unwrap().collect();
        let g = &all[idx % all.len()];
        let r = glue(g).unwrap();
        let c = okounkov_contract(&r);
        prop_assert_eq!(c.diagram.euler_characteristic(), r.euler_characteristic());
        let fw = c.face_weights();
        for j in 0..3 {
            prop_assert_eq!(fw[j] + c.tree_steps[j], g.perimeters[j]);
        }
        prop_assert!(c.diagram.satisfies_degree_bounds());
        prop_assert_eq!(c.tree_steps.iter().sum::<usize>(), 2 * c.trees_removed);
    }

    /// Odd total perimeter cannot be covered by interior edges alone.
    #[test]
    fn parity_forces_zero(n in 2usize..5, m in 0usize..3) {
        let (set, _) = diagram_set(&[4], Beta::Real, false).unwrap();
        let ctx = EvalContext::new(&lazy(n), None, 7).unwrap();
        for d in set.keys() {
            prop_assert_eq!(ctx.f_gamma(d, &[2 * m + 1]).unwrap(), Complex64::default());
        }
    }
}
