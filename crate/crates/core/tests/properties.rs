mod common;

use common::props::*;
use common::c;
use polyspectra_core::pseudospectrum::GridSpec;
use polyspectra_core::WeightPolynomial;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn assert_ok(check: Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn horner_agrees_with_power_sum(seed in any::<u64>(), n in 1usize..5, m in 0usize..4, re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let z = c(re, im);
        prop_assume!(z.norm() <= 10.0);
        let p = random_poly(&mut rng(seed), n, m);
        assert_ok(horner_matches_naive(&p, z))?;
    }

    #[test]
    fn eigenvalues_are_roots(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        assert_ok(eigenvalues_consistent(&random_poly(&mut rng(seed), n, m)))?;
    }

    #[test]
    fn gradient_matches_central_differences(seed in any::<u64>(), n in 1usize..5, m in 1usize..4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, m);
        let z = random_point(&mut r, 2.0);
        gradient_matches_differences(&p, z).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn smallest_singular_value_is_weyl_continuous(seed in any::<u64>(), n in 1usize..5, m in 0usize..4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, m);
        let (a, b) = (random_point(&mut r, 3.0), random_point(&mut r, 3.0));
        assert_ok(weyl_continuity(&p, a, b))?;
    }

    #[test]
    fn level_function_decreases_in_eps(seed in any::<u64>(), e1 in 1e-6..10.0f64, e2 in 1e-6..10.0f64) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 2);
        let w = random_weight(&mut r, 2);
        let z = random_point(&mut r, 3.0);
        assert_ok(f_monotone(&p, &w, z, e1, e2))?;
    }

    #[test]
    fn qhat_qtilde_properties(seed in any::<u64>(), n in 1usize..4, m in 1usize..3, unit in any::<bool>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, m);
        let w = if unit { WeightPolynomial::unit() } else { random_weight(&mut r, m) };
        let mu = random_point(&mut r, 2.0);
        let dist = polyspectra_core::perturbations::distance_to_eigenvalue(&p, &w, mu);
        prop_assume!(!dist.on_spectrum);
        assert_ok(perturbation_properties(&mut r, &p, &w, mu))?;
    }

    #[test]
    fn qhat_properties_with_repeated_singular_value(seed in any::<u64>()) {
        // U·diag(q, q, r)·V has a double smallest singular value wherever |q| < |r|
        let mut r = rng(seed);
        let q = [random_complex(&mut r), random_complex(&mut r), c(1.0, 0.0)];
        let s = [c(10.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let base = polyspectra_core::MatrixPolynomial::diagonal(&[q.to_vec(), q.to_vec(), s.to_vec()]).unwrap();
        let (u, v) = (random_unitary(&mut r, 3), random_unitary(&mut r, 3));
        let p = polyspectra_core::MatrixPolynomial::new(base.coeffs().iter().map(|x| &u * x * &v).collect()).unwrap();
        let mu = random_point(&mut r, 1.0);
        let t = polyspectra_core::svdcore::singular_triplets(&p, mu);
        prop_assume!(t.values[1] - t.values[2] < 1e-10 * t.values[0] && t.values[0] - t.values[1] > 1e-3);
        prop_assume!(t.smallest() > 1e-6);
        assert_ok(perturbation_properties(&mut r, &p, &WeightPolynomial::unit(), mu))?;
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn component_count_bounded_and_nested(seed in any::<u64>(), n in 1usize..4, m in 1usize..3) {
        let p = random_poly(&mut rng(seed), n, m);
        let scale = p.max_norm();
        let levels: Vec<f64> = (0..10).map(|k| scale * 10f64.powf(-3.0 + 2.5 * k as f64 / 9.0)).collect();
        assert_ok(component_structure(&p, &WeightPolynomial::unit(), &levels, 161))?;
    }

    #[test]
    fn no_strict_minima_off_spectrum(seed in any::<u64>(), n in 1usize..4, m in 1usize..3, unit in any::<bool>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, m);
        let w = if unit { WeightPolynomial::unit() } else { random_weight(&mut r, m) };
        assert_ok(local_minima_near_eigenvalues(&p, &w, 201))?;
    }

    #[test]
    fn ball_members_stay_in_their_components(seed in any::<u64>(), n in 1usize..3, m in 1usize..3) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, m);
        let eps = 0.02 * p.max_norm();
        assert_ok(ball_members_respect_components(&mut r, &p, &WeightPolynomial::unit(), eps, 25, 161))?;
    }

    #[test]
    fn normal_pencil_faults_form_voronoi_diagram(seed in any::<u64>(), k in 3usize..6) {
        assert_ok(normal_pencil_faults_are_voronoi(&mut rng(seed), k))?;
    }

    #[test]
    fn smooth_saddles_are_defective(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 2);
        let w = WeightPolynomial::unit();
        let eigen = p.eigenvalues(None).unwrap();
        prop_assume!(eigen.all_simple());
        let e = &eigen.eigenvalues;
        let (a, b) = (0..e.len())
            .flat_map(|i| ((i + 1)..e.len()).map(move |j| (i, j)))
            .min_by(|&(i, j), &(k, l)| (e[i] - e[j]).norm().total_cmp(&(e[k] - e[l]).norm()))
            .unwrap();
        let window = GridSpec::around(e, 0.5, 1.0, 2, 2).unwrap();
        saddle_is_defective(&p, &w, 0.5 * (e[a] + e[b]), &window).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn smooth_saddles_occur_on_random_quadratics() {
    let w = WeightPolynomial::unit();
    let mut found = 0;
    for seed in 0..20 {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 2);
        let e = p.eigenvalues(None).unwrap().eigenvalues;
        let window = GridSpec::around(&e, 0.5, 1.0, 2, 2).unwrap();
        for i in 0..e.len() {
            for j in (i + 1)..e.len() {
                if saddle_is_defective(&p, &w, 0.5 * (e[i] + e[j]), &window).unwrap() {
                    found += 1;
                }
            }
        }
    }
    assert!(found >= 10, "only {found} smooth saddles found");
}
