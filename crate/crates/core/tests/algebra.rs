mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qubit_uncertainty::pauli::{self, xi_gram};
use qubit_uncertainty::relations::{
    check_equality, eq19_bound, equality_remainder, estimate_mixedness, eur_check, rur_bound,
    sum_relation, sur_bound, variance_product,
};
use qubit_uncertainty::{
    closed_form, decompose_observable, matrix_to_bloch, mixedness, mixedness_general,
    random_density_matrix, variance, BlochVector, Error, GeneralState, Mat2, PauliObservable,
    QubitState,
};

fn bloch() -> impl Strategy<Value = BlochVector> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..=1.0f64)
        .prop_filter("nonzero direction", |(x, y, z, _)| {
            x * x + y * y + z * z > 1e-6
        })
        .prop_map(|(x, y, z, r)| {
            let n = (x * x + y * y + z * z).sqrt();
            BlochVector::new(r * x / n, r * y / n, r * z / n).unwrap()
        })
}

fn pure_bloch() -> impl Strategy<Value = BlochVector> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero direction", |(x, y, z)| {
            x * x + y * y + z * z > 1e-6
        })
        .prop_map(|(x, y, z)| {
            let n = (x * x + y * y + z * z).sqrt();
            BlochVector::new(x / n, y / n, z / n).unwrap()
        })
}

fn coeffs() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-5.0..5.0f64)
}

fn observable() -> impl Strategy<Value = PauliObservable> {
    coeffs().prop_map(PauliObservable::from_coefficients)
}

fn hermitian() -> impl Strategy<Value = Mat2> {
    (coeffs(), -5.0..5.0f64).prop_map(|(c, im)| {
        let re = |v: f64| Complex64::new(v, 0.0);
        Mat2::new(
            re(c[0]),
            Complex64::new(c[1], im),
            Complex64::new(c[1], -im),
            re(c[2] + c[3]),
        )
    })
}

fn scale(a: &PauliObservable, b: &PauliObservable) -> f64 {
    let n = |o: &PauliObservable| o.coefficients().iter().map(|c| c.abs()).sum::<f64>();
    (1.0 + n(a) * n(b)).powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn bloch_round_trip(p in bloch()) {
        let back = matrix_to_bloch(&QubitState::from(p).matrix()).unwrap();
        for (u, v) in back.as_array().iter().zip(p.as_array()) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn matrix_agrees_with_hand_expansion(p in bloch()) {
        let m = QubitState::from(p).matrix();
        let oracle = common::rho(p.as_array());
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((m[(i, j)] - oracle[i][j]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn decompose_round_trip(m in hermitian()) {
        let o = decompose_observable(&m).unwrap();
        prop_assert!(pauli::max_abs_diff(&o.matrix(), &m) <= 1e-12);
    }

    #[test]
    fn variance_ignores_identity_shift(p in bloch(), o in observable(), c in -10.0..10.0f64) {
        let s = QubitState::from(p);
        prop_assert!((variance(&s, &o.shifted(c)) - variance(&s, &o)).abs() <= 1e-12 * scale(&o, &o));
    }

    #[test]
    fn mixedness_matches_purity(p in bloch()) {
        let s = QubitState::from(p);
        let purity = common::purity(&common::rho(p.as_array()));
        prop_assert!((mixedness(&s) - (1.0 - purity)).abs() <= 1e-12);
        prop_assert!((closed_form::mixedness(&p) - (1.0 - purity)).abs() <= 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_matrices(p in bloch(), a in observable(), b in observable()) {
        let tol = 1e-12 * scale(&a, &b);
        let (r, am, bm) = (
            common::rho(p.as_array()),
            common::obs(a.coefficients()),
            common::obs(b.coefficients()),
        );
        prop_assert!((closed_form::variance(&p, &a) - common::variance(&r, &am)).abs() <= tol);
        prop_assert!(
            (closed_form::commutator_term(&p, &a, &b) - common::commutator_term(&r, &am, &bm)).abs()
                <= tol
        );
        // The printed expansion is the unsquared covariance; compare after squaring.
        let unsquared = closed_form::anticommutator_unsquared(&p, &a, &b);
        prop_assert!(
            (unsquared * unsquared - common::anticommutator_term(&r, &am, &bm)).abs() <= tol
        );
        prop_assert!(
            (closed_form::anticommutator_term(&p, &a, &b) - common::anticommutator_term(&r, &am, &bm))
                .abs()
                <= tol
        );
    }

    #[test]
    fn trace_identities(a in observable(), b in observable()) {
        let tol = 1e-12 * scale(&a, &b);
        let (am, bm) = (common::obs(a.coefficients()), common::obs(b.coefficients()));
        prop_assert!((closed_form::trace(&a) - common::tr(&am).re).abs() <= tol);
        prop_assert!((closed_form::trace_square(&a) - common::tr(&common::mul(&am, &am)).re).abs() <= tol);
        prop_assert!((closed_form::trace_product(&a, &b) - common::tr(&common::mul(&am, &bm)).re).abs() <= tol);
        prop_assert!((closed_form::xi(&a, &b) - common::xi(&am, &bm)).abs() <= tol);
        prop_assert!((pauli::xi(&a, &b) - common::xi(&am, &bm)).abs() <= tol);
    }

    #[test]
    fn gram_is_non_negative(a in observable(), b in observable()) {
        prop_assert!(xi_gram(&a, &b) >= -1e-12 * scale(&a, &b));
    }

    #[test]
    fn equality_holds(p in bloch(), a in observable(), b in observable()) {
        let s = QubitState::from(p);
        prop_assert!(check_equality(&s, &a, &b).abs() < 1e-10);
        let (lhs, rhs) = common::equality_sides(p.as_array(), a.coefficients(), b.coefficients());
        prop_assert!((variance_product(&s, &a, &b) - lhs).abs() < 1e-10);
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn bounds_are_ordered(p in bloch(), a in observable(), b in observable()) {
        let s = QubitState::from(p);
        let product = variance_product(&s, &a, &b);
        let sur = sur_bound(&s, &a, &b);
        prop_assert!(product >= sur - 1e-10);
        prop_assert!(sur >= rur_bound(&s, &a, &b) - 1e-10);
        prop_assert!(product >= eq19_bound(&s, &a, &b) - 1e-10);
        prop_assert!(equality_remainder(&s, &a, &b) >= -1e-12);
    }

    #[test]
    fn pure_states_saturate_sur(p in pure_bloch(), a in observable(), b in observable()) {
        let s = QubitState::from(p);
        prop_assert!(equality_remainder(&s, &a, &b).abs() <= 1e-12 * scale(&a, &b));
        prop_assert!((variance_product(&s, &a, &b) - sur_bound(&s, &a, &b)).abs() < 1e-10);
    }

    #[test]
    fn estimator_is_exact_and_pair_independent(
        p in bloch(),
        a in observable(),
        b in observable(),
    ) {
        prop_assume!(xi_gram(&a, &b) > 1e-3);
        let s = QubitState::from(p);
        let reference = estimate_mixedness(&s, &PauliObservable::sigma_x(), &PauliObservable::sigma_z()).unwrap();
        prop_assert!((reference - mixedness(&s)).abs() < 1e-10);
        let other = estimate_mixedness(&s, &a, &b).unwrap();
        // The pair's Gram determinant sets how strongly rounding is amplified.
        let tol = 1e-10 * (scale(&a, &b) / xi_gram(&a, &b)).max(1.0);
        prop_assert!((other - reference).abs() < tol, "{} vs {}", other, reference);
    }

    #[test]
    fn collinear_pairs_are_rejected(p in bloch(), a in observable(), k in -3.0..3.0f64, c in -3.0..3.0f64) {
        let b = a.scaled(k).shifted(c);
        prop_assert_eq!(
            estimate_mixedness(&QubitState::from(p), &a, &b),
            Err(Error::CollinearObservables)
        );
    }

    #[test]
    fn sum_relation_holds(p in bloch(), a in observable(), b in observable()) {
        let (lhs, bound) = sum_relation(&QubitState::from(p), &a, &b);
        prop_assert!(lhs >= bound - 1e-10);
    }

    #[test]
    fn entropic_relation_holds(p in bloch(), a in observable(), b in observable()) {
        prop_assume!(!a.is_degenerate() && !b.is_degenerate());
        let eur = eur_check(&QubitState::from(p), &a, &b).unwrap();
        prop_assert!(eur.entropy_sum >= eur.bound - 1e-10);
        let mub = eur_check(
            &QubitState::from(p),
            &PauliObservable::sigma_x(),
            &PauliObservable::sigma_z(),
        )
        .unwrap();
        prop_assert!(mub.entropy_sum >= 1.0 - 1e-10);
    }
}

fn general_purity(g: &GeneralState) -> f64 {
    let m = g.matrix();
    let mut sum = 0.0;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            sum += m[(i, j)].norm_sqr();
        }
    }
    sum
}

#[test]
fn mixedness_is_concave_in_every_dimension() {
    for dim in 2..=4 {
        let mut worst = f64::INFINITY;
        for k in 0..10_000u64 {
            let a = random_density_matrix(3 * k, dim).unwrap();
            let b = random_density_matrix(3 * k + 1, dim).unwrap();
            let x = (k as f64 + 0.5) / 10_000.0;
            let mix = GeneralState::mix(&a, &b, x).unwrap();
            let gap = mixedness_general(&mix)
                - x * mixedness_general(&a)
                - (1.0 - x) * mixedness_general(&b);
            worst = worst.min(gap);
        }
        assert!(worst >= -1e-12, "d = {dim}: worst gap {worst}");
    }
}

#[test]
fn general_mixedness_matches_sum_of_squares() {
    for dim in 2..=5 {
        for seed in 0..200 {
            let g = random_density_matrix(seed, dim).unwrap();
            let m = mixedness_general(&g);
            assert!((m - (1.0 - general_purity(&g))).abs() < 1e-12);
            assert!(m >= -1e-12 && m <= (dim as f64 - 1.0) / dim as f64 + 1e-12);
        }
    }
}

#[test]
fn orthogonal_mixture_in_four_dimensions() {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(2, 2)] = Complex64::new(0.5, 0.0);
    let g = GeneralState::new(m).unwrap();
    let eigen_purity: f64 = g.eigenvalues().iter().map(|l| l * l).sum();
    assert!((mixedness_general(&g) - (1.0 - eigen_purity)).abs() < 1e-15);
    assert!((mixedness_general(&g) - 0.5).abs() < 1e-15);
}
