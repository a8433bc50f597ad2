use num_complex::Complex64;
use oplaw::harness::gen::{gen_matrix, gen_weights, MatrixKind};
use oplaw::harness::rng::Stream;
use oplaw::identities::{
    generalized_parallelogram, lemma_parallelogram, sum_of_squares_identity, WeightConstraint,
};
use oplaw::inequalities::{schatten_weighted_ineq, superadditivity_margins, RequiredSign, ScalarFn};
use oplaw::linalg::{abs_op, apply_scalar_fn, hermitian_eig, CMatrix};
use oplaw::norms::{norm, NormSpec};
use proptest::prelude::*;

const TAU: f64 = 1e-10;

fn draw(kind: MatrixKind, dim: usize, seed: u64, role: &str) -> CMatrix {
    gen_matrix(kind, dim, &mut Stream::for_role(seed, "props", dim, 0, 0, role)).unwrap()
}

fn family(dim: usize, n: usize, seed: u64, prefix: &str) -> Vec<CMatrix> {
    (0..n).map(|i| draw(MatrixKind::Ginibre, dim, seed, &format!("{prefix}{i}"))).collect()
}

fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).frobenius_norm() / (1.0 + a.frobenius_norm() + b.frobenius_norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..12) {
        let h = draw(MatrixKind::Hermitian, dim, seed, "H");
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!((&eig.reconstruct() - &h).frobenius_norm() <= 1e-12 * h.frobenius_norm().max(1.0));
        let v = &eig.vectors;
        prop_assert!((&(&v.adjoint() * v) - &CMatrix::identity(dim)).frobenius_norm() <= 1e-12);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn abs_of_psd_is_itself(seed in any::<u64>(), dim in 1usize..8) {
        let p = draw(MatrixKind::Psd, dim, seed, "P");
        prop_assert!(rel_diff(&abs_op(&p).unwrap(), &p) <= 1e-12);
    }

    #[test]
    fn spectral_maps_compose(seed in any::<u64>(), dim in 1usize..8) {
        let p = draw(MatrixKind::Psd, dim, seed, "P");
        let root = apply_scalar_fn(&p, f64::sqrt).unwrap();
        prop_assert!(rel_diff(&(&root * &root), &p) <= 1e-12);
        let cube = apply_scalar_fn(&p, |t| t * t * t).unwrap();
        prop_assert!(rel_diff(&cube, &(&(&p * &p) * &p)) <= 1e-12);
    }

    #[test]
    fn spectral_map_commutes_with_unitary_conjugation(seed in any::<u64>(), dim in 1usize..8) {
        let p = draw(MatrixKind::Psd, dim, seed, "P");
        let u = draw(MatrixKind::Unitary, dim, seed, "U");
        let conj = |m: &CMatrix| &(&u * m) * &u.adjoint();
        let f = |t: f64| t.powf(1.5);
        let lhs = apply_scalar_fn(&conj(&p).real_part(), f).unwrap();
        let rhs = conj(&apply_scalar_fn(&p, f).unwrap());
        prop_assert!(rel_diff(&lhs, &rhs) <= 1e-11);
    }

    #[test]
    fn schatten_norms_decrease_in_p(seed in any::<u64>(), dim in 1usize..8, p in 0.3f64..6.0, dp in 0.0f64..4.0) {
        let a = draw(MatrixKind::Ginibre, dim, seed, "A");
        let small = norm(&a, NormSpec::Schatten(p)).unwrap();
        let large = norm(&a, NormSpec::Schatten(p + dp)).unwrap();
        prop_assert!(large <= small * (1.0 + 1e-12));
        prop_assert!(norm(&a, NormSpec::Operator).unwrap() <= large * (1.0 + 1e-12));
    }

    #[test]
    fn norms_satisfy_the_triangle_inequality(seed in any::<u64>(), dim in 1usize..8) {
        let a = draw(MatrixKind::Ginibre, dim, seed, "A");
        let b = draw(MatrixKind::Ginibre, dim, seed, "B");
        for spec in NormSpec::test_family(dim) {
            let sum = norm(&(&a + &b), spec).unwrap();
            let bound = norm(&a, spec).unwrap() + norm(&b, spec).unwrap();
            prop_assert!(sum <= bound * (1.0 + 1e-12), "{spec}: {sum} > {bound}");
        }
    }

    #[test]
    fn weighted_identities_hold(seed in any::<u64>(), dim in 1usize..6, n in 1usize..7) {
        let a = family(dim, n, seed, "A");
        let b = family(dim, n, seed, "B");
        let mut s = Stream::for_role(seed, "props", dim, n, 0, "r");
        let free = gen_weights(n, WeightConstraint::None, &mut s).unwrap();
        prop_assert!(generalized_parallelogram(&a, &b, &free).unwrap().residual <= TAU);
        let normalized = gen_weights(n, WeightConstraint::SumReciprocalOne, &mut s).unwrap();
        prop_assert!(sum_of_squares_identity(&a, &normalized).unwrap().residual <= TAU);
        prop_assert!(lemma_parallelogram(&a[0], &b[0]).unwrap().residual <= TAU);
    }

    #[test]
    fn common_phase_leaves_both_sides_unchanged(seed in any::<u64>(), dim in 1usize..6, n in 1usize..5, theta in 0.0f64..6.3) {
        let a = family(dim, n, seed, "A");
        let b = family(dim, n, seed, "B");
        let w = Complex64::from_polar(1.0, theta);
        let rotate = |v: &[CMatrix]| v.iter().map(|m| m.scale(w)).collect::<Vec<_>>();
        let mut s = Stream::for_role(seed, "props", dim, n, 0, "r");
        let r = gen_weights(n, WeightConstraint::None, &mut s).unwrap();
        let plain = generalized_parallelogram(&a, &b, &r).unwrap();
        let turned = generalized_parallelogram(&rotate(&a), &rotate(&b), &r).unwrap();
        prop_assert!(rel_diff(&plain.lhs, &turned.lhs) <= 1e-12);
        prop_assert!(rel_diff(&plain.rhs, &turned.rhs) <= 1e-12);
    }

    #[test]
    fn schatten_margin_sign_follows_the_exponent(seed in any::<u64>(), dim in 1usize..5, n in 1usize..5, p in 0.3f64..5.0) {
        let a = family(dim, n, seed, "A");
        let mut s = Stream::for_role(seed, "props", dim, n, 0, "r");
        let r = gen_weights(n, WeightConstraint::SumReciprocalOne, &mut s).unwrap();
        let m = schatten_weighted_ineq(&a, &r, p).unwrap();
        let expected = if p > 2.0 { RequiredSign::Nonnegative } else if p < 2.0 { RequiredSign::Nonpositive } else { RequiredSign::Zero };
        prop_assert_eq!(m.required_sign, expected);
        prop_assert!(m.pass(TAU), "p = {}: margin {:e}", p, m.normalized());
    }

    #[test]
    fn hinge_above_the_spectrum_is_degenerate(seed in any::<u64>(), dim in 1usize..5, n in 1usize..4) {
        let a: Vec<CMatrix> = (0..n).map(|i| draw(MatrixKind::Psd, dim, seed, &format!("P{i}"))).collect();
        let top: f64 = a.iter().map(|m| norm(m, NormSpec::Operator).unwrap()).sum();
        let g = ScalarFn::hinge(top * 1.01 + 1.0).unwrap();
        for m in superadditivity_margins(&a, &g, &NormSpec::test_family(dim)).unwrap() {
            prop_assert_eq!(m.lhs, 0.0);
            prop_assert_eq!(m.rhs, 0.0);
            prop_assert!(m.pass(TAU));
        }
    }
}
