//! Property tests for the algebraic identities the linear-algebra layer and
//! the Liouville construction are required to satisfy.

use proptest::prelude::*;

use qsl_core::eigen::spectral_norm;
use qsl_core::expm::expm;
use qsl_core::lindblad::{apply_generator, LindbladGenerator};
use qsl_core::liouville::{build_superoperator, devectorize, vectorize, LiouvilleVector};
use qsl_core::matrix::{ComplexMatrix, C64};

fn matrix_strategy(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(-scale..scale, 2 * n * n).prop_map(move |raw| {
        let entries = raw
            .chunks(2)
            .map(|pair| C64::new(pair[0], pair[1]))
            .collect();
        ComplexMatrix::new(n, n, entries).unwrap()
    })
}

fn hermitian_strategy(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    matrix_strategy(n, scale).prop_map(|m| m.add(&m.adjoint()).unwrap().scale_re(0.5))
}

proptest! {
    #[test]
    fn kron_mixed_product(
        a in matrix_strategy(2, 2.0),
        b in matrix_strategy(2, 2.0),
        c in matrix_strategy(2, 2.0),
        d in matrix_strategy(2, 2.0),
    ) {
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn spectral_norm_is_multiplicative_over_kron(
        a in matrix_strategy(2, 3.0),
        b in matrix_strategy(3, 3.0),
    ) {
        let product = spectral_norm(&a.kron(&b)).unwrap();
        let separate = spectral_norm(&a).unwrap() * spectral_norm(&b).unwrap();
        prop_assert!((product - separate).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_below_hs_norm(a in matrix_strategy(4, 5.0)) {
        prop_assert!(spectral_norm(&a).unwrap() <= a.hs_norm() + 1e-12);
    }

    #[test]
    fn adjoint_is_an_involution(a in matrix_strategy(3, 10.0)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn expm_of_negation_is_inverse(a in matrix_strategy(3, 1.0)) {
        // hs_norm ≤ 5 given entries in (-1, 1): 3x3 has at most √18 < 5.
        let e = expm(&a).unwrap();
        let inv = expm(&a.scale_re(-1.0)).unwrap();
        let prod = e.matmul(&inv).unwrap();
        prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-10);
    }

    #[test]
    fn vectorization_round_trips(a in matrix_strategy(3, 4.0)) {
        let v = vectorize(&a).unwrap();
        // ⟨v|v⟩ = tr(a†a)
        let gram_trace = a.adjoint().matmul(&a).unwrap().trace().unwrap().re;
        prop_assert_eq!(devectorize(&v), a);
        prop_assert!((v.norm_sqr() - gram_trace).abs() < 1e-10);
    }

    #[test]
    fn superoperator_reproduces_the_master_equation(
        h in hermitian_strategy(3, 1.5),
        a1 in matrix_strategy(3, 1.0),
        rho_raw in hermitian_strategy(3, 1.0),
    ) {
        let gen = LindbladGenerator::new(h, vec![a1]).unwrap();
        let direct = apply_generator(&gen, &rho_raw, 0.0).unwrap();
        let superop = build_superoperator(&gen, 0.0).unwrap();
        let hv = superop.matrix().matvec(vectorize(&rho_raw).unwrap().elems()).unwrap();
        let via = devectorize(
            &LiouvilleVector::new(hv.into_iter().map(|z| z * C64::new(0.0, -1.0)).collect())
                .unwrap(),
        );
        prop_assert!(via.max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn skew_part_ignores_the_hamiltonian(
        h in hermitian_strategy(2, 2.0),
        a1 in matrix_strategy(2, 1.5),
    ) {
        let with_h = LindbladGenerator::new(h, vec![a1.clone()]).unwrap();
        let without = LindbladGenerator::new(ComplexMatrix::zeros(2, 2), vec![a1]).unwrap();
        let s1 = build_superoperator(&with_h, 0.0).unwrap().skew_part();
        let s2 = build_superoperator(&without, 0.0).unwrap().skew_part();
        prop_assert!(s1.max_abs_diff(&s2).unwrap() < 1e-12);
    }
}
