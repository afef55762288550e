//! Property-based invariants over randomly generated inputs.

use ndarray::{Array1, Array2};
use proptest::prelude::*;

use semispec_core::cauchy::{build_b, residual_scale, CauchyMethod};
use semispec_core::linalg::{
    eig_decompose, expm, kernel, min_norm_solve, svd, vec_norm, CVector, Cx, Matrix,
    MinNormSolution, Subspace, DEFAULT_CLUSTER_TOL, DEFAULT_RANK_TOL,
};
use semispec_core::local_spectral::{local_spectrum_with, DEFAULT_MEMBERSHIP_TOL};
use semispec_core::semigroup::{evaluate_t, GeneratorSpec};

fn cx_strategy() -> impl Strategy<Value = Cx> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Cx::new(re, im))
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (2usize..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec(cx_strategy(), n * n).prop_map(move |entries| {
            Matrix::from_rows(n, &entries).expect("finite entries")
        })
    })
}

fn vector_strategy(n: usize) -> impl Strategy<Value = CVector> {
    proptest::collection::vec(cx_strategy(), n).prop_map(Array1::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expm_factorizes_over_commuting_pairs(
        a in matrix_strategy(4),
        c0 in cx_strategy(),
        c1 in cx_strategy(),
    ) {
        // B is a polynomial in A, hence commutes with it.
        let b = &a.matmul(&a).scale(c0) + &a.scale(c1);
        let lhs = expm(&(&a + &b)).unwrap();
        let rhs = expm(&a).unwrap().matmul(&expm(&b).unwrap());
        prop_assert!(lhs.fro_dist(&rhs) <= 1e-8 * lhs.norm_fro().max(1.0));
    }

    #[test]
    fn semigroup_cocycle_holds(a in matrix_strategy(4), t in 0.0f64..2.5, s in 0.0f64..2.5) {
        let spec = GeneratorSpec::new("prop", a, "");
        let lhs = evaluate_t(&spec, t + s).unwrap();
        let rhs = evaluate_t(&spec, t).unwrap().matmul(&evaluate_t(&spec, s).unwrap());
        prop_assert!(lhs.fro_dist(&rhs) <= 1e-8 * (1.0 + lhs.norm_2()));
    }

    #[test]
    fn min_norm_solution_avoids_the_kernel(
        a in matrix_strategy(5),
        coeffs in proptest::collection::vec(cx_strategy(), 5),
    ) {
        // Force rank deficiency by zeroing the last row and column, then
        // solve against a right-hand side from the range.
        let n = a.dim();
        let mut arr = a.array().clone();
        for i in 0..n {
            arr[[i, n - 1]] = Cx::new(0.0, 0.0);
            arr[[n - 1, i]] = Cx::new(0.0, 0.0);
        }
        let a = Matrix::new(arr).unwrap();
        let y = Array1::from_vec(coeffs[..n].to_vec());
        let b = a.mul_vec(&y);
        match min_norm_solve(&a, &b, DEFAULT_RANK_TOL).unwrap() {
            MinNormSolution::Solution(x) => {
                prop_assert!(vec_norm(&(&a.mul_vec(&x) - &b)) <= 1e-9 * vec_norm(&b).max(1e-300));
                let ker = kernel(&a, DEFAULT_RANK_TOL).unwrap();
                prop_assert!(ker.residual(&x) >= vec_norm(&x) * (1.0 - 1e-8) - 1e-12);
            }
            MinNormSolution::Inconsistent { residual } => {
                // b was constructed inside the range.
                prop_assert!(residual <= 1e-9 * vec_norm(&b).max(1e-300));
            }
        }
    }

    #[test]
    fn local_spectrum_is_monotone_under_addition(
        a in matrix_strategy(5),
        xy in proptest::collection::vec(cx_strategy(), 10),
    ) {
        let n = a.dim();
        let decomp = eig_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        let x = Array1::from_vec(xy[..n].to_vec());
        let y = Array1::from_vec(xy[5..5 + n].to_vec());
        let sx = local_spectrum_with(&decomp, &x, DEFAULT_MEMBERSHIP_TOL);
        let sy = local_spectrum_with(&decomp, &y, DEFAULT_MEMBERSHIP_TOL);
        let sxy = local_spectrum_with(&decomp, &(&x + &y), DEFAULT_MEMBERSHIP_TOL);
        for p in sxy.points() {
            let in_union = sx.contains_point(p, 1e-9) || sy.contains_point(p, 1e-9);
            prop_assert!(in_union, "point {p} escaped the union");
        }
    }

    #[test]
    fn subspace_lattice_relations(
        cols in proptest::collection::vec(cx_strategy(), 24),
    ) {
        // Two subspaces of C^4 from random column blocks.
        let m1 = Array2::from_shape_fn((4, 3), |(i, j)| cols[i * 3 + j]);
        let m2 = Array2::from_shape_fn((4, 3), |(i, j)| cols[12 + i * 3 + j]);
        let u = Subspace::from_columns(&m1, DEFAULT_RANK_TOL).unwrap();
        let v = Subspace::from_columns(&m2, DEFAULT_RANK_TOL).unwrap();

        let meet = u.intersect(&v).unwrap();
        prop_assert!(u.contains(&meet, 1e-8).unwrap());
        prop_assert!(v.contains(&meet, 1e-8).unwrap());

        let join = Subspace::span_union(&[&u, &v], DEFAULT_RANK_TOL).unwrap();
        prop_assert!(join.contains(&u, 1e-8).unwrap());
        prop_assert!(join.contains(&v, 1e-8).unwrap());

        // Dimension formula dim(U) + dim(V) = dim(meet) + dim(join).
        prop_assert_eq!(u.dim() + v.dim(), meet.dim() + join.dim());
    }

    #[test]
    fn factorization_identity_for_random_generators(
        a in matrix_strategy(5),
        lambda in cx_strategy(),
        t in 0.0f64..2.0,
    ) {
        let n = a.dim();
        let b = build_b(&a, lambda, t, CauchyMethod::BlockExp).unwrap();
        let shifted = &Matrix::scaled_identity(n, lambda) - &a;
        let tt = evaluate_t(&GeneratorSpec::new("prop", a.clone(), ""), t).unwrap();
        let target = &Matrix::scaled_identity(n, (lambda * t).exp()) - &tt;
        let scale = residual_scale(a.norm_2(), lambda, t);
        let floor = 1e-14 * (1.0 + a.norm_2());
        prop_assert!(shifted.matmul(&b).fro_dist(&target) <= 1e-8 * scale + floor);
        prop_assert!(b.matmul(&shifted).fro_dist(&target) <= 1e-8 * scale + floor);
    }

    #[test]
    fn svd_reconstructs_and_orders(
        cols in proptest::collection::vec(cx_strategy(), 20),
    ) {
        let a = Array2::from_shape_fn((5, 4), |(i, j)| cols[i * 4 + j]);
        let f = svd(&a).unwrap();
        // Reconstruction.
        let mut s = Array2::<Cx>::zeros((4, 4));
        for (j, &sv) in f.sigma.iter().enumerate() {
            s[[j, j]] = Cx::new(sv, 0.0);
        }
        let vh = f.v.t().mapv(|z| z.conj());
        let recon = f.u.dot(&s).dot(&vh);
        let fro = |m: &Array2<Cx>| m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(fro(&(&recon - &a)) <= 1e-11 * fro(&a).max(1.0));
        for w in f.sigma.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-15);
        }
    }
}
