use girko_core::montecarlo::{clopper_pearson, inverse_gamma2_cdf, median_of_means};
use girko_core::stats::{bump, phase_floor};
use girko_core::{linalg, Field, Matrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    -1.0..1.0f64
}

fn complex_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec((entry(), entry()), n * n).prop_map(move |v| {
        Matrix::from_fn(Field::Complex, n, n, |i, j| {
            let (re, im) = v[i * n + j];
            Complex64::new(re, im)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_reverses_products(a in complex_matrix(4), b in complex_matrix(4)) {
        let lhs = a.matmul(&b).unwrap().adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn trace_is_cyclic(a in complex_matrix(4), b in complex_matrix(4)) {
        let ab = a.matmul(&b).unwrap().trace();
        let ba = b.matmul(&a).unwrap().trace();
        prop_assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn singular_values_square_to_frobenius(a in complex_matrix(5)) {
        let sv = linalg::singular_values(&a).unwrap();
        prop_assert!(sv.iter().all(|&s| s >= 0.0));
        prop_assert!(sv.windows(2).all(|w| w[0] <= w[1] + 1e-14));
        let sum: f64 = sv.iter().map(|s| s * s).sum();
        let fro = a.frobenius_norm();
        prop_assert!((sum - fro * fro).abs() < 1e-10 * (1.0 + fro * fro));
    }

    #[test]
    fn hermitization_spectrum_is_symmetric(a in complex_matrix(4)) {
        let h = linalg::doubled_hermitian(&a);
        let eig = linalg::hermitian_eig(&h, 1e-12).unwrap();
        for i in 0..4 {
            prop_assert!((eig.values[i] + eig.values[7 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn realification_preserves_products(a in complex_matrix(3), b in complex_matrix(3)) {
        let lhs = linalg::realify(&a.matmul(&b).unwrap());
        let rhs = linalg::realify(&a).matmul(&linalg::realify(&b)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_brackets_the_rate(k in 0u64..50, extra in 0u64..50, alpha in 0.01f64..0.2) {
        let n = k + extra + 1;
        let (lo, hi) = clopper_pearson(k, n, alpha);
        let p = k as f64 / n as f64;
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
    }

    #[test]
    fn median_of_means_stays_in_range(xs in proptest::collection::vec(entry(), 1..200), blocks in 1usize..30) {
        let m = median_of_means(&xs, blocks);
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo - 1e-12 <= m && m <= hi + 1e-12);
    }

    #[test]
    fn bump_support_and_range(re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let u = Complex64::new(re, im);
        let f = bump(u);
        prop_assert!((0.0..=1.0).contains(&f));
        if u.norm_sqr() >= 1.0 {
            prop_assert!(f == 0.0);
        }
    }

    #[test]
    fn inverse_gamma2_cdf_is_monotone(y in 0.01f64..50.0, dy in 0.01f64..5.0) {
        prop_assert!(inverse_gamma2_cdf(y) <= inverse_gamma2_cdf(y + dy) + 1e-15);
    }

    #[test]
    fn phase_floor_is_phase_invariant(parts in proptest::collection::vec((entry(), entry()), 5), theta in 0.0..std::f64::consts::TAU) {
        let mut v: Vec<Complex64> = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let nn = girko_core::matrix::vec_norm(&v);
        prop_assume!(nn > 1e-3);
        for x in &mut v {
            *x /= nn;
        }
        let f1 = phase_floor(&v).unwrap().floor;
        let rot = Complex64::new(theta.cos(), theta.sin());
        let w: Vec<Complex64> = v.iter().map(|x| x * rot).collect();
        let f2 = phase_floor(&w).unwrap().floor;
        prop_assert!((f1 - f2).abs() < 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f1));
    }
}
