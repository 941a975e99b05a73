use bidisk_pick::linalg::{complete_to_unitary, eigh, gram_schmidt, project_psd, psd_factor, ComplexMatrix, HermitianMatrix};
use bidisk_pick::Complex64;
use proptest::prelude::*;

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
        HermitianMatrix::from_upper(n, |i, j| {
            let (re, im) = v[i * n + j];
            if i == j {
                Complex64::new(re, 0.0)
            } else {
                Complex64::new(re, im)
            }
        })
    })
}

fn sized_hermitian() -> impl Strategy<Value = HermitianMatrix> {
    (1usize..=8).prop_flat_map(hermitian)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs_with_sorted_spectrum(h in sized_hermitian()) {
        let e = eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.eigenvectors.unitarity_defect() < 1e-10);
        let trace: f64 = h.diagonal().iter().sum();
        prop_assert!((e.eigenvalues.iter().sum::<f64>() - trace).abs() < 1e-9);
    }

    #[test]
    fn psd_projection_is_idempotent_and_nearest(h in sized_hermitian()) {
        let p = project_psd(&h).unwrap();
        prop_assert!(p.min_eigenvalue().unwrap() >= -1e-12);
        prop_assert!(project_psd(&p).unwrap().max_abs_diff(&p) < 1e-10);
        // distance to the cone is the norm of the negative eigenvalues
        let neg: f64 = eigh(&h).unwrap().eigenvalues.iter().map(|l| l.min(0.0).powi(2)).sum();
        prop_assert!(((&h - &p).frobenius_norm() - neg.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn psd_factor_reproduces_the_matrix(h in sized_hermitian()) {
        let p = project_psd(&h).unwrap();
        let l = psd_factor(&p, 1e-12).unwrap();
        let back = l.matmul(&l.adjoint()).unwrap();
        prop_assert!(back.max_abs_diff(p.as_matrix()) < 1e-9);
    }

    #[test]
    fn unitary_completion_extends_an_isometry(
        n in 2usize..=6,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 72),
        k in 1usize..=3,
    ) {
        let k = k.min(n);
        let col = |off: usize, j: usize| (0..n).map(|i| Complex64::new(raw[off + j * n + i].0, raw[off + j * n + i].1)).collect::<Vec<_>>();
        let q = gram_schmidt(&(0..n).map(|j| col(0, j)).collect::<Vec<_>>());
        prop_assume!(q.len() == n);
        let qm = ComplexMatrix::from_columns(n, &q).unwrap();
        let pairs: Vec<_> = (0..k).map(|j| {
            let d = col(36, j);
            let c = qm.apply(&d).unwrap();
            (d, c)
        }).collect();
        let u = complete_to_unitary(&pairs, n, n, 1e-9).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-10);
        for (d, c) in &pairs {
            let got = u.apply(d).unwrap();
            prop_assert!(got.iter().zip(c).all(|(a, b)| (a - b).norm() < 1e-9));
        }
    }

    #[test]
    fn schur_product_of_psd_matrices_is_psd(a in hermitian(4), b in hermitian(4)) {
        let (pa, pb) = (project_psd(&a).unwrap(), project_psd(&b).unwrap());
        prop_assert!(pa.schur(&pb).min_eigenvalue().unwrap() >= -1e-10);
    }
}
