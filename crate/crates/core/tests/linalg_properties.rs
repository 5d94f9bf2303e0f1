use lqfi_core::linalg::{hermitian_eig, kron, psd_sqrt, Sym3};
use lqfi_core::ComplexMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |raw| {
        let a = ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = raw[i * dim + j];
            Complex64::new(re, im)
        });
        (&a + &a.adjoint()).scale_real(0.5)
    })
}

fn any_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=8).prop_flat_map(hermitian)
}

fn psd(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    hermitian(dim).prop_map(|a| &a * &a)
}

fn square(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |raw| {
        ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = raw[i * dim + j];
            Complex64::new(re, im)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eig_reconstructs_and_is_orthonormal(a in any_hermitian()) {
        let eig = hermitian_eig(&a).unwrap();
        let scale = a.max_abs().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-11 * scale);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        for (i, u) in eig.vectors.iter().enumerate() {
            for (j, v) in eig.vectors.iter().enumerate() {
                let dot: Complex64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_trace_matches_sum_of_values(a in any_hermitian()) {
        let eig = hermitian_eig(&a).unwrap();
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - a.trace().re).abs() < 1e-11);
    }

    #[test]
    fn psd_sqrt_squares_back(a in (1usize..=8).prop_flat_map(psd)) {
        let root = psd_sqrt(&a).unwrap();
        prop_assert!(root.is_hermitian(1e-12));
        let back = &root * &root;
        prop_assert!(back.max_abs_diff(&a) <= 1e-10 * a.max_abs().max(1.0));
    }

    #[test]
    fn kron_is_associative(a in square(2), b in square(2), c in square(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn kron_mixed_product(a in square(2), b in square(2), c in square(2), d in square(2)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn sym3_matches_jacobi(v in prop::collection::vec(-1.0f64..1.0, 6)) {
        let m = [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]];
        let cubic = Sym3(m).eigenvalues();
        let complex = ComplexMatrix::from_fn(3, |i, j| Complex64::new(m[i][j], 0.0));
        let jacobi = hermitian_eig(&complex).unwrap().values;
        for (a, b) in cubic.iter().zip(&jacobi) {
            prop_assert!((a - b).abs() < 1e-12, "{cubic:?} vs {jacobi:?}");
        }
    }
}

#[test]
fn degenerate_cluster_resolves() {
    // diag(1, 1, 1, −2) rotated by a fixed unitary-like mixing
    let d = ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, -2.0]);
    let h = ComplexMatrix::from_fn(4, |i, j| {
        Complex64::new(((i + 2 * j) as f64).sin(), ((3 * i + j) as f64).cos() * 0.3)
    });
    let h = (&h + &h.adjoint()).scale_real(0.5);
    let u = hermitian_eig(&h).unwrap();
    let basis = ComplexMatrix::from_fn(4, |i, j| u.vectors[j][i]);
    let a = d.conjugate_by(&basis);
    let eig = hermitian_eig(&a).unwrap();
    for (got, want) in eig.values.iter().zip([1.0, 1.0, 1.0, -2.0]) {
        assert!((got - want).abs() < 1e-13);
    }
    assert!(eig.reconstruct().max_abs_diff(&a) < 1e-12);
}

#[test]
fn psd_sqrt_rejects_indefinite() {
    let m = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
    assert!(psd_sqrt(&m).is_err());
}
