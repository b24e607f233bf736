//! Library results against independent computations: nalgebra's matrix
//! exponential, Laplace-expansion determinants and finite differences.

use ghlab_core::families::{coefficient_lemma, complex_family};
use ghlab_core::lie::{build_basis, matrix_exp, sample_group_point, symplectic_form, ComplexMatrix, GroupKind, C64};
use ghlab_core::poly::{coefficient_function, minor, MatrixPolynomial};
use ghlab_core::tension::{kappa_at, tau_at, OperatorContext, Sampling};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type NMatrix = DMatrix<C64>;

fn to_na(m: &ComplexMatrix) -> NMatrix {
    NMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn from_na(m: &NMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn na_exp(m: &ComplexMatrix) -> ComplexMatrix {
    from_na(&to_na(m).exp())
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
    })
}

fn laplace_det(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let sub: Vec<Vec<C64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            m[0][c] * laplace_det(&sub) * sign
        })
        .sum()
}

/// Second-order central differences of `t ↦ f(g·exp(tX))` with nalgebra's exponential.
fn fd_derivatives(f: &MatrixPolynomial, g: &ComplexMatrix, x: &ComplexMatrix, h: f64) -> (C64, C64) {
    let at = |t: f64| f.evaluate(&(g * &na_exp(&x.scale_real(t)))).unwrap();
    let (plus, zero, minus) = (at(h), at(0.0), at(-h));
    ((plus - minus) / (2.0 * h), (plus - zero * 2.0 + minus) / (h * h))
}

fn fd_tau(f: &MatrixPolynomial, g: &ComplexMatrix, directions: &[ComplexMatrix], h: f64) -> C64 {
    directions.iter().map(|x| fd_derivatives(f, g, x, h).1).sum()
}

#[test]
fn exponential_matches_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        for scale in [1e-3, 0.3, 1.0, 4.0, 25.0] {
            let x = random_matrix(&mut rng, n, scale);
            let ours = matrix_exp(&x);
            let theirs = na_exp(&x);
            let rel = ours.max_abs_diff(&theirs) / theirs.max_abs().max(1.0);
            assert!(rel < 1e-11, "n={n} scale={scale}: {rel:e}");
        }
    }
}

#[test]
fn exponential_of_algebra_elements_lands_in_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (kind, n) in [
        (GroupKind::Unitary, 3),
        (GroupKind::Unitary, 5),
        (GroupKind::Symplectic, 2),
        (GroupKind::Symplectic, 3),
    ] {
        let basis = build_basis(kind, n);
        let x = basis.elements.iter().fold(
            ComplexMatrix::zeros(basis.matrix_dim(), basis.matrix_dim()),
            |acc, e| &acc + &e.scale_real(rng.random_range(-2.0..2.0)),
        );
        let g = to_na(&matrix_exp(&x));
        let d = basis.matrix_dim();
        assert!((g.adjoint() * &g - NMatrix::identity(d, d)).norm() < 1e-12);
        if kind == GroupKind::Symplectic {
            let j = to_na(&symplectic_form(n));
            assert!((g.transpose() * &j * &g - &j).norm() < 1e-10);
        }
    }
}

#[test]
fn casimir_matches_direct_summation() {
    for n in 1..=6 {
        let basis = build_basis(GroupKind::Unitary, n);
        assert_eq!(basis.len(), n * n);
        let sum = basis
            .elements
            .iter()
            .map(to_na)
            .fold(NMatrix::zeros(n, n), |acc, x| acc + &x * &x);
        let target = NMatrix::identity(n, n) * C64::new(-(n as f64), 0.0);
        assert!((sum - target).norm() < 1e-12, "u({n})");
    }
    for n in 1..=4 {
        let basis = build_basis(GroupKind::Symplectic, n);
        assert_eq!(basis.len(), n * (2 * n + 1));
        let d = 2 * n;
        let sum = basis
            .elements
            .iter()
            .map(to_na)
            .fold(NMatrix::zeros(d, d), |acc, x| acc + &x * &x);
        let target = NMatrix::identity(d, d) * C64::new(-((2 * n + 1) as f64) / 2.0, 0.0);
        assert!((sum - target).norm() < 1e-12, "sp({n})");
    }
}

#[test]
fn bases_are_orthonormal_under_trace_form() {
    for (kind, n) in [
        (GroupKind::Unitary, 4),
        (GroupKind::Symplectic, 2),
        (GroupKind::Symplectic, 3),
    ] {
        let elems: Vec<NMatrix> = build_basis(kind, n).elements.iter().map(to_na).collect();
        for (a, x) in elems.iter().enumerate() {
            assert!((x.adjoint() + x).norm() < 1e-14, "skew-Hermitian");
            for (b, y) in elems.iter().enumerate() {
                let ip = (x.adjoint() * y).trace().re;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-13, "{kind:?}({n}) <{a},{b}> = {ip}");
            }
        }
    }
}

#[test]
fn minors_match_laplace_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 5;
    let g = random_matrix(&mut rng, n, 1.0);
    for (rows, cols) in [
        (vec![1], vec![3]),
        (vec![1, 2], vec![2, 5]),
        (vec![1, 3, 4], vec![1, 2, 5]),
        (vec![1, 2, 3, 4], vec![2, 3, 4, 5]),
        (vec![1, 2, 3, 4, 5], vec![1, 2, 3, 4, 5]),
    ] {
        let m = minor((n, n), &rows, &cols).unwrap();
        let sub: Vec<Vec<C64>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| g[(r - 1, c - 1)]).collect())
            .collect();
        let expected = laplace_det(&sub);
        assert!(
            (m.evaluate(&g).unwrap() - expected).norm() < 1e-12,
            "{rows:?} x {cols:?}"
        );
        assert!(m.is_homogeneous() && m.degree() == rows.len());
    }
}

#[test]
fn coefficient_function_reads_the_exponential() {
    let basis = build_basis(GroupKind::Unitary, 2);
    for index in 0..5 {
        let g = sample_group_point(&basis, 9, index);
        let reference = to_na(&g);
        for (j, a) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let f = coefficient_function((2, 2), j, a).unwrap();
            assert_eq!(f.evaluate(&g).unwrap(), reference[(j - 1, a - 1)]);
        }
    }
}

#[test]
fn jets_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 3;
    let basis = build_basis(GroupKind::Unitary, n);
    let f = minor((n, n), &[1, 2], &[1, 3])
        .unwrap()
        .checked_mul(&coefficient_function((n, n), 3, 2).unwrap())
        .unwrap()
        .checked_add(&coefficient_function((n, n), 2, 2).unwrap().pow(2))
        .unwrap();
    for index in 0..10 {
        let g = sample_group_point(&basis, 3, index);
        let x = basis.elements[rng.random_range(0..basis.len())].clone();
        let jet = f.jet2(&g, &x).unwrap();
        let (d1, second) = fd_derivatives(&f, &g, &x, 1e-4);
        let scale = jet.value.norm().max(1.0);
        assert!((jet.value - f.evaluate(&g).unwrap()).norm() < 1e-14);
        assert!((jet.d1 - d1).norm() / scale < 1e-7, "d1");
        assert!((jet.second_derivative() - second).norm() / scale < 1e-6, "d2");
    }
}

#[test]
fn tension_matches_finite_differences() {
    let n = 3;
    let basis = build_basis(GroupKind::Unitary, n);
    let ctx = OperatorContext::full(&basis);
    let f = minor((n, n), &[1, 2], &[2, 3])
        .unwrap()
        .checked_add(&coefficient_function((n, n), 1, 1).unwrap().pow(3))
        .unwrap();
    for index in 0..10 {
        let g = sample_group_point(&basis, 5, index);
        let exact = tau_at(&f, &g, &ctx).unwrap();
        let numeric = fd_tau(&f, &g, &basis.elements, 1e-4);
        assert!((exact - numeric).norm() / exact.norm().max(1.0) < 1e-6);
    }
}

#[test]
fn coefficient_lemma_matches_finite_differences() {
    for (kind, n, tau_c, kappa_c) in [
        (GroupKind::Unitary, 3, -3.0, -1.0),
        (GroupKind::Symplectic, 2, -2.5, -0.5),
    ] {
        let basis = build_basis(kind, n);
        let d = basis.matrix_dim();
        let ctx = OperatorContext::full(&basis);
        for index in 0..4 {
            let g = sample_group_point(&basis, 21, index);
            for (j, a) in [(1, 1), (1, d), (n, 2)] {
                let f = coefficient_function((d, d), j, a).unwrap();
                let numeric = fd_tau(&f, &g, &basis.elements, 1e-4);
                assert!(
                    (numeric - g[(j - 1, a - 1)] * tau_c).norm() < 1e-6,
                    "{kind:?} tau z[{j},{a}]"
                );
            }
            // κ(z_{jα}, z_{kβ}) = c·z_{jβ}·z_{kα}, with d1 from finite differences.
            let (j, a, k, b) = (1, 2, n, 1);
            let f = coefficient_function((d, d), j, a).unwrap();
            let h = coefficient_function((d, d), k, b).unwrap();
            let numeric: C64 = basis
                .elements
                .iter()
                .map(|x| fd_derivatives(&f, &g, x, 1e-5).0 * fd_derivatives(&h, &g, x, 1e-5).0)
                .sum();
            let expected = g[(j - 1, b - 1)] * g[(k - 1, a - 1)] * kappa_c;
            assert!((numeric - expected).norm() < 1e-8, "{kind:?} kappa");
            assert!((kappa_at(&f, &h, &g, &ctx).unwrap() - expected).norm() < 1e-12);
        }
        let report = coefficient_lemma(kind, n, &Sampling::new(1, 10)).unwrap();
        assert_eq!((report.tau_constant, report.kappa_constant), (tau_c, kappa_c));
        assert!(report.tau_residual < 1e-12 && report.kappa_residual < 1e-12);
    }
}

#[test]
fn family_constants_match_finite_differences() {
    let family = complex_family(2, 2).unwrap();
    let basis = family.kind.basis();
    for member in family.members.iter().take(3) {
        for index in 0..3 {
            let g = sample_group_point(&basis, 8, index);
            let f = &member.polynomial;
            let numeric = fd_tau(f, &g, &basis.elements, 1e-4);
            let expected = f.evaluate(&g).unwrap() * family.claimed_lambda;
            assert!((numeric - expected).norm() < 1e-6, "{}", member.label);
        }
    }
}
