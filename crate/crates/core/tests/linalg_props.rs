//! Exact linear-algebra invariants: Cauchy–Binet for compounds, the TNN
//! semigroup, the TP ⊂ GL≥0 ⊂ TNN chain, PSD against an independent
//! float eigensolver, and the matrix-exponential semigroup law.

mod common;

use common::*;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnn_stable::matrix::{MinorTable, RationalMatrix};
use tnn_stable::numeric::{matrix_exp, max_abs_diff};
use tnn_stable::scalar::GaussianRational;
use tnn_stable::tnn::{
    is_psd, is_totally_nonnegative, is_totally_positive, random_tnn_word, random_tp_matrix,
    word_to_matrix, PsdCertificate,
};

/// compound(AB, k) == compound(A, k) · compound(B, k) for all k
/// (Cauchy–Binet), 100 random pairs.
#[test]
fn cauchy_binet_for_compounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    for trial in 0..100 {
        let n = rng.gen_range(2..=5);
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        let ab = a.matmul(&b).unwrap();
        for k in 0..=n {
            let lhs = ab.compound(k).unwrap();
            let rhs = a
                .compound(k)
                .unwrap()
                .matmul(&b.compound(k).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "trial {trial}, n {n}, k {k}");
        }
    }
}

/// The Laplace minor table agrees with Bareiss minors entrywise.
#[test]
fn minor_table_equals_bareiss_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    for _ in 0..50 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_matrix(&mut rng, rows, cols);
        let table = MinorTable::build(&m, rows.min(cols));
        for k in 1..=rows.min(cols) {
            for (rs, cs, v) in table.order(k) {
                assert_eq!(*v, m.minor(rs, cs).unwrap());
            }
        }
    }
}

/// Products of generator-word matrices stay totally nonnegative.
#[test]
fn tnn_semigroup_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    for trial in 0..50 {
        let n = rng.gen_range(2..=5);
        let w1 = random_tnn_word(n, rng.gen_range(0..=8), rng.gen()).unwrap();
        let w2 = random_tnn_word(n, rng.gen_range(0..=8), rng.gen()).unwrap();
        let product = word_to_matrix(&w1).matmul(&word_to_matrix(&w2)).unwrap();
        assert!(
            is_totally_nonnegative(&product).unwrap().is_tnn(),
            "trial {trial}"
        );
    }
}

/// Every TP sample is invertible and totally nonnegative.
#[test]
fn tp_inside_invertible_tnn() {
    for seed in 0..20u64 {
        let n = (seed % 5 + 1) as usize;
        let m = random_tp_matrix(n, seed).unwrap();
        assert!(is_totally_positive(&m).unwrap().is_tp());
        assert!(is_totally_nonnegative(&m).unwrap().is_tnn());
        assert!(!m.det().unwrap().is_zero());
    }
}

/// is_psd agrees with the independent Jacobi eigensolver on 500 random
/// symmetric matrices (mixed indefinite and Gram-constructed PSD).
#[test]
fn psd_agrees_with_float_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let s = if trial % 2 == 0 {
            // random symmetric
            let mut m = RationalMatrix::zeros(n, n).unwrap();
            for r in 0..n {
                for c in r..n {
                    let v = GaussianRational::from_rational(random_rational(&mut rng, 4, 3));
                    m.set(r, c, v.clone());
                    m.set(c, r, v);
                }
            }
            m
        } else {
            // Gram matrix BᵀB: PSD by construction
            let rows = rng.gen_range(1..=n);
            let b = random_matrix(&mut rng, rows, n);
            b.transpose().matmul(&b).unwrap()
        };
        let exact = is_psd(&s).unwrap().is_psd();
        let float: Vec<Vec<f64>> = {
            let arr = s.to_f64().unwrap();
            (0..n)
                .map(|r| (0..n).map(|c| arr[[r, c]]).collect())
                .collect()
        };
        let min_eig = jacobi_min_eigenvalue(&float);
        let norm: f64 = float
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let float_psd = min_eig >= -1e-9 * norm.max(1.0);
        assert_eq!(
            exact, float_psd,
            "trial {trial}: exact {exact}, min eigenvalue {min_eig}, norm {norm}"
        );
    }
}

/// PSD witnesses are genuine: the reported principal minor recomputes to
/// the same negative value.
#[test]
fn psd_witnesses_revalidate() {
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    let mut refuted = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let mut s = RationalMatrix::zeros(n, n).unwrap();
        for r in 0..n {
            for c in r..n {
                let v = GaussianRational::from_rational(random_rational(&mut rng, 4, 3));
                s.set(r, c, v.clone());
                s.set(c, r, v);
            }
        }
        if let PsdCertificate::NegativePrincipalMinor { set, value } = is_psd(&s).unwrap() {
            let recomputed = s.minor(set, set).unwrap();
            assert_eq!(recomputed.re().clone(), value);
            assert!(value < rat(0, 1));
            refuted += 1;
        }
    }
    assert!(
        refuted > 50,
        "random symmetric matrices should often fail PSD"
    );
}

/// matrix_exp(Z, s + t) == matrix_exp(Z, s) · matrix_exp(Z, t) within
/// 1e−8 for random tridiagonal Z.
#[test]
fn matrix_exp_semigroup_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2006);
    for trial in 0..50 {
        let n = rng.gen_range(2..=5);
        let mut z = Array2::<f64>::zeros((n, n));
        for r in 0..n {
            for c in 0..n {
                if r.abs_diff(c) <= 1 {
                    z[[r, c]] = rng.gen_range(-2.0..=2.0);
                }
            }
        }
        let s = rng.gen_range(0.1..=1.0);
        let t = rng.gen_range(0.1..=1.0);
        let whole = matrix_exp(&z, s + t, 24).unwrap();
        let parts = matrix_exp(&z, s, 24)
            .unwrap()
            .dot(&matrix_exp(&z, t, 24).unwrap());
        assert!(
            max_abs_diff(&whole, &parts) <= 1e-8,
            "trial {trial}: splitting exp({}) vs exp({})·exp({})",
            s + t,
            s,
            t
        );
    }
}

/// Accuracy contract: against exact scalar exponentials on diagonal
/// matrices with ‖tZ‖∞ up to 10.
#[test]
fn matrix_exp_accuracy_on_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2007);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let mut z = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            z[[i, i]] = rng.gen_range(-10.0..=10.0);
        }
        let e = matrix_exp(&z, 1.0, 24).unwrap();
        for i in 0..n {
            let expected = z[[i, i]].exp();
            assert!(
                (e[[i, i]] - expected).abs() <= 1e-10 * expected.max(1.0),
                "diagonal entry {i}: {} vs {expected}",
                e[[i, i]]
            );
        }
    }
}
