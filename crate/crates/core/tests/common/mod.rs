//! Shared helpers for the integration suites: seeded random generators
//! for polynomials and matrices, and an independent float eigenvalue
//! oracle (cyclic Jacobi) used to cross-check the exact PSD certifier.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tnn_stable::matrix::RationalMatrix;
use tnn_stable::poly::{MultiaffinePoly, SparsePoly};
use tnn_stable::scalar::{GaussianRational, Rational};
use tnn_stable::varset::{all_subsets, VarSet};

pub fn vs(ix: &[usize]) -> VarSet {
    VarSet::from_indices(ix).unwrap()
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn random_rational(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: i64) -> Rational {
    rat(
        rng.gen_range(-num_bound..=num_bound),
        rng.gen_range(1..=den_bound),
    )
}

pub fn random_gaussian(rng: &mut ChaCha8Rng, bound: i64) -> GaussianRational {
    GaussianRational::new(
        random_rational(rng, bound, 4),
        random_rational(rng, bound, 4),
    )
}

/// Random multiaffine polynomial with roughly `density` of the 2^n
/// monomials present.
pub fn random_multiaffine(
    rng: &mut ChaCha8Rng,
    n: usize,
    density: f64,
    complex: bool,
) -> MultiaffinePoly {
    let mut terms = Vec::new();
    for s in all_subsets(n) {
        if rng.gen_bool(density) {
            let c = if complex {
                random_gaussian(rng, 5)
            } else {
                GaussianRational::from_rational(random_rational(rng, 5, 3))
            };
            terms.push((s, c));
        }
    }
    MultiaffinePoly::from_terms(n, terms).unwrap()
}

/// Random sparse polynomial with per-variable degree ≤ 2 (so products
/// stay under the exponent cap).
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> SparsePoly {
    let mut acc = SparsePoly::zero(n).unwrap();
    for _ in 0..terms {
        let exps: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=2u8)).collect();
        let coeff = GaussianRational::from_rational(random_rational(rng, 5, 3));
        let term = SparsePoly::term(n, &exps, coeff).unwrap();
        acc = acc.add(&term).unwrap();
    }
    acc
}

pub fn random_complex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)))
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| {
        GaussianRational::from_rational(random_rational(rng, 4, 3))
    })
    .unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// Minimum eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
/// Independent of every exact code path; used only as a cross-check.
pub fn jacobi_min_eigenvalue(sym: &[Vec<f64>]) -> f64 {
    let n = sym.len();
    let mut a: Vec<Vec<f64>> = sym.to_vec();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q].abs();
            }
        }
        if off < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod sanity {
    use super::*;

    #[test]
    fn jacobi_on_known_matrices() {
        let swap = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!((jacobi_min_eigenvalue(&swap) + 1.0).abs() < 1e-10);
        let diag = vec![vec![3.0, 0.0], vec![0.0, -2.0]];
        assert!((jacobi_min_eigenvalue(&diag) + 2.0).abs() < 1e-10);
    }
}
