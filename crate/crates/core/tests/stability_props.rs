//! Stability invariants: symmetry and scaling of Rayleigh differences,
//! agreement between the closed-form inequality and the PSD certificates
//! on Gr(2,4), oracle soundness against the falsifier and the exact
//! degree-2 route, and stability of the square-minor and permanent
//! constructor families.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnn_stable::grassmann::{
    act, base_point_matrix, plucker_of_matrix, point_of_matrix, representing_polynomial,
};
use tnn_stable::matrix::RationalMatrix;
use tnn_stable::poly::MultiaffinePoly;
use tnn_stable::scalar::{GaussianRational, Rational};
use tnn_stable::stability::{
    elementary_symmetric, exact_stability_deg2, falsify_stability, grassmann_stability_oracle,
    inequality_4vars, permanent_poly, rayleigh_difference, sq_minor_poly, OracleOutcome,
    StabilityVerdict,
};
use tnn_stable::tnn::random_tp_matrix;
use tnn_stable::varset::k_subsets;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Δ_ij f == Δ_ji f exactly.
    #[test]
    fn rayleigh_difference_is_symmetric(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let f = random_multiaffine(&mut rng, n, 0.5, false);
        let i = rng.gen_range(1..=n);
        let mut j = rng.gen_range(1..=n);
        if j == i {
            j = if i == n { 1 } else { i + 1 };
        }
        prop_assert_eq!(
            rayleigh_difference(&f, i, j).unwrap(),
            rayleigh_difference(&f, j, i).unwrap()
        );
    }

    /// Δ_ij(c·f) == c²·Δ_ij(f) for rational c.
    #[test]
    fn rayleigh_difference_scaling_covariance(seed in 0u64..10_000, p in -9i64..=9, q in 1i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let f = random_multiaffine(&mut rng, n, 0.5, false);
        let c = GaussianRational::from_ratio(p, q);
        let scaled = f.scale(&c);
        let lhs = rayleigh_difference(&scaled, 1, 2).unwrap();
        let rhs = rayleigh_difference(&f, 1, 2).unwrap().scale(&(&c * &c));
        prop_assert_eq!(lhs, rhs);
    }
}

/// On 500 random nonnegative 6-tuples, the closed-form inequality and
/// the exact PSD certificates agree on stability of the Example-2.2
/// polynomial shape.
#[test]
fn gr24_inequality_agrees_with_psd_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(4001);
    let sets = k_subsets(4, 2);
    for trial in 0..500 {
        let tuple: [Rational; 6] = std::array::from_fn(|_| {
            Rational::new(rng.gen_range(0..=12).into(), rng.gen_range(1..=6).into())
        });
        let f = MultiaffinePoly::from_terms(
            4,
            sets.iter()
                .cloned()
                .zip(tuple.iter().cloned())
                .map(|(s, c)| (s, GaussianRational::from_rational(c))),
        )
        .unwrap();
        let (_, stable_by_inequality) = inequality_4vars(&tuple).unwrap();
        if f.is_zero() {
            assert!(stable_by_inequality, "zero polynomial is stable");
            continue;
        }
        let stable_by_psd = matches!(
            exact_stability_deg2(&f).unwrap(),
            StabilityVerdict::StableCertified(_)
        );
        assert_eq!(
            stable_by_inequality, stable_by_psd,
            "trial {trial}: tuple {tuple:?}"
        );
    }
}

/// On Gr(2,4) points the exchange relation kills the x2x4 cross term of
/// Δ13 exactly, leaving a12·a23·x2² + a14·a34·x4²; with nonnegative
/// coordinates this is transparently a nonnegative form.
#[test]
fn gr24_relation_cancels_delta13_cross_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(4005);
    let mut checked = 0;
    while checked < 100 {
        let m = random_matrix(&mut rng, 4, 2);
        let Ok(p) = plucker_of_matrix(&m) else {
            continue;
        };
        let f = representing_polynomial(&p);
        let delta = rayleigh_difference(&f, 1, 3).unwrap();
        assert!(
            delta.coeff_of_exponents(&[0, 1, 0, 1]).unwrap().is_zero(),
            "cross term survived for {p:?}"
        );
        let a = |s: &[usize]| p.coord(vs(s)).re().clone();
        assert_eq!(
            delta
                .coeff_of_exponents(&[0, 2, 0, 0])
                .unwrap()
                .re()
                .clone(),
            a(&[1, 2]) * a(&[2, 3])
        );
        assert_eq!(
            delta
                .coeff_of_exponents(&[0, 0, 0, 2])
                .unwrap()
                .re()
                .clone(),
            a(&[1, 4]) * a(&[3, 4])
        );
        checked += 1;
    }
}

/// Oracle soundness: when the oracle certifies stability, the falsifier
/// finds nothing and (degree 2) the exact route certifies too.
#[test]
fn oracle_soundness() {
    for trial in 0..10u64 {
        let n = (trial % 3 + 4) as usize;
        let k = (trial % 2 + 2) as usize;
        let a = random_tp_matrix(n, 41_000 + trial).unwrap();
        let v0 = point_of_matrix(&base_point_matrix(n, k).unwrap()).unwrap();
        let f = representing_polynomial(act(&a, &v0).unwrap().plucker());
        match grassmann_stability_oracle(&f).unwrap() {
            OracleOutcome::Verdict(StabilityVerdict::StableOracle { .. }) => {}
            other => panic!("trial {trial}: expected StableOracle, got {other:?}"),
        }
        assert!(matches!(
            falsify_stability(&f, 10_000, trial).unwrap(),
            StabilityVerdict::NoCounterexampleFound { .. }
        ));
        if k == 2 {
            assert!(matches!(
                exact_stability_deg2(&f).unwrap(),
                StabilityVerdict::StableCertified(_)
            ));
        }
    }
}

/// Phase necessity: when the oracle refutes (mixed-sign Grassmannian
/// point, k = 2), the exact degree-2 route refutes as well.
#[test]
fn oracle_refutations_are_confirmed_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(4002);
    for trial in 0..30 {
        let n = rng.gen_range(4..=6);
        let k = 2;
        let a = random_tp_matrix(n, 42_000 + trial).unwrap();
        let m0 = base_point_matrix(n, k).unwrap();
        let moved = a.matmul(&m0).unwrap();
        // negate one row: relations survive, signs mix
        let row = rng.gen_range(0..n);
        let negated = RationalMatrix::from_fn(n, k, |r, c| {
            let v = moved.get(r, c).clone();
            if r == row {
                -v
            } else {
                v
            }
        })
        .unwrap();
        let p = plucker_of_matrix(&negated).unwrap();
        let f = representing_polynomial(&p);
        match grassmann_stability_oracle(&f).unwrap() {
            OracleOutcome::Verdict(StabilityVerdict::NotStable(_)) => {}
            other => panic!("trial {trial}: expected NotStable, got {other:?}"),
        }
        assert!(
            matches!(
                exact_stability_deg2(&f).unwrap(),
                StabilityVerdict::NotStable(_)
            ),
            "trial {trial}"
        );
    }
}

/// The square-minor and permanent families survive the falsifier.
#[test]
fn constructor_families_pass_falsifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(4003);
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n.min(3));
        let complex = RationalMatrix::from_fn(n, k, |_, _| random_gaussian(&mut rng, 3)).unwrap();
        let sq = sq_minor_poly(&complex).unwrap();
        if !sq.is_zero() {
            assert!(
                matches!(
                    falsify_stability(&sq, 400, rng.gen()).unwrap(),
                    StabilityVerdict::NoCounterexampleFound { .. }
                ),
                "square-minor polynomial refuted: {sq:?}"
            );
        }

        let nonneg = RationalMatrix::from_fn(n, k, |_, _| {
            GaussianRational::from_ratio(rng.gen_range(0..=6), rng.gen_range(1..=3))
        })
        .unwrap();
        let per = permanent_poly(&nonneg).unwrap();
        if !per.is_zero() {
            assert!(
                matches!(
                    falsify_stability(&per, 400, rng.gen()).unwrap(),
                    StabilityVerdict::NoCounterexampleFound { .. }
                ),
                "permanent polynomial refuted: {per:?}"
            );
        }
        done += 1;
    }
}

/// Elementary symmetric polynomials are stable (classical); the pipeline
/// agrees through the oracle or the sampler.
#[test]
fn elementary_symmetric_is_never_refuted() {
    for n in 2..=5usize {
        for k in 1..=n {
            let e = elementary_symmetric(n, k).unwrap();
            assert!(
                !matches!(
                    falsify_stability(&e, 1500, (n * 10 + k) as u64).unwrap(),
                    StabilityVerdict::NotStable(_)
                ),
                "e_{k}({n}) was refuted"
            );
        }
    }
}
