//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its trial counts and elapsed time (run with `--nocapture` to see
//! the lines for passing tests).

mod common;

use std::time::Instant;

use common::*;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnn_stable::grassmann::{
    act, base_point_matrix, basis_indicator_polynomial, check_plucker_relations, dual_embedding,
    is_tnn_point, plucker_of_matrix, point_of_matrix, representing_polynomial,
    symbol_coefficients_as_plucker, TnnPointCertificate,
};
use tnn_stable::matrix::RationalMatrix;
use tnn_stable::numeric::{float_tnn_check, matrix_exp};
use tnn_stable::operators::symbol;
use tnn_stable::operators::test_sharp_preserver_exact;
use tnn_stable::operators::{
    apply_f64_table, exp_delta, sharp_of_matrix, sharp_operator_table_f64, sharp_via_generators,
    SharpPreserverVerdict,
};
use tnn_stable::poly::{MultiaffinePoly, PhaseNormalization, SparsePoly};
use tnn_stable::scalar::{GaussianRational, Rational};
use tnn_stable::stability::{
    check_rayleigh, elementary_symmetric, exact_stability_deg2, falsify_stability,
    grassmann_stability_oracle, inequality_4vars, rayleigh_difference, OracleOutcome,
    StabilityVerdict,
};
use tnn_stable::tnn::{
    is_totally_nonnegative, random_non_tnn_matrix, random_tnn_word, random_tp_matrix,
    word_to_matrix,
};
use tnn_stable::varset::k_subsets;

fn report(id: u32, what: &str, details: String, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("ACCEPTANCE {id:2} {what}: PASS ({details}; {elapsed:.2}s of {budget_secs}s budget)");
    assert!(
        elapsed < budget_secs,
        "criterion {id} exceeded its runtime budget: {elapsed:.2}s"
    );
}

fn four_var_poly(tuple: &[Rational; 6]) -> MultiaffinePoly {
    MultiaffinePoly::from_terms(
        4,
        k_subsets(4, 2)
            .into_iter()
            .zip(tuple.iter())
            .map(|(s, c)| (s, GaussianRational::from_rational(c.clone()))),
    )
    .unwrap()
}

fn random_nonneg_tuple(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> [Rational; 6] {
    std::array::from_fn(|_| {
        Rational::new(
            rng.gen_range(0..=max_num).into(),
            rng.gen_range(1..=max_den).into(),
        )
    })
}

/// Criterion 1: the displayed Δ13 formula is reproduced exactly on 100
/// random nonnegative coefficient tuples, checked both symbolically and
/// at 50 random rational points per tuple.
#[test]
fn criterion_01_delta13_formula() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..100 {
        let tuple = random_nonneg_tuple(&mut rng, 10, 6);
        let [a12, a13, a14, a23, a24, a34] = tuple.clone();
        let f = four_var_poly(&tuple);
        let computed = rayleigh_difference(&f, 1, 3).unwrap();

        // a12a23·x2² + (a12a34 − a13a24 + a14a23)·x2x4 + a14a34·x4²
        let term = |exps: &[u8; 4], c: Rational| {
            SparsePoly::term(4, exps, GaussianRational::from_rational(c)).unwrap()
        };
        let expected = term(&[0, 2, 0, 0], &a12 * &a23)
            .add(&term(
                &[0, 1, 0, 1],
                &(&a12 * &a34) - &(&a13 * &a24) + &a14 * &a23,
            ))
            .unwrap()
            .add(&term(&[0, 0, 0, 2], &a14 * &a34))
            .unwrap();
        assert_eq!(computed, expected, "trial {trial}: symbolic mismatch");

        for _ in 0..50 {
            let point: Vec<Rational> = (0..4)
                .map(|_| Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()))
                .collect();
            assert_eq!(
                computed.evaluate_exact(&point).unwrap(),
                expected.evaluate_exact(&point).unwrap(),
                "trial {trial}: evaluation mismatch at {point:?}"
            );
        }
    }
    report(
        1,
        "Δ13 closed form",
        "100/100 tuples × 50 points".into(),
        started,
        1.0,
    );
}

/// Criterion 2: the discriminant inequality and the PSD certificates
/// agree on 500 random nonnegative 6-tuples with denominators ≤ 20.
#[test]
fn criterion_02_inequality_psd_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut agreements = 0;
    for trial in 0..500 {
        let tuple = random_nonneg_tuple(&mut rng, 20, 20);
        let (_, stable_by_inequality) = inequality_4vars(&tuple).unwrap();
        let f = four_var_poly(&tuple);
        let stable_by_psd = if f.is_zero() {
            true
        } else {
            matches!(
                exact_stability_deg2(&f).unwrap(),
                StabilityVerdict::StableCertified(_)
            )
        };
        assert_eq!(
            stable_by_inequality, stable_by_psd,
            "trial {trial}: tuple {tuple:?}"
        );
        agreements += 1;
    }
    report(
        2,
        "inequality ⇔ PSD",
        format!("{agreements}/500 agreements"),
        started,
        10.0,
    );
}

/// Criterion 3: stability of representing polynomials of totally
/// positive actions — oracle, falsifier (10⁴ samples), and for k = 2
/// the exact Gram route, 100/100.
#[test]
fn criterion_03_tp_actions_are_stable() {
    let started = Instant::now();
    let mut passes = 0;
    for trial in 0..100u64 {
        let n = (trial % 3 + 4) as usize; // 4, 5, 6
        let k = (trial % 2 + 2) as usize; // 2, 3
        let a = random_tp_matrix(n, 103_000 + trial).unwrap();
        let v0 = point_of_matrix(&base_point_matrix(n, k).unwrap()).unwrap();
        let f = representing_polynomial(act(&a, &v0).unwrap().plucker());

        match grassmann_stability_oracle(&f).unwrap() {
            OracleOutcome::Verdict(StabilityVerdict::StableOracle { .. }) => {}
            other => panic!("trial {trial}: oracle said {other:?}"),
        }
        match falsify_stability(&f, 10_000, trial).unwrap() {
            StabilityVerdict::NoCounterexampleFound { .. } => {}
            other => panic!("trial {trial}: falsifier said {other:?}"),
        }
        if k == 2 {
            match exact_stability_deg2(&f).unwrap() {
                StabilityVerdict::StableCertified(_) => {}
                other => panic!("trial {trial}: exact route said {other:?}"),
            }
        }
        passes += 1;
    }
    report(
        3,
        "TP action forward",
        format!("{passes}/100 trials"),
        started,
        300.0,
    );
}

/// Criterion 4: Grassmannian points with genuinely mixed coordinate
/// signs (negated row of a representing matrix) are refuted by the
/// oracle, and confirmed NotStable by the exact degree-2 route, 100%.
#[test]
fn criterion_04_phase_direction() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut passes = 0;
    for trial in 0..100u64 {
        let n = (trial % 3 + 4) as usize;
        let k = 2;
        let a = random_tp_matrix(n, 104_000 + trial).unwrap();
        let moved = a.matmul(&base_point_matrix(n, k).unwrap()).unwrap();
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
        assert!(check_plucker_relations(&p).holds(), "trial {trial}");
        assert!(
            matches!(is_tnn_point(&p), TnnPointCertificate::NotTnn { .. }),
            "trial {trial}: expected NotTnn"
        );
        let f = representing_polynomial(&p);
        match grassmann_stability_oracle(&f).unwrap() {
            OracleOutcome::Verdict(StabilityVerdict::NotStable(_)) => {}
            other => panic!("trial {trial}: oracle said {other:?}"),
        }
        match exact_stability_deg2(&f).unwrap() {
            StabilityVerdict::NotStable(_) => {}
            other => panic!("trial {trial}: exact route said {other:?}"),
        }
        passes += 1;
    }
    report(
        4,
        "phase direction",
        format!("{passes}/100 implications"),
        started,
        120.0,
    );
}

/// Criterion 5: the exact preserver loop. TNN words give TruePreserver
/// with falsifier-clean symbols; matrices with a negative minor give
/// NotPreserver with a revalidating witness and a same-phase failure in
/// the symbol. 200/200.
#[test]
fn criterion_05_preserver_loop() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut passes = 0;
    for trial in 0..100u64 {
        let n = (trial % 5 + 2) as usize; // 2..=6
        let w = random_tnn_word(n, rng.gen_range(0..=10), 105_000 + trial).unwrap();
        let a = word_to_matrix(&w);
        assert!(
            test_sharp_preserver_exact(&a).unwrap().is_preserver(),
            "trial {trial}(i)"
        );
        let h = symbol(&sharp_of_matrix(&a).unwrap()).unwrap();
        match falsify_stability(&h, 120, trial).unwrap() {
            StabilityVerdict::NoCounterexampleFound { .. } => {}
            other => panic!("trial {trial}(i): symbol falsified: {other:?}"),
        }
        passes += 1;
    }
    for trial in 0..100u64 {
        let n = (trial % 5 + 2) as usize;
        let (a, _, _) = random_non_tnn_matrix(n, 105_500 + trial).unwrap();
        match test_sharp_preserver_exact(&a).unwrap() {
            SharpPreserverVerdict::NotPreserver { rows, cols, value } => {
                // the witness minor recomputes to the same negative value
                let recomputed = a.minor(rows, cols).unwrap();
                assert_eq!(recomputed.re().clone(), value, "trial {trial}(ii)");
                assert!(value < rat(0, 1), "trial {trial}(ii)");
            }
            SharpPreserverVerdict::TruePreserver => {
                panic!("trial {trial}(ii): negative-minor matrix declared a preserver")
            }
        }
        let h = symbol(&sharp_of_matrix(&a).unwrap()).unwrap();
        match h.phase_normalize().unwrap() {
            PhaseNormalization::NotSamePhase { .. } => {}
            PhaseNormalization::Normalized { .. } => {
                panic!("trial {trial}(ii): symbol unexpectedly same-phase")
            }
        }
        passes += 1;
    }
    report(
        5,
        "preserver loop",
        format!("{passes}/200 trials"),
        started,
        120.0,
    );
}

/// Criterion 6: on the 256-point rational grid, exact symbol stability
/// equals total nonnegativity of Q, which reduces to −4bc(ad−bc) ≤ 0.
#[test]
fn criterion_06_lemma_2x2_boundary() {
    let started = Instant::now();
    let grid = [rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)];
    let mut checked = 0;
    for a in &grid {
        for b in &grid {
            for c in &grid {
                for d in &grid {
                    let q = RationalMatrix::from_rows(vec![
                        vec![
                            GaussianRational::from_rational(a.clone()),
                            GaussianRational::from_rational(c.clone()),
                        ],
                        vec![
                            GaussianRational::from_rational(b.clone()),
                            GaussianRational::from_rational(d.clone()),
                        ],
                    ])
                    .unwrap();
                    let h = symbol(&sharp_of_matrix(&q).unwrap()).unwrap();
                    let det = &(a * d) - &(b * c);

                    let stable = if h.is_zero() {
                        true
                    } else {
                        assert_eq!(h.homogeneous_degree(), Some(2), "symbol not homogeneous");
                        // six coefficients in pair order over (x1,x2,y1,y2)
                        let coeffs = [
                            h.coeff(vs(&[1, 2])), // ad − bc
                            h.coeff(vs(&[1, 3])), // c
                            h.coeff(vs(&[1, 4])), // a
                            h.coeff(vs(&[2, 3])), // d
                            h.coeff(vs(&[2, 4])), // b
                            h.coeff(vs(&[3, 4])), // 1
                        ];
                        if coeffs.iter().any(|v| !v.is_real_nonnegative()) {
                            false // mixed phases in a homogeneous polynomial
                        } else {
                            let tuple: [Rational; 6] =
                                std::array::from_fn(|i| coeffs[i].re().clone());
                            let (lhs, stable) = inequality_4vars(&tuple).unwrap();
                            // the displayed reduction −4bc(ad−bc)
                            let reduction = rat(-4, 1) * b.clone() * c.clone() * det.clone();
                            assert_eq!(lhs, reduction, "reduction mismatch at {a} {b} {c} {d}");
                            stable
                        }
                    };
                    let tnn = is_totally_nonnegative(&q).unwrap().is_tnn();
                    assert_eq!(
                        stable, tnn,
                        "grid point a={a} b={b} c={c} d={d}: stable {stable} vs TNN {tnn}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 256);
    report(
        6,
        "2×2 boundary grid",
        "256/256 grid points".into(),
        started,
        5.0,
    );
}

/// Criterion 7: exp(tδ_Z) equals the sharp action of exp(tZ) to 1e−8
/// for tridiagonal Z, and exp(tZ) passes the float TNN check, 150/150.
#[test]
fn criterion_07_exp_delta_vs_sharp_exp() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut comparisons = 0;
    for trial in 0..50 {
        let n = trial % 3 + 3; // 3, 4, 5
        let z = RationalMatrix::from_fn(n, n, |r, c| {
            if r == c {
                GaussianRational::from_ratio(rng.gen_range(-8..=8), 4)
            } else if r.abs_diff(c) == 1 {
                GaussianRational::from_ratio(rng.gen_range(0..=8), 4)
            } else {
                GaussianRational::zero()
            }
        })
        .unwrap();
        let zf = z.to_f64().unwrap();
        for t in [0.1, 0.5, 1.0] {
            let lhs = exp_delta(&z, t, 1e-12).unwrap();
            let etz = matrix_exp(&zf, t, 24).unwrap();
            let rhs = sharp_operator_table_f64(&etz).unwrap();
            let diff = inf_norm_diff(&lhs, &rhs);
            assert!(
                diff <= 1e-8,
                "trial {trial}, t {t}: operator tables differ by {diff}"
            );
            assert!(
                float_tnn_check(&etz, 1e-9),
                "trial {trial}, t {t}: exp(tZ) failed the float TNN check"
            );
            comparisons += 1;
        }
    }
    assert_eq!(comparisons, 150);
    report(
        7,
        "exp(tδ) = exp(tZ)_#",
        "150/150 comparisons ≤ 1e-8".into(),
        started,
        60.0,
    );
}

fn inf_norm_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    tnn_stable::numeric::inf_norm(&(a - b))
}

/// Criterion 8: exp(tδ_Z) for dense Z with nonnegative off-diagonals
/// maps e₂(4) to polynomials the falsifier cannot refute (10⁴ samples),
/// 50/50.
#[test]
fn criterion_08_infinitesimal_preservers() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let f = elementary_symmetric(4, 2).unwrap();
    let mut passes = 0;
    for trial in 0..50u64 {
        // dense: every off-diagonal positive, so never tridiagonal
        let z = RationalMatrix::from_fn(4, 4, |r, c| {
            if r == c {
                GaussianRational::from_ratio(rng.gen_range(-8..=8), 4)
            } else {
                GaussianRational::from_ratio(rng.gen_range(1..=8), 4)
            }
        })
        .unwrap();
        let t = [0.1, 0.5, 1.0][(trial % 3) as usize];
        let table = exp_delta(&z, t, 1e-12).unwrap();
        let image = apply_f64_table(&table, &f).unwrap();
        match falsify_stability(&image, 10_000, 108_000 + trial).unwrap() {
            StabilityVerdict::NoCounterexampleFound { .. } => passes += 1,
            other => panic!("trial {trial} (t = {t}): {other:?}"),
        }
    }
    report(
        8,
        "infinitesimal preservers",
        format!("{passes}/50 images"),
        started,
        180.0,
    );
}

/// Criterion 9: dual-embedding coordinates equal symbol coefficients
/// under the y1 < … < yn < xn < … < x1 ordering, and TNN status
/// transfers exactly, 50/50.
#[test]
fn criterion_09_dual_embedding() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut passes = 0;
    for trial in 0..50 {
        let n = trial % 4 + 1;
        let a = if trial % 2 == 0 {
            random_matrix(&mut rng, n, n)
        } else {
            word_to_matrix(&random_tnn_word(n, rng.gen_range(0..=8), rng.gen()).unwrap())
        };
        let point = dual_embedding(&a).unwrap();
        let h = symbol(&sharp_of_matrix(&a).unwrap()).unwrap();
        assert_eq!(
            point.plucker(),
            &symbol_coefficients_as_plucker(&h).unwrap(),
            "trial {trial}: coordinates differ"
        );
        assert_eq!(
            is_tnn_point(point.plucker()).is_tnn(),
            is_totally_nonnegative(&a).unwrap().is_tnn(),
            "trial {trial}: TNN status differs"
        );
        passes += 1;
    }
    report(
        9,
        "dual embedding",
        format!("{passes}/50 matrices"),
        started,
        30.0,
    );
}

/// Criterion 10: positroid indicator polynomials of random TNN points
/// pass the exact Rayleigh sampler at 10³ points per pair, 50/50.
#[test]
fn criterion_10_positroid_rayleigh() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut passes = 0;
    for trial in 0..50u64 {
        let n = (trial % 3 + 4) as usize; // 4, 5, 6
        let k = (trial % 2 + 2) as usize; // 2, 3
        let w = random_tnn_word(n, rng.gen_range(1..=12), 110_000 + trial).unwrap();
        let a = word_to_matrix(&w);
        let v0 = point_of_matrix(&base_point_matrix(n, k).unwrap()).unwrap();
        let moved = act(&a, &v0).unwrap();
        let support = moved.plucker().positroid_support();
        let indicator = basis_indicator_polynomial(n, &support).unwrap();
        match check_rayleigh(&indicator, 1000, trial).unwrap() {
            r if r.holds() => passes += 1,
            violation => panic!("trial {trial}: support {support:?}: {violation:?}"),
        }
    }
    report(
        10,
        "positroid Rayleigh",
        format!("{passes}/50 indicators"),
        started,
        120.0,
    );
}

/// Criterion 11: the algebraic identity suite — Cauchy–Binet, sharp
/// functoriality, generator-path equality, and Plücker relations of
/// matrix minors — 100 exact instances each.
#[test]
fn criterion_11_identity_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(111);

    for trial in 0..100 {
        let n = rng.gen_range(2..=5);
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        let ab = a.matmul(&b).unwrap();
        for k in 0..=n {
            assert_eq!(
                ab.compound(k).unwrap(),
                a.compound(k)
                    .unwrap()
                    .matmul(&b.compound(k).unwrap())
                    .unwrap(),
                "Cauchy–Binet trial {trial}, k {k}"
            );
        }
    }

    for trial in 0..100 {
        let n = rng.gen_range(2..=4);
        let a = random_matrix(&mut rng, n, n);
        let b = random_matrix(&mut rng, n, n);
        assert_eq!(
            sharp_of_matrix(&a.matmul(&b).unwrap()).unwrap(),
            sharp_of_matrix(&a)
                .unwrap()
                .compose(&sharp_of_matrix(&b).unwrap())
                .unwrap(),
            "functoriality trial {trial}"
        );
    }

    for trial in 0..100 {
        let n = rng.gen_range(2..=5);
        let w = random_tnn_word(n, rng.gen_range(0..=8), rng.gen()).unwrap();
        assert_eq!(
            sharp_via_generators(&w).unwrap(),
            sharp_of_matrix(&word_to_matrix(&w)).unwrap(),
            "generator-path trial {trial}"
        );
    }

    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n);
        let m = random_matrix(&mut rng, n, k);
        let Ok(p) = plucker_of_matrix(&m) else {
            continue;
        };
        assert!(
            check_plucker_relations(&p).holds(),
            "relations trial {checked}"
        );
        checked += 1;
    }

    report(
        11,
        "identity suite",
        "4 × 100/100 identities".into(),
        started,
        60.0,
    );
}
