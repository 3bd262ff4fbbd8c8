//! Stability and Rayleigh testing.
//!
//! Three routes with strictly separated trust levels:
//! - exact certificates (PSD Gram matrices for degree-2 homogeneous
//!   inputs, phase violations for homogeneous inputs),
//! - the Grassmannian oracle (exact, applies when the coefficients
//!   satisfy the Plücker relations),
//! - the numeric falsifier (never certifies, only refutes with a
//!   residual-checked witness).
//!
//! A floating counterexample is never allowed to override an exact
//! certificate; the pipeline runs oracle → exact → sampler in that fixed
//! order.

mod falsify;

pub use falsify::{
    falsify_stability, revalidate_zero_witness, FALSIFIER_INTERIOR_MARGIN, FALSIFIER_RESIDUAL_COEFF,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grassmann::{
    polynomial_to_plucker, PluckerReadback, RelationViolation, TnnPointCertificate,
};
use crate::matrix::RationalMatrix;
use crate::poly::{MultiaffinePoly, PhaseNormalization, SparsePoly};
use crate::scalar::{GaussianRational, Rational};
use crate::tnn::{is_psd, PsdCertificate};
use crate::varset::{k_subsets, VarSet};

/// Exact certificate backing a `StableCertified` verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum StableCertificate {
    /// The zero polynomial is stable by definition.
    ZeroPolynomial,
    /// Every pairwise Rayleigh difference has a PSD Gram matrix.
    AllPairsPsd { pairs: usize },
}

/// Witness carried by every `NotStable` verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum NotStableWitness {
    /// Δ_ij f < 0 at an exact rational point, with the negative principal
    /// minor of the Gram matrix that located it.
    NegativeRayleigh {
        i: usize,
        j: usize,
        minor_set: VarSet,
        minor_value: Rational,
        point: Vec<Rational>,
        value: Rational,
    },
    /// Two coefficients of a homogeneous polynomial on different rays
    /// (refutation via the phase theorem).
    PhaseViolation {
        base_monomial: VarSet,
        base_coeff: GaussianRational,
        offending_monomial: VarSet,
        offending_coeff: GaussianRational,
    },
    /// Numerically refined zero in the open upper half-plane product.
    UpperHalfPlaneZero {
        /// (re, im) per coordinate.
        point: Vec<(f64, f64)>,
        residual: f64,
        residual_bound: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum StabilityVerdict {
    StableCertified(StableCertificate),
    /// Exact Grassmannian route: relations hold and the normalized
    /// coordinates are nonnegative rationals.
    StableOracle {
        normalized: Vec<Rational>,
    },
    NotStable(NotStableWitness),
    NoCounterexampleFound {
        samples: u64,
    },
}

impl StabilityVerdict {
    pub fn is_stable_certified(&self) -> bool {
        matches!(
            self,
            StabilityVerdict::StableCertified(_) | StabilityVerdict::StableOracle { .. }
        )
    }

    pub fn is_not_stable(&self) -> bool {
        matches!(self, StabilityVerdict::NotStable(_))
    }
}

/// Δ_ij f = ∂_i f · ∂_j f − f · ∂_i ∂_j f, exact.
pub fn rayleigh_difference(f: &MultiaffinePoly, i: usize, j: usize) -> Result<SparsePoly> {
    if i == j {
        return Err(Error::Precondition(
            "Rayleigh difference needs distinct variables".into(),
        ));
    }
    if !f.is_real() {
        return Err(Error::Domain(
            "Rayleigh difference requires real coefficients".into(),
        ));
    }
    let fs: SparsePoly = f.into();
    let di = fs.partial_derivative(i)?;
    let dj = fs.partial_derivative(j)?;
    let dij = di.partial_derivative(j)?;
    di.mul(&dj)?.sub(&fs.mul(&dij)?)
}

/// Gram matrix of a quadratic form, restricted to the variables that
/// actually appear: x_l² on the diagonal, x_l x_m split evenly
/// off-diagonal. Returns the matrix and the 1-based original index of
/// each Gram row.
fn quadratic_gram(q: &SparsePoly) -> Result<(RationalMatrix, Vec<usize>)> {
    let n = q.num_vars();
    let mut used = vec![false; n];
    for (exps, _) in q.expanded_terms() {
        for (idx, &e) in exps.iter().enumerate() {
            if e > 0 {
                used[idx] = true;
            }
        }
    }
    let vars: Vec<usize> = (1..=n).filter(|&v| used[v - 1]).collect();
    let local: std::collections::BTreeMap<usize, usize> =
        vars.iter().enumerate().map(|(pos, &v)| (v, pos)).collect();
    let m = vars.len();
    let mut gram = RationalMatrix::zeros(m.max(1), m.max(1))?;
    let half = GaussianRational::from_ratio(1, 2);
    for (exps, coeff) in q.expanded_terms() {
        let support: Vec<(usize, u8)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(idx, &e)| (local[&(idx + 1)], e))
            .collect();
        match support.as_slice() {
            [(l, 2)] => {
                let cur = gram.get(*l, *l) + &coeff;
                gram.set(*l, *l, cur);
            }
            [(l, 1), (m, 1)] => {
                let shared = &coeff * &half;
                let cur_lm = gram.get(*l, *m) + &shared;
                gram.set(*l, *m, cur_lm);
                let cur_ml = gram.get(*m, *l) + &shared;
                gram.set(*m, *l, cur_ml);
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "not a quadratic form: term with exponents {exps:?}"
                )))
            }
        }
    }
    Ok((gram, vars))
}

/// Exact rational point where xᵀSx < 0, for a symmetric rational S that
/// is not PSD. Recursive descent: a negative diagonal entry is immediate;
/// an all-zero diagonal yields a two-coordinate witness; otherwise pivot
/// on a positive diagonal entry and recurse on the Schur complement.
fn negative_direction(s: &RationalMatrix) -> Vec<Rational> {
    let n = s.rows();
    let zero = Rational::zero();
    // negative diagonal entry
    for l in 0..n {
        if s.get(l, l).re().is_negative() {
            let mut x = vec![zero.clone(); n];
            x[l] = Rational::one();
            return x;
        }
    }
    // all-zero diagonal: use the largest off-diagonal entry
    if (0..n).all(|l| s.get(l, l).is_zero()) {
        for l in 0..n {
            for m in l + 1..n {
                let v = s.get(l, m).re();
                if !v.is_zero() {
                    let mut x = vec![zero.clone(); n];
                    x[l] = Rational::one();
                    x[m] = if v.is_positive() {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    return x;
                }
            }
        }
        unreachable!("zero matrix is PSD");
    }
    // pivot on a positive diagonal entry
    let pivot = (0..n)
        .find(|&l| s.get(l, l).re().is_positive())
        .expect("some diagonal entry is positive here");
    let p = s.get(pivot, pivot).re().clone();
    let others: Vec<usize> = (0..n).filter(|&l| l != pivot).collect();
    let schur = RationalMatrix::from_fn(n - 1, n - 1, |r, c| {
        let (lr, lc) = (others[r], others[c]);
        let correction =
            &(s.get(pivot, lr) * s.get(pivot, lc)) / &GaussianRational::from_rational(p.clone());
        s.get(lr, lc) - &correction
    })
    .expect("n ≥ 2 in the pivot branch");
    let sub = negative_direction(&schur);
    let mut x = vec![zero; n];
    let mut pivot_coord = Rational::zero();
    for (idx, &l) in others.iter().enumerate() {
        x[l] = sub[idx].clone();
        pivot_coord += s.get(pivot, l).re() * &sub[idx];
    }
    x[pivot] = -pivot_coord / &p;
    x
}

/// Exact stability decision for real homogeneous multiaffine degree-2
/// input: every Δ_ij is a quadratic form, and f is stable iff every Gram
/// matrix is PSD.
pub fn exact_stability_deg2(f: &MultiaffinePoly) -> Result<StabilityVerdict> {
    if !f.is_real() {
        return Err(Error::Domain(
            "exact degree-2 test requires real coefficients".into(),
        ));
    }
    if f.homogeneous_degree() != Some(2) {
        return Err(Error::Precondition(
            "exact degree-2 test requires a homogeneous degree-2 polynomial".into(),
        ));
    }
    let n = f.num_vars();
    let mut pairs = 0usize;
    for i in 1..=n {
        for j in i + 1..=n {
            let delta = rayleigh_difference(f, i, j)?;
            if delta.is_zero() {
                pairs += 1;
                continue;
            }
            let (gram, vars) = quadratic_gram(&delta)?;
            match is_psd(&gram)? {
                PsdCertificate::PositiveSemidefinite => {
                    pairs += 1;
                }
                PsdCertificate::NegativePrincipalMinor { set, value } => {
                    let local_point = negative_direction(&gram);
                    let mut point = vec![Rational::zero(); n];
                    for (pos, &v) in vars.iter().enumerate() {
                        point[v - 1] = local_point[pos].clone();
                    }
                    // map the witness minor back to original variable
                    // indices
                    let minor_set = VarSet::from_indices(
                        &set.iter().map(|local| vars[local - 1]).collect::<Vec<_>>(),
                    )?;
                    let at = delta.evaluate_exact(&point)?.re().clone();
                    debug_assert!(at.is_negative(), "witness must be exactly negative");
                    return Ok(StabilityVerdict::NotStable(
                        NotStableWitness::NegativeRayleigh {
                            i,
                            j,
                            minor_set,
                            minor_value: value,
                            point,
                            value: at,
                        },
                    ));
                }
            }
        }
    }
    Ok(StabilityVerdict::StableCertified(
        StableCertificate::AllPairsPsd { pairs },
    ))
}

/// The closed-form discriminant condition for 4-variable degree-2
/// polynomials with nonnegative coefficients, returned exactly:
/// Σ (a_ij a_kl)² − 2·(pairwise products), stable iff ≤ 0. Input order
/// (a12, a13, a14, a23, a24, a34).
pub fn inequality_4vars(a: &[Rational; 6]) -> Result<(Rational, bool)> {
    if a.iter().any(|v| v.is_negative()) {
        return Err(Error::Precondition(
            "inequality takes nonnegative coefficients".into(),
        ));
    }
    let [a12, a13, a14, a23, a24, a34] = a;
    let p = a12 * a34;
    let q = a13 * a24;
    let r = a14 * a23;
    let two = Rational::from_integer(BigInt::from(2));
    let lhs = &p * &p + &q * &q + &r * &r - &two * (&p * &q + &q * &r + &p * &r);
    let stable = !lhs.is_positive();
    Ok((lhs, stable))
}

/// Outcome of the Grassmannian oracle: a stability verdict when the
/// coefficients satisfy the Plücker relations, or a distinct
/// inapplicability signal when they do not.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleOutcome {
    Verdict(StabilityVerdict),
    Inapplicable(RelationViolation),
}

/// Exact stability decision for homogeneous multiaffine polynomials whose
/// coefficients satisfy the Plücker relations: stable iff the represented
/// point is totally nonnegative. NotStable answers come with the
/// phase-theorem sign witness.
pub fn grassmann_stability_oracle(f: &MultiaffinePoly) -> Result<OracleOutcome> {
    let readback = polynomial_to_plucker(f)?;
    Ok(match readback {
        PluckerReadback::NotGrassmannian(v) => OracleOutcome::Inapplicable(v),
        PluckerReadback::Point(point) => match crate::grassmann::is_tnn_point(point.plucker()) {
            TnnPointCertificate::TnnPoint { normalized } => {
                OracleOutcome::Verdict(StabilityVerdict::StableOracle { normalized })
            }
            TnnPointCertificate::NotTnn {
                base_set,
                base_coeff,
                offending_set,
                offending_coeff,
            } => OracleOutcome::Verdict(StabilityVerdict::NotStable(
                NotStableWitness::PhaseViolation {
                    base_monomial: base_set,
                    base_coeff,
                    offending_monomial: offending_set,
                    offending_coeff,
                },
            )),
            TnnPointCertificate::NotGrassmannian(v) => OracleOutcome::Inapplicable(v),
        },
    })
}

/// Result of the Rayleigh sampler.
#[derive(Clone, Debug, PartialEq)]
pub enum RayleighCheck {
    NoViolationFound {
        pairs: usize,
        points_per_pair: usize,
    },
    Violation {
        i: usize,
        j: usize,
        point: Vec<Rational>,
        value: Rational,
    },
}

impl RayleighCheck {
    pub fn holds(&self) -> bool {
        matches!(self, RayleighCheck::NoViolationFound { .. })
    }
}

/// Evaluate every Δ_ij f at unit points, the all-ones point, and
/// `samples` random nonnegative rational points, exactly. This is a
/// sampler, not a decision procedure: a clean pass does not certify the
/// Rayleigh property.
pub fn check_rayleigh(f: &MultiaffinePoly, samples: usize, seed: u64) -> Result<RayleighCheck> {
    if !f.is_real() {
        return Err(Error::Domain(
            "Rayleigh check requires real coefficients".into(),
        ));
    }
    let n = f.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Rational::one();
    let zero = Rational::zero();
    for i in 1..=n {
        for j in i + 1..=n {
            // Evaluate through the factored form; cheaper than expanding
            // Δ_ij and exactly equal to it.
            let fi = f.partial_derivative(i)?;
            let fj = f.partial_derivative(j)?;
            let fij = fi.partial_derivative(j)?;
            let mut points: Vec<Vec<Rational>> = Vec::with_capacity(samples + n + 1);
            for u in 1..=n {
                let mut e = vec![zero.clone(); n];
                e[u - 1] = one.clone();
                points.push(e);
            }
            points.push(vec![one.clone(); n]);
            for _ in 0..samples {
                points.push(
                    (0..n)
                        .map(|_| {
                            let p: i64 = rng.gen_range(0..=24);
                            let q: i64 = rng.gen_range(1..=6);
                            Rational::new(BigInt::from(p), BigInt::from(q))
                        })
                        .collect(),
                );
            }
            let total = points.len();
            for point in points {
                let vi = fi.evaluate_exact(&point)?;
                let vj = fj.evaluate_exact(&point)?;
                let vf = f.evaluate_exact(&point)?;
                let vij = fij.evaluate_exact(&point)?;
                let delta = &(&vi * &vj) - &(&vf * &vij);
                debug_assert!(delta.is_real());
                if delta.re().is_negative() {
                    return Ok(RayleighCheck::Violation {
                        i,
                        j,
                        point,
                        value: delta.re().clone(),
                    });
                }
            }
            let _ = total;
        }
    }
    Ok(RayleighCheck::NoViolationFound {
        pairs: n * (n - 1) / 2,
        points_per_pair: samples + n + 1,
    })
}

/// Σ_{|I| = k} x^I with unit coefficients.
pub fn elementary_symmetric(n: usize, k: usize) -> Result<MultiaffinePoly> {
    if k > n {
        return Err(Error::IndexOutOfRange(format!(
            "elementary symmetric degree {k} exceeds {n} variables"
        )));
    }
    MultiaffinePoly::from_terms(
        n,
        k_subsets(n, k)
            .into_iter()
            .map(|s| (s, GaussianRational::one())),
    )
}

/// Σ_I |det M[I]|² x^I for a complex n×k matrix, exact.
pub fn sq_minor_poly(m: &RationalMatrix) -> Result<MultiaffinePoly> {
    let n = m.rows();
    let k = m.cols();
    if k > n {
        return Err(Error::DimensionMismatch(format!(
            "matrix must be tall, got {n}×{k}"
        )));
    }
    let full_cols = VarSet::full(k);
    MultiaffinePoly::from_terms(
        n,
        k_subsets(n, k)
            .into_iter()
            .map(|rows| {
                let d = m.minor(rows, full_cols)?;
                Ok((rows, GaussianRational::from_rational(d.norm_sqr())))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Exact permanent via the column-subset recurrence.
fn permanent(entries: &[Vec<Rational>]) -> Rational {
    let k = entries.len();
    let mut table = vec![Rational::zero(); 1 << k];
    table[0] = Rational::one();
    for row in entries.iter().take(k) {
        // iterate subsets by popcount implicitly: process in decreasing
        // index order so each row is applied exactly once
        let mut next = vec![Rational::zero(); 1 << k];
        for (mask, val) in table.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            for c in 0..k {
                if mask & (1 << c) == 0 {
                    let add = val * &row[c];
                    next[mask | (1 << c)] += add;
                }
            }
        }
        table = next;
    }
    table[(1 << k) - 1].clone()
}

/// Σ_I per(M[I]) x^I for an entrywise nonnegative real n×k matrix.
pub fn permanent_poly(m: &RationalMatrix) -> Result<MultiaffinePoly> {
    let n = m.rows();
    let k = m.cols();
    if k > n {
        return Err(Error::DimensionMismatch(format!(
            "matrix must be tall, got {n}×{k}"
        )));
    }
    if k > 8 {
        return Err(Error::SizeCap(format!(
            "permanent expansion capped at k ≤ 8, got {k}"
        )));
    }
    let real = m
        .real_entries()
        .map_err(|_| Error::Domain("permanent polynomial requires real entries".into()))?;
    if real.iter().flatten().any(|v| v.is_negative()) {
        return Err(Error::Precondition(
            "permanent polynomial requires nonnegative entries".into(),
        ));
    }
    MultiaffinePoly::from_terms(
        n,
        k_subsets(n, k).into_iter().map(|rows| {
            let sub: Vec<Vec<Rational>> = rows.iter().map(|r| real[r - 1].clone()).collect();
            (rows, GaussianRational::from_rational(permanent(&sub)))
        }),
    )
}

/// Decision method for the stability pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityMethod {
    /// oracle → exact → sampler, first applicable route wins.
    Auto,
    Oracle,
    Exact,
    Sample,
}

/// Pipeline outcome: a verdict, or the reason the requested route does
/// not apply to this input.
#[derive(Clone, Debug, PartialEq)]
pub enum StabilityAssessment {
    Verdict(StabilityVerdict),
    OracleInapplicable(RelationViolation),
    ExactInapplicable(String),
}

impl StabilityAssessment {
    pub fn verdict(&self) -> Option<&StabilityVerdict> {
        match self {
            StabilityAssessment::Verdict(v) => Some(v),
            _ => None,
        }
    }
}

/// Exact refutation routes for homogeneous input: phase violation first,
/// then the degree-2 Gram certificates (after phase normalization when
/// the input is complex).
fn exact_homogeneous_route(f: &MultiaffinePoly) -> Result<Option<StabilityVerdict>> {
    match f.phase_normalize()? {
        PhaseNormalization::NotSamePhase {
            base_monomial,
            base_coeff,
            offending_monomial,
            offending_coeff,
        } => Ok(Some(StabilityVerdict::NotStable(
            NotStableWitness::PhaseViolation {
                base_monomial,
                base_coeff,
                offending_monomial,
                offending_coeff,
            },
        ))),
        PhaseNormalization::Normalized { normalized, .. } => {
            if f.homogeneous_degree() == Some(2) {
                // stability is invariant under nonzero scaling, so the
                // certificate for the normalized representative decides f
                let target = if f.is_real() { f } else { &normalized };
                Ok(Some(exact_stability_deg2(target)?))
            } else {
                Ok(None)
            }
        }
    }
}

/// Fixed-order stability pipeline shared by the CLI and the preserver
/// tests.
pub fn assess_stability(
    f: &MultiaffinePoly,
    method: StabilityMethod,
    samples: u64,
    seed: u64,
) -> Result<StabilityAssessment> {
    if f.is_zero() {
        return Ok(StabilityAssessment::Verdict(
            StabilityVerdict::StableCertified(StableCertificate::ZeroPolynomial),
        ));
    }
    let homogeneous = f.homogeneous_degree().is_some();
    match method {
        StabilityMethod::Oracle => {
            if !homogeneous {
                return Ok(StabilityAssessment::ExactInapplicable(
                    "oracle requires a homogeneous polynomial".into(),
                ));
            }
            Ok(match grassmann_stability_oracle(f)? {
                OracleOutcome::Verdict(v) => StabilityAssessment::Verdict(v),
                OracleOutcome::Inapplicable(v) => StabilityAssessment::OracleInapplicable(v),
            })
        }
        StabilityMethod::Exact => {
            if !homogeneous {
                return Ok(StabilityAssessment::ExactInapplicable(
                    "exact certificates exist only for homogeneous input".into(),
                ));
            }
            match exact_homogeneous_route(f)? {
                Some(v) => Ok(StabilityAssessment::Verdict(v)),
                None => Ok(StabilityAssessment::ExactInapplicable(
                    "no exact route beyond the phase check for this degree".into(),
                )),
            }
        }
        StabilityMethod::Sample => Ok(StabilityAssessment::Verdict(falsify_stability(
            f, samples, seed,
        )?)),
        StabilityMethod::Auto => {
            if homogeneous {
                if let OracleOutcome::Verdict(v) = grassmann_stability_oracle(f)? {
                    return Ok(StabilityAssessment::Verdict(v));
                }
                if let Some(v) = exact_homogeneous_route(f)? {
                    return Ok(StabilityAssessment::Verdict(v));
                }
            }
            Ok(StabilityAssessment::Verdict(falsify_stability(
                f, samples, seed,
            )?))
        }
    }
}
