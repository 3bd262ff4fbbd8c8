//! Plücker coordinates and the totally nonnegative Grassmannian.
//!
//! A point of Gr(k, n) is carried as its vector of C(n, k) coordinates in
//! lexicographic k-subset order. Relation checking uses the one-element
//! exchange relations, which cut out the Grassmannian exactly.

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::MultiaffinePoly;
use crate::scalar::{GaussianRational, Rational};
use crate::varset::{binomial, k_subsets, subset_rank, VarSet};

/// Indexed family of k-subset coordinates, not all zero.
#[derive(Clone, PartialEq, Eq)]
pub struct PluckerVector {
    n: usize,
    k: usize,
    coords: Vec<GaussianRational>,
}

impl std::fmt::Debug for PluckerVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PluckerVector(n={}, k={}; ", self.n, self.k)?;
        for (set, c) in self.entries() {
            if !c.is_zero() {
                write!(f, "p{set:?}={c} ")?;
            }
        }
        write!(f, ")")
    }
}

impl PluckerVector {
    pub fn new(n: usize, k: usize, coords: Vec<GaussianRational>) -> Result<Self> {
        if k > n || n > crate::varset::MAX_VARS {
            return Err(Error::SizeCap(format!("Gr({k},{n}) out of range")));
        }
        if coords.len() != binomial(n, k) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates for Gr({k},{n}), got {}",
                binomial(n, k),
                coords.len()
            )));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::Precondition(
                "Plücker coordinates must not all vanish".into(),
            ));
        }
        Ok(PluckerVector { n, k, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[GaussianRational] {
        &self.coords
    }

    /// Coordinate at a k-subset.
    pub fn coord(&self, set: VarSet) -> &GaussianRational {
        debug_assert_eq!(set.len(), self.k);
        &self.coords[subset_rank(self.n, set)]
    }

    /// (subset, coordinate) pairs in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (VarSet, &GaussianRational)> {
        k_subsets(self.n, self.k)
            .into_iter()
            .zip(self.coords.iter())
    }

    /// {I : p(I) ≠ 0} in lexicographic order.
    pub fn positroid_support(&self) -> Vec<VarSet> {
        self.entries()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, _)| s)
            .collect()
    }
}

/// A Plücker vector together with whether the exchange relations have
/// been verified for it.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannianPoint {
    plucker: PluckerVector,
    relations_verified: bool,
}

impl GrassmannianPoint {
    pub fn plucker(&self) -> &PluckerVector {
        &self.plucker
    }

    pub fn relations_verified(&self) -> bool {
        self.relations_verified
    }

    pub fn into_plucker(self) -> PluckerVector {
        self.plucker
    }
}

/// A violated exchange relation: the (k−1)-subset, the (k+1)-subset, and
/// the nonzero value of the relation sum.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationViolation {
    pub lower: VarSet,
    pub upper: VarSet,
    pub value: GaussianRational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationCertificate {
    Ok,
    Violated(RelationViolation),
}

impl RelationCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, RelationCertificate::Ok)
    }
}

/// Certificate for membership in the totally nonnegative Grassmannian.
#[derive(Clone, Debug, PartialEq)]
pub enum TnnPointCertificate {
    /// Same-phase with nonnegative normalized coordinates (lex order).
    TnnPoint {
        normalized: Vec<Rational>,
    },
    /// Relations hold but two coordinates sit on different rays.
    NotTnn {
        base_set: VarSet,
        base_coeff: GaussianRational,
        offending_set: VarSet,
        offending_coeff: GaussianRational,
    },
    NotGrassmannian(RelationViolation),
}

impl TnnPointCertificate {
    pub fn is_tnn(&self) -> bool {
        matches!(self, TnnPointCertificate::TnnPoint { .. })
    }
}

/// Maximal minors of a rank-k matrix, in lexicographic row-set order.
pub fn plucker_of_matrix(m: &RationalMatrix) -> Result<PluckerVector> {
    let n = m.rows();
    let k = m.cols();
    if n > crate::varset::MAX_VARS {
        return Err(Error::SizeCap(format!(
            "representing matrix has {n} rows, cap is {}",
            crate::varset::MAX_VARS
        )));
    }
    if k > n {
        return Err(Error::DimensionMismatch(format!(
            "representing matrix must be tall, got {n}×{k}"
        )));
    }
    if m.rank() != k {
        return Err(Error::NotAPoint);
    }
    let coords = k_subsets(n, k)
        .into_iter()
        .map(|rows| m.minor(rows, VarSet::full(k)))
        .collect::<Result<Vec<_>>>()?;
    PluckerVector::new(n, k, coords)
}

/// Sign-of-sort coordinate p(I ∪ {j}) for a (k−1)-subset I and j ∉ I:
/// (−1)^{#i ∈ I : i > j} · p(sorted). Zero when j ∈ I.
fn signed_coord(p: &PluckerVector, lower: VarSet, j: usize) -> GaussianRational {
    if lower.contains(j) {
        return GaussianRational::zero();
    }
    let sorted = lower.insert(j);
    let inversions = lower.iter().filter(|&i| i > j).count();
    let v = p.coord(sorted).clone();
    if inversions % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Verify every one-element exchange relation
/// Σ_l (−1)^l · p(I ∪ {j_l}) · p(J ∖ {j_l}) = 0 over (k−1)-subsets I and
/// (k+1)-subsets J. The first violation in (I, J) lexicographic order is
/// returned as the witness.
pub fn check_plucker_relations(p: &PluckerVector) -> RelationCertificate {
    let n = p.n();
    let k = p.k();
    if k == 0 || k + 1 > n {
        return RelationCertificate::Ok;
    }
    for lower in k_subsets(n, k - 1) {
        for upper in k_subsets(n, k + 1) {
            let mut acc = GaussianRational::zero();
            for (l, j) in upper.iter().enumerate() {
                let first = signed_coord(p, lower, j);
                if first.is_zero() {
                    continue;
                }
                let second = p.coord(upper.remove(j));
                let term = &first * second;
                if l % 2 == 1 {
                    acc = &acc - &term;
                } else {
                    acc = &acc + &term;
                }
            }
            if !acc.is_zero() {
                return RelationCertificate::Violated(RelationViolation {
                    lower,
                    upper,
                    value: acc,
                });
            }
        }
    }
    RelationCertificate::Ok
}

/// The homogeneous multiaffine polynomial with coefficient p(I) on x^I.
pub fn representing_polynomial(p: &PluckerVector) -> MultiaffinePoly {
    MultiaffinePoly::from_terms(p.n(), p.entries().map(|(s, c)| (s, c.clone())))
        .expect("subsets fit by construction")
}

#[derive(Clone, Debug, PartialEq)]
pub enum PluckerReadback {
    Point(GrassmannianPoint),
    NotGrassmannian(RelationViolation),
}

/// Read a homogeneous multiaffine polynomial's coefficients as candidate
/// Plücker coordinates and check the relations.
pub fn polynomial_to_plucker(f: &MultiaffinePoly) -> Result<PluckerReadback> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let Some(k) = f.homogeneous_degree() else {
        return Err(Error::NotHomogeneous);
    };
    let n = f.num_vars();
    let coords = k_subsets(n, k).into_iter().map(|s| f.coeff(s)).collect();
    let p = PluckerVector::new(n, k, coords)?;
    Ok(match check_plucker_relations(&p) {
        RelationCertificate::Ok => PluckerReadback::Point(GrassmannianPoint {
            plucker: p,
            relations_verified: true,
        }),
        RelationCertificate::Violated(v) => PluckerReadback::NotGrassmannian(v),
    })
}

/// Wrap a vector known to come from a matrix (relations always hold).
pub fn point_of_matrix(m: &RationalMatrix) -> Result<GrassmannianPoint> {
    Ok(GrassmannianPoint {
        plucker: plucker_of_matrix(m)?,
        relations_verified: true,
    })
}

/// Relations first; then exact phase normalization of the coordinate
/// vector. A point is TNN iff some nonzero scaling makes every
/// coordinate a nonnegative rational, so any same-phase vector (e.g. all
/// coordinates negative) is accepted.
pub fn is_tnn_point(p: &PluckerVector) -> TnnPointCertificate {
    if let RelationCertificate::Violated(v) = check_plucker_relations(p) {
        return TnnPointCertificate::NotGrassmannian(v);
    }
    let (base_set, base) = p
        .entries()
        .find(|(_, c)| !c.is_zero())
        .map(|(s, c)| (s, c.clone()))
        .expect("Plücker vector is nonzero by invariant");
    let mut normalized = Vec::with_capacity(p.coords().len());
    for (set, c) in p.entries() {
        let ratio = c.checked_div(&base).expect("base nonzero");
        if !ratio.is_real_nonnegative() {
            return TnnPointCertificate::NotTnn {
                base_set,
                base_coeff: base,
                offending_set: set,
                offending_coeff: c.clone(),
            };
        }
        normalized.push(ratio.re().clone());
    }
    TnnPointCertificate::TnnPoint { normalized }
}

/// Indicator polynomial Σ_{I ∈ B} x^I with unit coefficients.
pub fn basis_indicator_polynomial(n: usize, bases: &[VarSet]) -> Result<MultiaffinePoly> {
    if bases.is_empty() {
        return Err(Error::Precondition("empty basis set".into()));
    }
    MultiaffinePoly::from_terms(n, bases.iter().map(|s| (*s, GaussianRational::one())))
}

/// Action of an invertible matrix on a point, computed on Plücker
/// coordinates through the k-th compound matrix.
pub fn act(a: &RationalMatrix, point: &GrassmannianPoint) -> Result<GrassmannianPoint> {
    let p = point.plucker();
    let n = p.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "acting matrix must be {n}×{n}, got {}×{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.det()?.is_zero() {
        return Err(Error::Precondition(
            "acting matrix must be invertible".into(),
        ));
    }
    let k = p.k();
    let compound = a.compound(k)?;
    let dim = binomial(n, k);
    let mut coords = vec![GaussianRational::zero(); dim];
    if k == 0 {
        coords = p.coords().to_vec();
    } else {
        for (j, coord) in coords.iter_mut().enumerate() {
            let mut acc = GaussianRational::zero();
            for (i, pc) in p.coords().iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                acc = &acc + &(compound.get(j, i) * pc);
            }
            *coord = acc;
        }
    }
    Ok(GrassmannianPoint {
        plucker: PluckerVector::new(n, k, coords)?,
        relations_verified: point.relations_verified,
    })
}

/// The same action computed on a representing matrix: minors of A·M.
/// Independent route from [`act`]; the two must agree exactly.
pub fn act_on_matrix(a: &RationalMatrix, m: &RationalMatrix) -> Result<PluckerVector> {
    plucker_of_matrix(&a.matmul(m)?)
}

/// The distinguished base point of Gr(k, n): column space of (I_k; 0),
/// represented by the monomial x^[k].
pub fn base_point_matrix(n: usize, k: usize) -> Result<RationalMatrix> {
    if k == 0 || k > n {
        return Err(Error::SizeCap(format!("base point of Gr({k},{n})")));
    }
    RationalMatrix::from_fn(n, k, |r, c| {
        if r == c {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}

/// Point of Gr(n, 2n): column space of the stacked matrix (I_n; A∨).
pub fn dual_embedding(a: &RationalMatrix) -> Result<GrassmannianPoint> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "dual embedding needs a square matrix".into(),
        ));
    }
    let n = a.rows();
    if 2 * n > crate::varset::MAX_VARS {
        return Err(Error::SizeCap(format!(
            "dual embedding lands in Gr({n},{}) which exceeds the variable cap",
            2 * n
        )));
    }
    let stacked = RationalMatrix::identity(n)?.stack_on_top_of(&a.dual()?)?;
    point_of_matrix(&stacked)
}

/// Variable ordering for comparing the dual embedding with operator
/// symbols: position p of [2n] carries y_p for p ≤ n and x_{2n+1−p} for
/// p > n, i.e. the order y1 < … < yn < xn < … < x1. Returns, for each
/// 1-based position, the symbol variable slot it reads (x_i ↦ slot i,
/// y_i ↦ slot n+i).
pub fn dual_variable_slots(n: usize) -> Vec<usize> {
    let mut slots = Vec::with_capacity(2 * n);
    for p in 1..=2 * n {
        if p <= n {
            slots.push(n + p);
        } else {
            slots.push(2 * n + 1 - p);
        }
    }
    slots
}

/// Read the coefficients of a polynomial in 2n symbol variables as a
/// Plücker vector of Gr(n, 2n) under [`dual_variable_slots`].
pub fn symbol_coefficients_as_plucker(h: &MultiaffinePoly) -> Result<PluckerVector> {
    let vars = h.num_vars();
    if vars % 2 != 0 {
        return Err(Error::DimensionMismatch(
            "symbol polynomial must have an even variable count".into(),
        ));
    }
    let n = vars / 2;
    let slots = dual_variable_slots(n);
    let coords = k_subsets(2 * n, n)
        .into_iter()
        .map(|positions| {
            let mut monomial = VarSet::EMPTY;
            for p in positions.iter() {
                monomial = monomial.insert(slots[p - 1]);
            }
            h.coeff(monomial)
        })
        .collect();
    PluckerVector::new(2 * n, n, coords)
}
