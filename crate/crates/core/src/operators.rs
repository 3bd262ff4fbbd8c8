//! Linear operators on multiaffine space.
//!
//! The matrix action is implemented twice on purpose: once through minors
//! (the degree-k block is the k-th compound matrix) and once by composing
//! the elementary-generator case analysis letter by letter. The two must
//! agree exactly and tests enforce that.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::matrix::{MinorTable, RationalMatrix};
use crate::numeric::{matrix_exp, FloatMinorTable};
use crate::poly::MultiaffinePoly;
use crate::scalar::{GaussianRational, Rational};
use crate::stability::{
    assess_stability, NotStableWitness, StabilityAssessment, StabilityMethod, StabilityVerdict,
};
use crate::tnn::{
    is_totally_nonnegative, GeneratorKind, GeneratorLetter, GeneratorWord, TnnCertificate,
};
use crate::varset::{all_subsets, VarSet, MAX_VARS};

/// Caps: the preserver test and the symbol work on 2^n basis tables.
pub const SYMBOL_MAX_N: usize = 8;
/// Dense operator tables become unreasonable past this.
pub const OPERATOR_TABLE_MAX_N: usize = 12;

/// Linear endomorphism of multiaffine space, stored by the images of the
/// 2^n monomial basis elements. A missing key means the image is zero;
/// zero images are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiaffineOperator {
    n: usize,
    images: BTreeMap<VarSet, MultiaffinePoly>,
}

impl std::fmt::Debug for MultiaffineOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MultiaffineOperator(n={}) {{", self.n)?;
        for (s, p) in &self.images {
            writeln!(f, "  x{s:?} ↦ {p:?}")?;
        }
        write!(f, "}}")
    }
}

impl MultiaffineOperator {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::SizeCap(format!(
                "operator on {n} > {MAX_VARS} variables"
            )));
        }
        Ok(MultiaffineOperator {
            n,
            images: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut op = Self::zero(n)?;
        for s in all_subsets(n) {
            op.set_image(s, MultiaffinePoly::monomial(n, s, GaussianRational::one())?);
        }
        Ok(op)
    }

    pub fn from_images(
        n: usize,
        images: impl IntoIterator<Item = (VarSet, MultiaffinePoly)>,
    ) -> Result<Self> {
        let mut op = Self::zero(n)?;
        for (s, p) in images {
            if !s.fits(n) {
                return Err(Error::IndexOutOfRange(format!(
                    "basis monomial {s:?} does not fit in {n} variables"
                )));
            }
            if p.num_vars() != n {
                return Err(Error::DimensionMismatch(format!(
                    "image of {s:?} lives in {} variables, expected {n}",
                    p.num_vars()
                )));
            }
            op.set_image(s, p);
        }
        Ok(op)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    fn set_image(&mut self, s: VarSet, p: MultiaffinePoly) {
        if p.is_zero() {
            self.images.remove(&s);
        } else {
            self.images.insert(s, p);
        }
    }

    /// Image of the basis monomial x^S (zero if unset).
    pub fn image(&self, s: VarSet) -> MultiaffinePoly {
        self.images
            .get(&s)
            .cloned()
            .unwrap_or_else(|| MultiaffinePoly::zero(self.n).expect("validated n"))
    }

    pub fn nonzero_images(&self) -> impl Iterator<Item = (VarSet, &MultiaffinePoly)> {
        self.images.iter().map(|(s, p)| (*s, p))
    }

    /// Linear extension of the basis images.
    pub fn apply(&self, f: &MultiaffinePoly) -> Result<MultiaffinePoly> {
        if f.num_vars() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator on {} variables applied to a {}-variable polynomial",
                self.n,
                f.num_vars()
            )));
        }
        let mut acc = MultiaffinePoly::zero(self.n)?;
        for (s, c) in f.terms() {
            if let Some(img) = self.images.get(&s) {
                acc = acc.add(&img.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "composition of operators on different variable counts".into(),
            ));
        }
        let mut out = Self::zero(self.n)?;
        for (s, img) in &other.images {
            out.set_image(*s, self.apply(img)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "sum of operators on different variable counts".into(),
            ));
        }
        let mut out = self.clone();
        for (s, img) in &other.images {
            let cur = out.image(*s).add(img)?;
            out.set_image(*s, cur);
        }
        Ok(out)
    }

    /// Rank over the Gaussian rationals, treating the operator as a
    /// 2^n × 2^n coefficient matrix.
    pub fn rank(&self) -> usize {
        let mut pivots: Vec<(VarSet, BTreeMap<VarSet, GaussianRational>)> = Vec::new();
        for img in self.images.values() {
            let mut row: BTreeMap<VarSet, GaussianRational> =
                img.terms().map(|(s, c)| (s, c.clone())).collect();
            for (pivot_key, pivot_row) in &pivots {
                if let Some(coeff) = row.get(pivot_key).cloned() {
                    let factor = coeff
                        .checked_div(&pivot_row[pivot_key])
                        .expect("pivot entry nonzero");
                    for (k, v) in pivot_row {
                        let cur = row.get(k).cloned().unwrap_or_else(GaussianRational::zero);
                        let next = &cur - &(&factor * v);
                        if next.is_zero() {
                            row.remove(k);
                        } else {
                            row.insert(*k, next);
                        }
                    }
                }
            }
            if let Some(first) = row.keys().next().copied() {
                pivots.push((first, row));
            }
        }
        pivots.len()
    }

    /// The C[z]-linear extension to n + m variables: x^S z^T ↦
    /// (image of x^S) · z^T.
    pub fn extend(&self, m: usize) -> Result<Self> {
        let big = self.n + m;
        if big > MAX_VARS {
            return Err(Error::SizeCap(format!(
                "extension to {big} variables exceeds the cap of {MAX_VARS}"
            )));
        }
        let extras: Vec<usize> = (self.n + 1..=big).collect();
        let mut out = Self::zero(big)?;
        for (s, img) in &self.images {
            let lifted = img.embed_in(big)?;
            // every subset T of the new variables
            for t_mask in 0u32..(1u32 << m) {
                let mut t = VarSet::EMPTY;
                for (bit, &var) in extras.iter().enumerate() {
                    if t_mask & (1 << bit) != 0 {
                        t = t.insert(var);
                    }
                }
                out.set_image(s.union(t), lifted.mul_monomial(t)?);
            }
        }
        Ok(out)
    }

    /// Dense coefficient table, basis indexed by mask (column = source
    /// basis monomial, row = target monomial).
    pub fn to_f64_table(&self) -> Result<Array2<f64>> {
        if self.n > OPERATOR_TABLE_MAX_N {
            return Err(Error::SizeCap(format!(
                "dense operator table for n = {} exceeds the cap of {OPERATOR_TABLE_MAX_N}",
                self.n
            )));
        }
        let dim = 1usize << self.n;
        let mut out = Array2::zeros((dim, dim));
        for (s, img) in &self.images {
            let col = s.mask() as usize;
            for (t, c) in img.terms() {
                out[[t.mask() as usize, col]] = c.to_complex_f64().re;
            }
        }
        Ok(out)
    }
}

/// The exterior-algebra action of a square matrix: the image of x^I is
/// Σ_{|J| = |I|} minor(A, J, I) · x^J, and constants map to themselves.
pub fn sharp_of_matrix(a: &RationalMatrix) -> Result<MultiaffineOperator> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "the sharp action needs a square matrix".into(),
        ));
    }
    let n = a.rows();
    if n > OPERATOR_TABLE_MAX_N {
        return Err(Error::SizeCap(format!(
            "sharp operator table for n = {n} exceeds the cap of {OPERATOR_TABLE_MAX_N}"
        )));
    }
    let table = MinorTable::build(a, n);
    let mut op = MultiaffineOperator::zero(n)?;
    op.set_image(
        VarSet::EMPTY,
        MultiaffinePoly::constant(n, GaussianRational::one())?,
    );
    for source in all_subsets(n) {
        let k = source.len();
        if k == 0 {
            continue;
        }
        let terms = crate::varset::k_subsets(n, k)
            .into_iter()
            .map(|target| (target, table.minor(target, source).clone()));
        op.set_image(source, MultiaffinePoly::from_terms(n, terms)?);
    }
    Ok(op)
}

/// Image of a basis monomial under a single generator letter, by the
/// four-case analysis of the embedded 2×2 block (D letters degenerate to
/// diagonal scaling of the wedge).
fn letter_image(letter: &GeneratorLetter, s: VarSet, n: usize) -> Result<MultiaffinePoly> {
    let t = GaussianRational::from_rational(letter.param.clone());
    let i = letter.index;
    match letter.kind {
        GeneratorKind::D => {
            let coeff = if s.contains(i) {
                t
            } else {
                GaussianRational::one()
            };
            MultiaffinePoly::monomial(n, s, coeff)
        }
        GeneratorKind::E => {
            // block [[1, t], [0, 1]] on variables (i, i+1)
            match (s.contains(i), s.contains(i + 1)) {
                (false, true) => {
                    // x_{i+1} ↦ t·x_i + x_{i+1}
                    let swapped = s.remove(i + 1).insert(i);
                    MultiaffinePoly::from_terms(n, [(swapped, t), (s, GaussianRational::one())])
                }
                _ => MultiaffinePoly::monomial(n, s, GaussianRational::one()),
            }
        }
        GeneratorKind::F => {
            // block [[1, 0], [t, 1]] on variables (i, i+1)
            match (s.contains(i), s.contains(i + 1)) {
                (true, false) => {
                    // x_i ↦ x_i + t·x_{i+1}
                    let swapped = s.remove(i).insert(i + 1);
                    MultiaffinePoly::from_terms(n, [(s, GaussianRational::one()), (swapped, t)])
                }
                _ => MultiaffinePoly::monomial(n, s, GaussianRational::one()),
            }
        }
    }
}

/// The sharp action of a generator word, composed letter by letter from
/// the case analysis. Must equal `sharp_of_matrix(word_to_matrix(w))`
/// exactly.
pub fn sharp_via_generators(word: &GeneratorWord) -> Result<MultiaffineOperator> {
    let n = word.n();
    let mut acc = MultiaffineOperator::identity(n)?;
    for letter in word.letters() {
        let mut next = MultiaffineOperator::zero(n)?;
        for s in all_subsets(n) {
            next.set_image(s, acc.apply(&letter_image(letter, s, n)?)?);
        }
        acc = next;
    }
    Ok(acc)
}

/// The symbol φ(∏ (x_i + y_i)) in 2n variables, with x_i on slot i and
/// y_i on slot n + i.
pub fn symbol(phi: &MultiaffineOperator) -> Result<MultiaffinePoly> {
    let n = phi.num_vars();
    if n > SYMBOL_MAX_N {
        return Err(Error::SizeCap(format!(
            "symbol in 2·{n} variables exceeds the cap of n ≤ {SYMBOL_MAX_N}"
        )));
    }
    let big = 2 * n;
    let mut acc = MultiaffinePoly::zero(big)?;
    for s in all_subsets(n) {
        let img = phi.image(s);
        if img.is_zero() {
            continue;
        }
        let mut y_part = VarSet::EMPTY;
        for i in 1..=n {
            if !s.contains(i) {
                y_part = y_part.insert(n + i);
            }
        }
        acc = acc.add(&img.embed_in(big)?.mul_monomial(y_part)?)?;
    }
    Ok(acc)
}

/// Exact decision for the sharp action of a real matrix: a stability
/// preserver iff totally nonnegative, witnessed by a negative minor
/// otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum SharpPreserverVerdict {
    TruePreserver,
    NotPreserver {
        rows: VarSet,
        cols: VarSet,
        value: Rational,
    },
}

impl SharpPreserverVerdict {
    pub fn is_preserver(&self) -> bool {
        matches!(self, SharpPreserverVerdict::TruePreserver)
    }
}

pub fn test_sharp_preserver_exact(a: &RationalMatrix) -> Result<SharpPreserverVerdict> {
    if !a.is_real() {
        return Err(Error::Domain(
            "exact preserver test requires a real matrix".into(),
        ));
    }
    Ok(match is_totally_nonnegative(a)? {
        TnnCertificate::TotallyNonnegative => SharpPreserverVerdict::TruePreserver,
        TnnCertificate::NegativeMinor { rows, cols, value } => {
            SharpPreserverVerdict::NotPreserver { rows, cols, value }
        }
    })
}

/// Verdict of the general operator preserver test.
#[derive(Clone, Debug, PartialEq)]
pub enum PreserverVerdict {
    /// Rank ≥ 2 and the symbol is certified stable.
    TruePreserver { symbol_verdict: StabilityVerdict },
    /// Rank ≤ 1 with a certified-stable spanning image.
    RankOnePreserver { image_verdict: StabilityVerdict },
    NotPreserver {
        on_symbol: bool,
        witness: NotStableWitness,
    },
    /// Only the sampler applied and it found nothing.
    Undetermined { samples: u64 },
}

impl PreserverVerdict {
    pub fn is_preserver(&self) -> bool {
        matches!(
            self,
            PreserverVerdict::TruePreserver { .. } | PreserverVerdict::RankOnePreserver { .. }
        )
    }
}

/// Decide the preserver property through the fixed pipeline: exact rank
/// split, then oracle → exact → sampler on the spanning image (rank ≤ 1)
/// or on the symbol (rank ≥ 2).
pub fn test_stability_preserver(
    phi: &MultiaffineOperator,
    samples: u64,
    seed: u64,
) -> Result<PreserverVerdict> {
    let n = phi.num_vars();
    if n > SYMBOL_MAX_N {
        return Err(Error::SizeCap(format!(
            "preserver test capped at n ≤ {SYMBOL_MAX_N}, got {n}"
        )));
    }
    let rank = phi.rank();
    if rank <= 1 {
        let image = phi
            .nonzero_images()
            .next()
            .map(|(_, p)| p.clone())
            .unwrap_or(MultiaffinePoly::zero(n)?);
        let assessment = assess_stability(&image, StabilityMethod::Auto, samples, seed)?;
        return Ok(match assessment {
            StabilityAssessment::Verdict(StabilityVerdict::NotStable(w)) => {
                PreserverVerdict::NotPreserver {
                    on_symbol: false,
                    witness: w,
                }
            }
            StabilityAssessment::Verdict(StabilityVerdict::NoCounterexampleFound { samples }) => {
                PreserverVerdict::Undetermined { samples }
            }
            StabilityAssessment::Verdict(v) => {
                PreserverVerdict::RankOnePreserver { image_verdict: v }
            }
            _ => PreserverVerdict::Undetermined { samples },
        });
    }
    let h = symbol(phi)?;
    let assessment = assess_stability(&h, StabilityMethod::Auto, samples, seed)?;
    Ok(match assessment {
        StabilityAssessment::Verdict(StabilityVerdict::NotStable(w)) => {
            PreserverVerdict::NotPreserver {
                on_symbol: true,
                witness: w,
            }
        }
        StabilityAssessment::Verdict(StabilityVerdict::NoCounterexampleFound { samples }) => {
            PreserverVerdict::Undetermined { samples }
        }
        StabilityAssessment::Verdict(v) => PreserverVerdict::TruePreserver { symbol_verdict: v },
        _ => PreserverVerdict::Undetermined { samples },
    })
}

/// The degree-preserving derivation-like operator of a real matrix Z:
/// x^J ↦ (Σ_{j∈J} Z_jj)·x^J + Σ_{j∈J} Σ_{i∉J} Z_ij · x^{(J∖j)∪i}.
pub fn delta_operator(z: &RationalMatrix) -> Result<MultiaffineOperator> {
    if !z.is_square() {
        return Err(Error::DimensionMismatch(
            "delta operator needs a square matrix".into(),
        ));
    }
    if !z.is_real() {
        return Err(Error::Domain("delta operator requires real entries".into()));
    }
    let n = z.rows();
    let mut op = MultiaffineOperator::zero(n)?;
    for j_set in all_subsets(n) {
        if j_set.is_empty() {
            continue;
        }
        let mut terms: Vec<(VarSet, GaussianRational)> = Vec::new();
        let mut diag = GaussianRational::zero();
        for j in j_set.iter() {
            diag = &diag + z.get(j - 1, j - 1);
            for i in 1..=n {
                if j_set.contains(i) {
                    continue;
                }
                let c = z.get(i - 1, j - 1).clone();
                if !c.is_zero() {
                    terms.push((j_set.remove(j).insert(i), c));
                }
            }
        }
        terms.push((j_set, diag));
        op.set_image(j_set, MultiaffinePoly::from_terms(n, terms)?);
    }
    Ok(op)
}

/// exp(t·δ_Z) as a dense float table on the 2^n monomial basis, by
/// scaling and squaring with the Taylor depth chosen from `tol`.
pub fn exp_delta(z: &RationalMatrix, t: f64, tol: f64) -> Result<Array2<f64>> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let n = z.rows();
    if n > SYMBOL_MAX_N {
        return Err(Error::SizeCap(format!(
            "operator exponential capped at n ≤ {SYMBOL_MAX_N}, got {n}"
        )));
    }
    let delta = delta_operator(z)?;
    let table = delta.to_f64_table()?;
    // Taylor depth: after scaling the norm is ≤ 0.5, so the tail is below
    // 0.5^(terms+1)/(terms+1)!; pick the smallest depth under tol/10.
    let mut terms = 4usize;
    let mut tail = 0.5f64.powi(5) / 120.0;
    while tail > tol / 10.0 && terms < 40 {
        terms += 1;
        tail *= 0.5 / (terms as f64 + 1.0);
    }
    matrix_exp(&table, t, terms)
}

/// Float analogue of [`sharp_of_matrix`] for numeric matrices such as
/// matrix exponentials: the dense operator table whose degree-k blocks
/// are float compound matrices.
pub fn sharp_operator_table_f64(a: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(
            "sharp table needs a square matrix".into(),
        ));
    }
    if n > SYMBOL_MAX_N {
        return Err(Error::SizeCap(format!(
            "sharp table capped at n ≤ {SYMBOL_MAX_N}, got {n}"
        )));
    }
    let minors = FloatMinorTable::build(a, n);
    let dim = 1usize << n;
    let mut out = Array2::zeros((dim, dim));
    out[[0, 0]] = 1.0;
    for source in all_subsets(n) {
        let k = source.len();
        if k == 0 {
            continue;
        }
        for target in crate::varset::k_subsets(n, k) {
            out[[target.mask() as usize, source.mask() as usize]] = minors.minor(target, source);
        }
    }
    Ok(out)
}

/// Apply a dense float operator table to a real multiaffine polynomial.
/// Float coefficients are dyadic rationals, so the conversion back to
/// exact coefficients is lossless; the result is still non-certified
/// because the table itself is numeric.
pub fn apply_f64_table(table: &Array2<f64>, f: &MultiaffinePoly) -> Result<MultiaffinePoly> {
    if !f.is_real() {
        return Err(Error::Domain(
            "float operator application requires real coefficients".into(),
        ));
    }
    let n = f.num_vars();
    let dim = 1usize << n;
    if table.nrows() != dim || table.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator table is {}×{}, expected {dim}×{dim}",
            table.nrows(),
            table.ncols()
        )));
    }
    let mut coeffs = vec![0.0f64; dim];
    for (s, c) in f.terms() {
        let v = c.to_complex_f64().re;
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        coeffs[s.mask() as usize] = v;
    }
    let mut out_terms: Vec<(VarSet, GaussianRational)> = Vec::new();
    for row in 0..dim {
        let mut acc = 0.0f64;
        for (col, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                acc += table[[row, col]] * c;
            }
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite);
        }
        if acc != 0.0 {
            let r = BigRational::from_float(acc).ok_or(Error::NonFinite)?;
            out_terms.push((
                VarSet::from_mask(row as u16),
                GaussianRational::from_rational(r),
            ));
        }
    }
    MultiaffinePoly::from_terms(n, out_terms)
}
