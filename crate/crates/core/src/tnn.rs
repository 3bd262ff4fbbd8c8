//! Total nonnegativity and positivity certificates, positive
//! semidefiniteness, and the elementary generator semigroup.
//!
//! All certificates are exact: a refutation always carries the witness
//! minor, selected deterministically (smallest order first, then
//! lexicographic row and column sets).

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{MinorTable, RationalMatrix};
use crate::scalar::{GaussianRational, Rational};
use crate::varset::{k_subsets, VarSet};

/// Exhaustive minor enumeration cap for the TNN / TP certifiers.
pub const TNN_MAX_N: usize = 8;
/// Principal-minor enumeration cap for the PSD certifier.
pub const PSD_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum TnnCertificate {
    TotallyNonnegative,
    NegativeMinor {
        rows: VarSet,
        cols: VarSet,
        value: Rational,
    },
}

impl TnnCertificate {
    pub fn is_tnn(&self) -> bool {
        matches!(self, TnnCertificate::TotallyNonnegative)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TpCertificate {
    TotallyPositive,
    NonpositiveMinor {
        rows: VarSet,
        cols: VarSet,
        value: Rational,
    },
}

impl TpCertificate {
    pub fn is_tp(&self) -> bool {
        matches!(self, TpCertificate::TotallyPositive)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsdCertificate {
    PositiveSemidefinite,
    NegativePrincipalMinor { set: VarSet, value: Rational },
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::PositiveSemidefinite)
    }
}

fn require_real_square(a: &RationalMatrix, cap: usize, what: &str) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{what} requires a square matrix, got {}×{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_real() {
        return Err(Error::Domain(format!("{what} requires real entries")));
    }
    if a.rows() > cap {
        return Err(Error::SizeCap(format!(
            "{what} enumerates minors exhaustively; n ≤ {cap}, got {}",
            a.rows()
        )));
    }
    Ok(a.rows())
}

/// Exhaustively certifies that every minor is ≥ 0, or returns the first
/// negative one.
pub fn is_totally_nonnegative(a: &RationalMatrix) -> Result<TnnCertificate> {
    let n = require_real_square(a, TNN_MAX_N, "total-nonnegativity test")?;
    let table = MinorTable::build(a, n);
    for k in 1..=n {
        for (rows, cols, value) in table.order(k) {
            let v = value.re();
            if v.is_negative() {
                return Ok(TnnCertificate::NegativeMinor {
                    rows,
                    cols,
                    value: v.clone(),
                });
            }
        }
    }
    Ok(TnnCertificate::TotallyNonnegative)
}

/// Exhaustively certifies that every minor is > 0, or returns the first
/// nonpositive one.
pub fn is_totally_positive(a: &RationalMatrix) -> Result<TpCertificate> {
    let n = require_real_square(a, TNN_MAX_N, "total-positivity test")?;
    let table = MinorTable::build(a, n);
    for k in 1..=n {
        for (rows, cols, value) in table.order(k) {
            let v = value.re();
            if !v.is_positive() {
                return Ok(TpCertificate::NonpositiveMinor {
                    rows,
                    cols,
                    value: v.clone(),
                });
            }
        }
    }
    Ok(TpCertificate::TotallyPositive)
}

/// PSD test by exhaustive principal minors (symmetric real input).
/// The witness is the first negative principal minor in
/// (cardinality, lex) order, so all of its proper principal minors are
/// known nonnegative — the stability module relies on that.
pub fn is_psd(s: &RationalMatrix) -> Result<PsdCertificate> {
    let n = require_real_square(s, PSD_MAX_N, "PSD test")?;
    for r in 0..n {
        for c in r + 1..n {
            if s.get(r, c) != s.get(c, r) {
                return Err(Error::Domain(format!(
                    "PSD test requires a symmetric matrix; entries ({},{}) and ({},{}) differ",
                    r + 1,
                    c + 1,
                    c + 1,
                    r + 1
                )));
            }
        }
    }
    for k in 1..=n {
        for set in k_subsets(n, k) {
            let v = s.minor(set, set)?;
            if v.re().is_negative() {
                return Ok(PsdCertificate::NegativePrincipalMinor {
                    set,
                    value: v.re().clone(),
                });
            }
        }
    }
    Ok(PsdCertificate::PositiveSemidefinite)
}

/// The three elementary generator kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Diagonal: identity with entry (i, i) = t.
    D,
    /// Upper bidiagonal: identity plus t at (i, i+1).
    E,
    /// Lower bidiagonal: transpose of E.
    F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorLetter {
    pub kind: GeneratorKind,
    pub index: usize,
    pub param: Rational,
}

/// A word in the generators, validated so that every parameter is
/// positive and every index is in range for the ambient size.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorWord {
    n: usize,
    letters: Vec<GeneratorLetter>,
}

impl GeneratorWord {
    pub fn new(n: usize, letters: Vec<GeneratorLetter>) -> Result<Self> {
        if n == 0 || n > crate::varset::MAX_VARS {
            return Err(Error::SizeCap(format!("word size {n} outside 1..=16")));
        }
        for l in &letters {
            check_generator_index(l.kind, l.index, n)?;
            if !l.param.is_positive() {
                return Err(Error::Precondition(format!(
                    "generator parameter {} must be positive",
                    l.param
                )));
            }
        }
        Ok(GeneratorWord { n, letters })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[GeneratorLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

fn check_generator_index(kind: GeneratorKind, i: usize, n: usize) -> Result<()> {
    let max = match kind {
        GeneratorKind::D => n,
        GeneratorKind::E | GeneratorKind::F => n.saturating_sub(1),
    };
    if i == 0 || i > max {
        return Err(Error::IndexOutOfRange(format!(
            "generator {kind:?} index {i} outside 1..={max} for n={n}"
        )));
    }
    Ok(())
}

/// Build one elementary generator matrix. Construction itself accepts any
/// rational parameter; the positivity requirement belongs to words.
pub fn generator_matrix(
    kind: GeneratorKind,
    i: usize,
    t: &Rational,
    n: usize,
) -> Result<RationalMatrix> {
    check_generator_index(kind, i, n)?;
    let mut m = RationalMatrix::identity(n)?;
    let tg = GaussianRational::from_rational(t.clone());
    match kind {
        GeneratorKind::D => m.set(i - 1, i - 1, tg),
        GeneratorKind::E => m.set(i - 1, i, tg),
        GeneratorKind::F => m.set(i, i - 1, tg),
    }
    Ok(m)
}

/// Exact left-to-right product of the word's letters.
pub fn word_to_matrix(word: &GeneratorWord) -> RationalMatrix {
    let mut acc = RationalMatrix::identity(word.n()).expect("validated n");
    for l in word.letters() {
        let g = generator_matrix(l.kind, l.index, &l.param, word.n()).expect("validated letter");
        acc = acc.matmul(&g).expect("square sizes match");
    }
    acc
}

fn random_param(rng: &mut ChaCha8Rng) -> Rational {
    let p: i64 = rng.gen_range(1..=100);
    let q: i64 = rng.gen_range(1..=100);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Uniform random word of the given length with parameters p/q,
/// p, q ∈ [1, 100]. Deterministic per seed.
pub fn random_tnn_word(n: usize, length: usize, seed: u64) -> Result<GeneratorWord> {
    if n == 0 || n > crate::varset::MAX_VARS {
        return Err(Error::SizeCap(format!("word size {n} outside 1..=16")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut letters = Vec::with_capacity(length);
    for _ in 0..length {
        let kind = if n == 1 {
            GeneratorKind::D
        } else {
            match rng.gen_range(0..3u8) {
                0 => GeneratorKind::D,
                1 => GeneratorKind::E,
                _ => GeneratorKind::F,
            }
        };
        let index = match kind {
            GeneratorKind::D => rng.gen_range(1..=n),
            _ => rng.gen_range(1..=n - 1),
        };
        letters.push(GeneratorLetter {
            kind,
            index,
            param: random_param(&mut rng),
        });
    }
    GeneratorWord::new(n, letters)
}

/// A complete word: each F_i and E_i appears n−1 times in a
/// lower-then-upper staircase around a positive diagonal. With positive
/// parameters the product is totally positive; the result is always
/// verified before being returned, with fresh parameters on retry.
pub fn random_tp_matrix(n: usize, seed: u64) -> Result<RationalMatrix> {
    if n == 0 || n > TNN_MAX_N {
        return Err(Error::SizeCap(format!(
            "TP generation verifies exhaustively; n ≤ {TNN_MAX_N}, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..=10 {
        let mut letters = Vec::new();
        for _round in 0..n.saturating_sub(1) {
            for i in (1..n).rev() {
                letters.push(GeneratorLetter {
                    kind: GeneratorKind::F,
                    index: i,
                    param: random_param(&mut rng),
                });
            }
        }
        for i in 1..=n {
            letters.push(GeneratorLetter {
                kind: GeneratorKind::D,
                index: i,
                param: random_param(&mut rng),
            });
        }
        for _round in 0..n.saturating_sub(1) {
            for i in 1..n {
                letters.push(GeneratorLetter {
                    kind: GeneratorKind::E,
                    index: i,
                    param: random_param(&mut rng),
                });
            }
        }
        let word = GeneratorWord::new(n, letters)?;
        let m = word_to_matrix(&word);
        if is_totally_positive(&m)?.is_tp() {
            return Ok(m);
        }
    }
    Err(Error::Generation(
        "TP verification failed repeatedly".into(),
    ))
}

/// Random real matrix with entries p/q, |p| ≤ num_bound, 1 ≤ q ≤ den_bound.
/// Plumbing for randomized campaigns and tests.
pub fn random_rational_matrix(
    rows: usize,
    cols: usize,
    num_bound: i64,
    den_bound: i64,
    seed: u64,
) -> Result<RationalMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RationalMatrix::from_fn(rows, cols, |_, _| {
        let p: i64 = rng.gen_range(-num_bound..=num_bound);
        let q: i64 = rng.gen_range(1..=den_bound);
        GaussianRational::from_ratio(p, q)
    })
}

/// Random real matrix that carries at least one negative minor, found by
/// resampling. Used by the preserver campaigns.
pub fn random_non_tnn_matrix(n: usize, seed: u64) -> Result<(RationalMatrix, VarSet, VarSet)> {
    if n == 0 || n > TNN_MAX_N {
        return Err(Error::SizeCap(format!("n ≤ {TNN_MAX_N}, got {n}")));
    }
    for attempt in 0..1000u64 {
        let m = random_rational_matrix(
            n,
            n,
            5,
            4,
            seed.wrapping_add(attempt.wrapping_mul(0x9e3779b9)),
        )?;
        if let TnnCertificate::NegativeMinor { rows, cols, .. } = is_totally_nonnegative(&m)? {
            return Ok((m, rows, cols));
        }
    }
    Err(Error::Generation(
        "could not sample a matrix with a negative minor".into(),
    ))
}
