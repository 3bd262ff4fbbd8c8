use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::MultiaffinePoly;
use crate::scalar::{GaussianRational, Rational};
use crate::varset::MAX_VARS;

/// Per-variable degree cap. A Rayleigh difference of a multiaffine
/// polynomial has per-variable degree ≤ 2, and products of two such
/// objects reach 4; nothing in this crate needs more.
pub const MAX_EXPONENT: u8 = 4;

/// Exponent vector packed 4 bits per variable (variable i occupies bits
/// 4(i−1)..4i). Supports n ≤ 16 with exponents ≤ 15; the polynomial ops
/// enforce the tighter [`MAX_EXPONENT`] cap.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpVec(u64);

impl ExpVec {
    pub const CONSTANT: ExpVec = ExpVec(0);

    pub fn exponent(self, i: usize) -> u8 {
        debug_assert!((1..=MAX_VARS).contains(&i));
        ((self.0 >> (4 * (i - 1))) & 0xf) as u8
    }

    pub fn with_exponent(self, i: usize, e: u8) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&i));
        debug_assert!(e <= 0xf);
        let shift = 4 * (i - 1);
        ExpVec((self.0 & !(0xfu64 << shift)) | ((e as u64) << shift))
    }

    pub fn from_exponents(exps: &[u8]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::SizeCap(format!(
                "{} variables exceeds the cap of {MAX_VARS}",
                exps.len()
            )));
        }
        let mut v = ExpVec::CONSTANT;
        for (idx, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(Error::UnsupportedDegree(format!(
                    "exponent {e} exceeds the cap of {MAX_EXPONENT}"
                )));
            }
            v = v.with_exponent(idx + 1, e);
        }
        Ok(v)
    }

    pub fn total_degree(self) -> usize {
        let mut d = 0usize;
        let mut bits = self.0;
        while bits != 0 {
            d += (bits & 0xf) as usize;
            bits >>= 4;
        }
        d
    }

    /// Exponentwise sum; errors if any entry would exceed the cap.
    fn checked_add(self, other: Self, n: usize) -> Result<Self> {
        let mut out = ExpVec::CONSTANT;
        for i in 1..=n {
            let e = self.exponent(i) + other.exponent(i);
            if e > MAX_EXPONENT {
                return Err(Error::UnsupportedDegree(format!(
                    "product exponent {e} of x{i} exceeds the cap of {MAX_EXPONENT}"
                )));
            }
            out = out.with_exponent(i, e);
        }
        Ok(out)
    }

    fn exponents(self, n: usize) -> Vec<u8> {
        (1..=n).map(|i| self.exponent(i)).collect()
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpVec({:#x})", self.0)
    }
}

/// General sparse polynomial with bounded per-variable degree, used for
/// Rayleigh differences and their factors.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<ExpVec, GaussianRational>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::SizeCap(format!(
                "{n} variables exceeds the cap of {MAX_VARS}"
            )));
        }
        Ok(SparsePoly {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(n: usize, c: GaussianRational) -> Result<Self> {
        let mut p = Self::zero(n)?;
        p.set_coeff(ExpVec::CONSTANT, c);
        Ok(p)
    }

    pub fn term(n: usize, exps: &[u8], coeff: GaussianRational) -> Result<Self> {
        if exps.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                n
            )));
        }
        let key = ExpVec::from_exponents(exps)?;
        let mut p = Self::zero(n)?;
        p.set_coeff(key, coeff);
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: ExpVec) -> GaussianRational {
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff_of_exponents(&self, exps: &[u8]) -> Result<GaussianRational> {
        if exps.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                self.n
            )));
        }
        Ok(self.coeff(ExpVec::from_exponents(exps)?))
    }

    pub fn terms(&self) -> impl Iterator<Item = (ExpVec, &GaussianRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    fn set_coeff(&mut self, key: ExpVec, c: GaussianRational) {
        if c.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "polynomials over {} and {} variables",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (key, c) in &other.terms {
            let cur = out.coeff(*key) + c;
            out.set_coeff(*key, cur);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return SparsePoly {
                n: self.n,
                terms: BTreeMap::new(),
            };
        }
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Exact convolution product; errors if any result exponent exceeds
    /// the cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = Self::zero(self.n)?;
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let key = ea.checked_add(*eb, self.n)?;
                let cur = out.coeff(key) + &(ca * cb);
                out.set_coeff(key, cur);
            }
        }
        Ok(out)
    }

    /// Formal ∂/∂x_i, exact.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(format!(
                "variable x{i} outside 1..={}",
                self.n
            )));
        }
        let mut out = Self::zero(self.n)?;
        for (key, c) in &self.terms {
            let e = key.exponent(i);
            if e == 0 {
                continue;
            }
            let new_key = key.with_exponent(i, e - 1);
            let scaled = c * &GaussianRational::from_integer(e as i64);
            let cur = out.coeff(new_key) + &scaled;
            out.set_coeff(new_key, cur);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.n
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, c) in &self.terms {
            let mut m = c.to_complex_f64();
            for i in 1..=self.n {
                let e = key.exponent(i);
                for _ in 0..e {
                    m *= point[i - 1];
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &[Rational]) -> Result<GaussianRational> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.n
            )));
        }
        // Per-variable powers up to the cap, computed once.
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(self.n);
        for x in point {
            let mut col = Vec::with_capacity(MAX_EXPONENT as usize + 1);
            col.push(Rational::from_integer(1.into()));
            for e in 1..=MAX_EXPONENT as usize {
                let next = &col[e - 1] * x;
                col.push(next);
            }
            powers.push(col);
        }
        let mut acc = GaussianRational::zero();
        for (key, c) in &self.terms {
            let mut m = Rational::from_integer(1.into());
            for i in 1..=self.n {
                let e = key.exponent(i) as usize;
                if e > 0 {
                    m *= &powers[i - 1][e];
                }
            }
            if !m.is_zero() {
                acc = &acc + &(c * &GaussianRational::from_rational(m));
            }
        }
        Ok(acc)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Exponent vectors (length n) with their coefficients, for callers
    /// that need explicit per-variable degrees.
    pub fn expanded_terms(&self) -> Vec<(Vec<u8>, GaussianRational)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.exponents(self.n), c.clone()))
            .collect()
    }
}

impl From<&MultiaffinePoly> for SparsePoly {
    fn from(f: &MultiaffinePoly) -> Self {
        let n = f.num_vars();
        let mut terms = BTreeMap::new();
        for (set, c) in f.terms() {
            let mut key = ExpVec::CONSTANT;
            for i in set.iter() {
                key = key.with_exponent(i, 1);
            }
            terms.insert(key, c.clone());
        }
        SparsePoly { n, terms }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, (key, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·x^{:?}", key.exponents(self.n))?;
        }
        Ok(())
    }
}
