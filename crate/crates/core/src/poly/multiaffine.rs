use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;
use crate::varset::{VarSet, MAX_VARS};

/// Multiaffine polynomial: degree at most one in each variable, with
/// exact Gaussian-rational coefficients. Zero coefficients are never
/// stored, and every stored key satisfies `mask < 2^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiaffinePoly {
    n: usize,
    terms: BTreeMap<VarSet, GaussianRational>,
}

/// Outcome of [`MultiaffinePoly::phase_normalize`].
#[derive(Clone, Debug, PartialEq)]
pub enum PhaseNormalization {
    /// All coefficients lie on the ray R≥0 · witness; `normalized` is the
    /// input divided by the witness, so its coefficients are nonnegative
    /// rationals.
    Normalized {
        witness: GaussianRational,
        normalized: MultiaffinePoly,
    },
    /// Two coefficients whose exact ratio is not a nonnegative rational.
    NotSamePhase {
        base_monomial: VarSet,
        base_coeff: GaussianRational,
        offending_monomial: VarSet,
        offending_coeff: GaussianRational,
    },
}

impl MultiaffinePoly {
    pub fn zero(n: usize) -> Result<Self> {
        check_var_count(n)?;
        Ok(MultiaffinePoly {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(n: usize, c: GaussianRational) -> Result<Self> {
        let mut p = Self::zero(n)?;
        p.set_coeff(VarSet::EMPTY, c);
        Ok(p)
    }

    pub fn monomial(n: usize, set: VarSet, coeff: GaussianRational) -> Result<Self> {
        check_var_count(n)?;
        if !set.fits(n) {
            return Err(Error::IndexOutOfRange(format!(
                "monomial {set:?} does not fit in {n} variables"
            )));
        }
        let mut p = MultiaffinePoly {
            n,
            terms: BTreeMap::new(),
        };
        p.set_coeff(set, coeff);
        Ok(p)
    }

    pub fn variable(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!(
                "variable x{i} outside 1..={n}"
            )));
        }
        Self::monomial(n, VarSet::singleton(i), GaussianRational::one())
    }

    /// Build from explicit (set, coeff) pairs; zero coefficients dropped.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (VarSet, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n)?;
        for (set, c) in terms {
            if !set.fits(n) {
                return Err(Error::IndexOutOfRange(format!(
                    "monomial {set:?} does not fit in {n} variables"
                )));
            }
            let cur = p.coeff(set) + &c;
            p.set_coeff(set, cur);
        }
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

    /// Coefficient of x^set (zero if absent).
    pub fn coeff(&self, set: VarSet) -> GaussianRational {
        self.terms
            .get(&set)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Terms in lexicographic monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (VarSet, &GaussianRational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn support(&self) -> Vec<VarSet> {
        self.terms.keys().copied().collect()
    }

    fn set_coeff(&mut self, set: VarSet, c: GaussianRational) {
        if c.is_zero() {
            self.terms.remove(&set);
        } else {
            self.terms.insert(set, c);
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
        for (set, c) in &other.terms {
            let cur = out.coeff(*set) + c;
            out.set_coeff(*set, cur);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiaffinePoly {
            n: self.n,
            terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return MultiaffinePoly {
                n: self.n,
                terms: BTreeMap::new(),
            };
        }
        MultiaffinePoly {
            n: self.n,
            terms: self.terms.iter().map(|(s, k)| (*s, k * c)).collect(),
        }
    }

    /// Reinterpret over a larger ambient variable count; masks unchanged.
    pub fn embed_in(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed {} variables into {n}",
                self.n
            )));
        }
        check_var_count(n)?;
        Ok(MultiaffinePoly {
            n,
            terms: self.terms.clone(),
        })
    }

    /// Multiply by the monomial x^set. Every existing term must be disjoint
    /// from `set`, otherwise the product would leave multiaffine space.
    pub fn mul_monomial(&self, set: VarSet) -> Result<Self> {
        if !set.fits(self.n) {
            return Err(Error::IndexOutOfRange(format!(
                "monomial {set:?} does not fit in {} variables",
                self.n
            )));
        }
        let mut terms = BTreeMap::new();
        for (s, c) in &self.terms {
            if !s.is_disjoint(set) {
                return Err(Error::UnsupportedDegree(format!(
                    "monomial multiplication would square a variable in {s:?} ∩ {set:?}"
                )));
            }
            terms.insert(s.union(set), c.clone());
        }
        Ok(MultiaffinePoly { n: self.n, terms })
    }

    /// Direct sum of monomial evaluations in floating point; callers check
    /// `is_finite` on the result when overflow matters.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.n
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (set, c) in &self.terms {
            let mut m = c.to_complex_f64();
            for i in set.iter() {
                m *= point[i - 1];
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &[crate::scalar::Rational]) -> Result<GaussianRational> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.n
            )));
        }
        let mut acc = GaussianRational::zero();
        for (set, c) in &self.terms {
            let mut m = crate::scalar::Rational::from_integer(1.into());
            for i in set.iter() {
                m *= &point[i - 1];
            }
            acc = &acc + &(c * &GaussianRational::from_rational(m));
        }
        Ok(acc)
    }

    /// Formal ∂/∂x_i; stays multiaffine.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(format!(
                "variable x{i} outside 1..={}",
                self.n
            )));
        }
        Ok(MultiaffinePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.contains(i))
                .map(|(s, c)| (s.remove(i), c.clone()))
                .collect(),
        })
    }

    /// Sum of terms with |I| = k.
    pub fn degree_slice(&self, k: usize) -> Self {
        MultiaffinePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.len() == k)
                .map(|(s, c)| (*s, c.clone()))
                .collect(),
        }
    }

    /// Degree of the highest-degree term, or None for the zero polynomial.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|s| s.len()).max()
    }

    /// Some(k) iff the polynomial is nonzero and every term has degree k.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|s| s.len());
        let first = degrees.next()?;
        if degrees.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Σ |c| over all coefficients, as a float scale estimate.
    pub fn coeff_abs_sum_f64(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).sum()
    }

    /// Divide by the coefficient of the lexicographically least monomial;
    /// succeeds iff every coefficient is a nonnegative rational multiple
    /// of that one.
    pub fn phase_normalize(&self) -> Result<PhaseNormalization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (base_set, base) = self.terms.iter().next().expect("nonzero");
        let mut normalized = MultiaffinePoly {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (set, c) in &self.terms {
            let ratio = c.checked_div(base).expect("base coefficient nonzero");
            if !ratio.is_real_nonnegative() {
                return Ok(PhaseNormalization::NotSamePhase {
                    base_monomial: *base_set,
                    base_coeff: base.clone(),
                    offending_monomial: *set,
                    offending_coeff: c.clone(),
                });
            }
            normalized.terms.insert(*set, ratio);
        }
        Ok(PhaseNormalization::Normalized {
            witness: base.clone(),
            normalized,
        })
    }

    /// Degree-gap phase structure check: given that the degree-k slice is
    /// empty, decide whether some phase class puts every degree-(k+1)
    /// coefficient on R≥0 and every degree-(k−1) coefficient on R≤0.
    pub fn verify_phase_gap_structure(&self, k: usize) -> Result<bool> {
        if !self.degree_slice(k).is_zero() {
            return Err(Error::Precondition(format!(
                "degree-{k} slice must be zero"
            )));
        }
        let upper: Vec<&GaussianRational> = self
            .terms
            .iter()
            .filter(|(s, _)| s.len() == k + 1)
            .map(|(_, c)| c)
            .collect();
        let lower: Vec<&GaussianRational> = if k == 0 {
            Vec::new()
        } else {
            self.terms
                .iter()
                .filter(|(s, _)| s.len() == k - 1)
                .map(|(_, c)| c)
                .collect()
        };
        // Any admissible phase witness c0 lies on the ray of an upper
        // coefficient (or of a negated lower one), so testing one candidate
        // per case is exhaustive.
        let candidate = match (upper.first(), lower.first()) {
            (Some(u), _) => (*u).clone(),
            (None, Some(l)) => -*l,
            (None, None) => return Ok(true),
        };
        for u in &upper {
            let ratio = u.checked_div(&candidate).expect("candidate nonzero");
            if !ratio.is_real_nonnegative() {
                return Ok(false);
            }
        }
        for l in &lower {
            let ratio = l.checked_div(&candidate).expect("candidate nonzero");
            let nonpositive = ratio.is_real() && !ratio.re().is_positive();
            if !nonpositive {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_var_count(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::SizeCap(format!(
            "{n} variables exceeds the cap of {MAX_VARS}"
        )));
    }
    Ok(())
}

impl fmt::Debug for MultiaffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, (set, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if set.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·x{set:?}")?;
            }
        }
        Ok(())
    }
}
