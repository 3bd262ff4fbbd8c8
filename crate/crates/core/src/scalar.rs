//! The coefficient field: complex numbers with arbitrary-precision
//! rational real and imaginary parts.
//!
//! `num_rational::BigRational` keeps every value reduced with a positive
//! denominator, so equality of `GaussianRational` values is exact
//! structural equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact complex scalar with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// p/q as an exact real scalar. Panics if q == 0.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Purely imaginary p/q · i.
    pub fn from_imag_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        GaussianRational {
            re: Rational::zero(),
            im: Rational::new(BigInt::from(p), BigInt::from(q)),
        }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact real value, if the imaginary part is zero.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    /// True iff the value is a real rational ≥ 0.
    pub fn is_real_nonnegative(&self) -> bool {
        self.im.is_zero() && !self.re.is_negative()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = re² + im², an exact nonnegative rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let denom = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Some(GaussianRational {
            re: num.re / &denom,
            im: num.im / denom,
        })
    }

    pub fn to_complex_f64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// |z| as a float, used for scale estimates only.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex_f64().norm()
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})i", self.im)
        } else {
            write!(f, "{} + ({})i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop_impl {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

binop_impl!(Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});

binop_impl!(Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});

binop_impl!(Mul, mul, |a, b| GaussianRational {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

binop_impl!(Div, div, |a, b| a
    .checked_div(b)
    .expect("division by zero GaussianRational"));

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

/// Parse "p/q" (or a bare integer "p") with q > 0, as used by every JSON
/// file format in this crate.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num_str.trim())
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den = match den_str {
        Some(d) => BigInt::from_str(d.trim())
            .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?,
        None => BigInt::one(),
    };
    if den <= BigInt::zero() {
        return Err(Error::Parse(format!(
            "denominator must be positive in {s:?}"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Render a rational as "p/q" with q > 0 (always includes the slash).
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
