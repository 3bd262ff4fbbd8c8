//! Exact computational kernels for multiaffine stable polynomials and
//! total nonnegativity.
//!
//! Everything symbolic runs over Gaussian rationals (complex numbers with
//! arbitrary-precision rational parts), so certificates — minor signs,
//! PSD checks, Plücker relations, phase tests — are exact. Floating point
//! appears only in the numeric falsifier and the matrix exponentials, and
//! results derived from those are always labeled non-certifying.
//!
//! Module map:
//! - [`scalar`], [`varset`], [`poly`]: the coefficient field, subset
//!   bitmasks, and sparse polynomial algebra.
//! - [`matrix`], [`tnn`], [`numeric`]: exact minors and compounds,
//!   TNN/TP/PSD certificates, generator words, float exponentials.
//! - [`grassmann`]: Plücker coordinates, relation checking, representing
//!   polynomials, the dual embedding.
//! - [`stability`]: Rayleigh differences, exact degree-2 certificates,
//!   the Grassmannian stability oracle, and the numeric falsifier.
//! - [`operators`]: the matrix action on multiaffine space, symbols,
//!   stability-preserver tests, and infinitesimal generators.
//! - [`formats`]: the JSON file formats shared with the CLI.

pub mod error;
pub mod formats;
pub mod grassmann;
pub mod matrix;
pub mod numeric;
pub mod operators;
pub mod poly;
pub mod scalar;
pub mod stability;
pub mod tnn;
pub mod varset;

pub use error::{Error, Result};
pub use poly::{MultiaffinePoly, SparsePoly};
pub use scalar::{GaussianRational, Rational};
pub use varset::VarSet;
