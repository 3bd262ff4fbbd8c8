//! Exact sparse polynomial algebra over Gaussian rationals.
//!
//! [`MultiaffinePoly`] is the working space (degree ≤ 1 per variable,
//! monomials keyed by [`crate::varset::VarSet`] bitmasks). [`SparsePoly`]
//! holds derived quantities like Rayleigh differences, whose per-variable
//! degree can reach 4 but no more.

mod multiaffine;
mod sparse;

pub use multiaffine::{MultiaffinePoly, PhaseNormalization};
pub use sparse::{ExpVec, SparsePoly, MAX_EXPONENT};
