//! Numeric stability falsifier.
//!
//! A multiaffine polynomial is linear in each coordinate, f = a·u_j + b,
//! so the minimizer of |f| over the half-plane Im(u_j) ≥ margin is the
//! root −b/a projected onto that half-plane. Sweeping coordinates from
//! random interior starting points either drives |f| to (near) zero at an
//! interior point — a refutation — or stalls against the boundary.
//!
//! A reported zero must clear the relative residual bound; a point that
//! merely looks small never refutes an exact certificate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{NotStableWitness, StabilityVerdict};
use crate::error::{Error, Result};
use crate::poly::MultiaffinePoly;

/// Witnesses must keep every imaginary part at or above this margin.
pub const FALSIFIER_INTERIOR_MARGIN: f64 = 1e-6;
/// Residual coefficient: a witness needs |f(u)| ≤ coeff · Σ_S|c_S ∏ u_i|
/// (termwise backward-error scale), which implies the coarser
/// coeff · Σ|c| · max(1, ‖u‖∞)^deg bound as well.
pub const FALSIFIER_RESIDUAL_COEFF: f64 = 1e-10;

const MAX_SWEEPS: usize = 24;

struct CompiledPoly {
    n: usize,
    terms: Vec<(u16, Complex64)>,
    /// union of all term masks: variables that actually occur
    present: u16,
    coeff_abs_sum: f64,
    degree: usize,
}

impl CompiledPoly {
    fn new(f: &MultiaffinePoly) -> CompiledPoly {
        let terms: Vec<(u16, Complex64)> = f
            .terms()
            .map(|(s, c)| (s.mask(), c.to_complex_f64()))
            .collect();
        let present = terms.iter().fold(0u16, |acc, &(m, _)| acc | m);
        CompiledPoly {
            n: f.num_vars(),
            terms,
            present,
            coeff_abs_sum: f.coeff_abs_sum_f64(),
            degree: f.max_degree().unwrap_or(0),
        }
    }

    fn eval(&self, u: &[Complex64]) -> Complex64 {
        self.eval_with_scale(u).0
    }

    /// Value together with the termwise magnitude sum Σ|c_S ∏ u_i|, the
    /// backward-error scale for the residual test.
    fn eval_with_scale(&self, u: &[Complex64]) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for &(mask, c) in &self.terms {
            let mut m = c;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                m *= u[i];
            }
            acc += m;
            scale += m.norm();
        }
        (acc, scale)
    }

    /// f = a·u_j + b as a function of coordinate j (1-based).
    fn linear_in(&self, u: &[Complex64], j: usize) -> (Complex64, Complex64) {
        let bit = 1u16 << (j - 1);
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for &(mask, c) in &self.terms {
            let mut m = c;
            let mut bits = mask & !bit;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                m *= u[i];
            }
            if mask & bit != 0 {
                a += m;
            } else {
                b += m;
            }
        }
        (a, b)
    }

    /// The coarse bound 1e−10 · Σ|c| · max(1, ‖u‖∞)^deg. Every accepted
    /// witness satisfies this; the acceptance test itself uses the
    /// sharper termwise scale from `eval_with_scale`, because the coarse
    /// bound alone would wrongly accept near-origin points on
    /// homogeneous input.
    fn coarse_residual_bound(&self, u: &[Complex64]) -> f64 {
        let max_coord = u.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        FALSIFIER_RESIDUAL_COEFF * self.coeff_abs_sum * max_coord.powi(self.degree as i32)
    }

    /// A zero of f satisfies u_j = −b_j/a_j for every coordinate that
    /// occurs in f. Points produced by clamping against the Im ≥ margin
    /// boundary (arbitrarily small |f| near a double real zero of a
    /// boundary-stable polynomial) fail this: their roots sit below the
    /// margin, or their coordinate slope has collapsed. Only unclamped
    /// fixed points are admissible witnesses.
    fn is_interior_fixed_point(&self, u: &[Complex64], scale: f64) -> bool {
        for j in 1..=self.n {
            if self.present & (1 << (j - 1)) == 0 {
                continue; // variable does not occur in f
            }
            let (a, b) = self.linear_in(u, j);
            if a.norm() * 1e6 <= scale {
                // the coordinate slope has degenerated; the root is not
                // trustworthy, so the point cannot certify a zero
                return false;
            }
            let root = -b / a;
            if root.im < FALSIFIER_INTERIOR_MARGIN * (1.0 - 1e-9) {
                return false;
            }
            if (u[j - 1] - root).norm() > 1e-7 * root.norm().max(1.0) {
                return false;
            }
        }
        true
    }

    fn witness_check(&self, u: &[Complex64]) -> Option<(f64, f64)> {
        let (val, scale) = self.eval_with_scale(u);
        let residual = val.norm();
        let sharp_bound = FALSIFIER_RESIDUAL_COEFF * scale;
        let interior = u
            .iter()
            .all(|z| z.im >= FALSIFIER_INTERIOR_MARGIN && z.re.is_finite() && z.im.is_finite());
        if interior
            && scale > 0.0
            && residual <= sharp_bound.min(self.coarse_residual_bound(u))
            && self.is_interior_fixed_point(u, scale)
        {
            Some((residual, sharp_bound))
        } else {
            None
        }
    }
}

/// Search for a zero of `f` in the open upper half-plane product.
/// Deterministic for a fixed seed and sample count; returns `NotStable`
/// only when the refined point passes the residual criterion with every
/// imaginary part ≥ the interior margin.
pub fn falsify_stability(f: &MultiaffinePoly, samples: u64, seed: u64) -> Result<StabilityVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let compiled = CompiledPoly::new(f);
    let n = compiled.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..samples {
        let mut u: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-3.0..=3.0), rng.gen_range(1e-3..=3.0)))
            .collect();
        let mut best = compiled.eval(&u).norm();
        for _sweep in 0..MAX_SWEEPS {
            for j in 1..=n {
                let (a, b) = compiled.linear_in(&u, j);
                if a.norm() < 1e-300 {
                    continue;
                }
                let root = -b / a;
                u[j - 1] = if root.im >= FALSIFIER_INTERIOR_MARGIN {
                    root
                } else {
                    Complex64::new(root.re, FALSIFIER_INTERIOR_MARGIN)
                };
            }
            let val = compiled.eval(&u).norm();
            if compiled.witness_check(&u).is_some() || val > 0.5 * best {
                break;
            }
            best = val;
        }
        if let Some((residual, bound)) = compiled.witness_check(&u) {
            return Ok(StabilityVerdict::NotStable(
                NotStableWitness::UpperHalfPlaneZero {
                    point: u.iter().map(|z| (z.re, z.im)).collect(),
                    residual,
                    residual_bound: bound,
                },
            ));
        }
    }
    Ok(StabilityVerdict::NoCounterexampleFound { samples })
}

/// Re-validate an upper-half-plane witness against the polynomial it
/// claims to refute. Used by the CLI before emitting any exit-1 verdict.
pub fn revalidate_zero_witness(f: &MultiaffinePoly, point: &[(f64, f64)]) -> Result<bool> {
    let u: Vec<Complex64> = point
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    if u.len() != f.num_vars() {
        return Err(Error::DimensionMismatch(
            "witness point length mismatch".into(),
        ));
    }
    Ok(CompiledPoly::new(f).witness_check(&u).is_some())
}
