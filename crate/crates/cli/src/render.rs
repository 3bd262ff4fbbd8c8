//! JSON rendering of certificates, verdicts, and witnesses, plus the
//! re-validation pass that every refutation goes through before the CLI
//! emits it.

use serde_json::{json, Value};

use tnn_stable::grassmann::{RelationCertificate, RelationViolation, TnnPointCertificate};
use tnn_stable::operators::{PreserverVerdict, SharpPreserverVerdict};
use tnn_stable::poly::MultiaffinePoly;
use tnn_stable::scalar::{rational_to_string, GaussianRational, Rational};
use tnn_stable::stability::{
    revalidate_zero_witness, NotStableWitness, RayleighCheck, StabilityVerdict, StableCertificate,
};
use tnn_stable::tnn::{TnnCertificate, TpCertificate};
use tnn_stable::varset::VarSet;
use tnn_stable::{Error, Result};

pub fn varset_value(s: VarSet) -> Value {
    Value::Array(s.iter().map(|i| json!(i)).collect())
}

pub fn rational_value(r: &Rational) -> Value {
    json!(rational_to_string(r))
}

pub fn gaussian_value(c: &GaussianRational) -> Value {
    json!({
        "re": rational_to_string(c.re()),
        "im": rational_to_string(c.im()),
    })
}

pub fn float_value(x: f64) -> Value {
    // decimal strings for floats keeps the output format uniform
    json!(format!("{x}"))
}

pub fn rational_point_value(point: &[Rational]) -> Value {
    Value::Array(point.iter().map(rational_value).collect())
}

pub fn tnn_certificate_value(c: &TnnCertificate) -> Value {
    match c {
        TnnCertificate::TotallyNonnegative => json!({"kind": "TNN"}),
        TnnCertificate::NegativeMinor { rows, cols, value } => json!({
            "kind": "NegativeMinor",
            "rows": varset_value(*rows),
            "cols": varset_value(*cols),
            "value": rational_value(value),
        }),
    }
}

pub fn tp_certificate_value(c: &TpCertificate) -> Value {
    match c {
        TpCertificate::TotallyPositive => json!({"kind": "TP"}),
        TpCertificate::NonpositiveMinor { rows, cols, value } => json!({
            "kind": "NonpositiveMinor",
            "rows": varset_value(*rows),
            "cols": varset_value(*cols),
            "value": rational_value(value),
        }),
    }
}

pub fn relation_violation_value(v: &RelationViolation) -> Value {
    json!({
        "lower": varset_value(v.lower),
        "upper": varset_value(v.upper),
        "value": gaussian_value(&v.value),
    })
}

pub fn relation_certificate_value(c: &RelationCertificate) -> Value {
    match c {
        RelationCertificate::Ok => json!({"kind": "OK"}),
        RelationCertificate::Violated(v) => json!({
            "kind": "Violated",
            "witness": relation_violation_value(v),
        }),
    }
}

pub fn tnn_point_certificate_value(c: &TnnPointCertificate) -> Value {
    match c {
        TnnPointCertificate::TnnPoint { normalized } => json!({
            "kind": "TNNPoint",
            "normalized": rational_point_value(normalized),
        }),
        TnnPointCertificate::NotTnn {
            base_set,
            base_coeff,
            offending_set,
            offending_coeff,
        } => json!({
            "kind": "NotTNN",
            "base_set": varset_value(*base_set),
            "base_coeff": gaussian_value(base_coeff),
            "offending_set": varset_value(*offending_set),
            "offending_coeff": gaussian_value(offending_coeff),
        }),
        TnnPointCertificate::NotGrassmannian(v) => json!({
            "kind": "NotGrassmannian",
            "witness": relation_violation_value(v),
        }),
    }
}

pub fn not_stable_witness_value(w: &NotStableWitness) -> Value {
    match w {
        NotStableWitness::NegativeRayleigh {
            i,
            j,
            minor_set,
            minor_value,
            point,
            value,
        } => json!({
            "kind": "NegativeRayleigh",
            "i": i,
            "j": j,
            "gram_minor_set": varset_value(*minor_set),
            "gram_minor_value": rational_value(minor_value),
            "point": rational_point_value(point),
            "value": rational_value(value),
        }),
        NotStableWitness::PhaseViolation {
            base_monomial,
            base_coeff,
            offending_monomial,
            offending_coeff,
        } => json!({
            "kind": "PhaseViolation",
            "base_monomial": varset_value(*base_monomial),
            "base_coeff": gaussian_value(base_coeff),
            "offending_monomial": varset_value(*offending_monomial),
            "offending_coeff": gaussian_value(offending_coeff),
        }),
        NotStableWitness::UpperHalfPlaneZero {
            point,
            residual,
            residual_bound,
        } => json!({
            "kind": "UpperHalfPlaneZero",
            "point": Value::Array(
                point
                    .iter()
                    .map(|&(re, im)| json!({"re": float_value(re), "im": float_value(im)}))
                    .collect()
            ),
            "residual": float_value(*residual),
            "residual_bound": float_value(*residual_bound),
            "certified": false,
        }),
    }
}

/// Certificate chain identifiers name every exact step backing a
/// verdict.
fn certificate_chain(v: &StabilityVerdict) -> Value {
    let ids: Vec<&str> = match v {
        StabilityVerdict::StableCertified(StableCertificate::ZeroPolynomial) => {
            vec!["zero-polynomial"]
        }
        StabilityVerdict::StableCertified(StableCertificate::AllPairsPsd { .. }) => {
            vec!["rayleigh-gram", "psd-principal-minors"]
        }
        StabilityVerdict::StableOracle { .. } => {
            vec!["plucker-relations", "phase-normalization", "tnn-point"]
        }
        StabilityVerdict::NotStable(w) => match w {
            NotStableWitness::NegativeRayleigh { .. } => {
                vec![
                    "rayleigh-gram",
                    "negative-principal-minor",
                    "rational-point",
                ]
            }
            NotStableWitness::PhaseViolation { .. } => vec!["phase-ratio"],
            NotStableWitness::UpperHalfPlaneZero { .. } => vec!["numeric-zero-search"],
        },
        StabilityVerdict::NoCounterexampleFound { .. } => vec!["numeric-zero-search"],
    };
    Value::Array(ids.into_iter().map(|s| json!(s)).collect())
}

pub fn stability_verdict_value(v: &StabilityVerdict) -> Value {
    let chain = certificate_chain(v);
    match v {
        StabilityVerdict::StableCertified(cert) => json!({
            "status": "StableCertified",
            "chain": chain,
            "certificate": match cert {
                StableCertificate::ZeroPolynomial => json!({"kind": "ZeroPolynomial"}),
                StableCertificate::AllPairsPsd { pairs } => json!({
                    "kind": "AllPairsPsd",
                    "pairs": pairs,
                }),
            },
        }),
        StabilityVerdict::StableOracle { normalized } => json!({
            "status": "StableOracle",
            "chain": chain,
            "normalized": rational_point_value(normalized),
        }),
        StabilityVerdict::NotStable(w) => json!({
            "status": "NotStable",
            "chain": chain,
            "witness": not_stable_witness_value(w),
        }),
        StabilityVerdict::NoCounterexampleFound { samples } => json!({
            "status": "NoCounterexampleFound",
            "chain": chain,
            "samples": samples,
            "certified": false,
        }),
    }
}

pub fn rayleigh_check_value(c: &RayleighCheck) -> Value {
    match c {
        RayleighCheck::NoViolationFound {
            pairs,
            points_per_pair,
        } => json!({
            "status": "NoViolationFound",
            "pairs": pairs,
            "points_per_pair": points_per_pair,
            "certified": false,
        }),
        RayleighCheck::Violation { i, j, point, value } => json!({
            "status": "Violation",
            "i": i,
            "j": j,
            "point": rational_point_value(point),
            "value": rational_value(value),
        }),
    }
}

pub fn sharp_preserver_value(v: &SharpPreserverVerdict) -> Value {
    match v {
        SharpPreserverVerdict::TruePreserver => json!({"status": "TruePreserver"}),
        SharpPreserverVerdict::NotPreserver { rows, cols, value } => json!({
            "status": "NotPreserver",
            "witness": {
                "kind": "NegativeMinor",
                "rows": varset_value(*rows),
                "cols": varset_value(*cols),
                "value": rational_value(value),
            },
        }),
    }
}

pub fn preserver_verdict_value(v: &PreserverVerdict) -> Value {
    match v {
        PreserverVerdict::TruePreserver { symbol_verdict } => json!({
            "status": "TruePreserver",
            "symbol_verdict": stability_verdict_value(symbol_verdict),
        }),
        PreserverVerdict::RankOnePreserver { image_verdict } => json!({
            "status": "RankOnePreserver",
            "image_verdict": stability_verdict_value(image_verdict),
        }),
        PreserverVerdict::NotPreserver { on_symbol, witness } => json!({
            "status": "NotPreserver",
            "on_symbol": on_symbol,
            "witness": not_stable_witness_value(witness),
        }),
        PreserverVerdict::Undetermined { samples } => json!({
            "status": "Undetermined",
            "samples": samples,
        }),
    }
}

/// Re-validate a NotStable witness against the polynomial it refutes.
/// Exact witnesses recompute exactly; the numeric witness re-runs the
/// residual and interior checks.
pub fn revalidate_not_stable(f: &MultiaffinePoly, w: &NotStableWitness) -> Result<()> {
    match w {
        NotStableWitness::NegativeRayleigh {
            i, j, point, value, ..
        } => {
            let delta = tnn_stable::stability::rayleigh_difference(f, *i, *j)?;
            let recomputed = delta.evaluate_exact(point)?;
            let zero = Rational::from_integer(0.into());
            if recomputed.re() != value || *value >= zero {
                return Err(Error::Domain(
                    "negative-Rayleigh witness failed re-validation".into(),
                ));
            }
            Ok(())
        }
        NotStableWitness::PhaseViolation {
            base_monomial,
            offending_monomial,
            ..
        } => {
            let base = f.coeff(*base_monomial);
            let off = f.coeff(*offending_monomial);
            let ratio = off
                .checked_div(&base)
                .ok_or_else(|| Error::Domain("phase witness divides by zero".into()))?;
            if ratio.is_real_nonnegative() {
                return Err(Error::Domain("phase witness failed re-validation".into()));
            }
            Ok(())
        }
        NotStableWitness::UpperHalfPlaneZero { point, .. } => {
            if revalidate_zero_witness(f, point)? {
                Ok(())
            } else {
                Err(Error::Domain(
                    "upper-half-plane witness failed re-validation".into(),
                ))
            }
        }
    }
}
