//! Command-line front end: parse input files, dispatch to the library,
//! and emit a single machine-readable JSON document. Every refutation
//! (exit code 1) embeds a witness that is re-validated before emission.
//!
//! Exit codes: 0 property holds / success; 1 property refuted, witness
//! emitted; 2 invalid input; 3 undetermined (sampler exhausted).

mod campaigns;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use render::*;
use tnn_stable::formats::{
    matrix_from_json, matrix_to_value, operator_from_json, operator_to_value, plucker_from_json,
    plucker_to_value, polynomial_from_json, polynomial_to_value, word_to_value,
};
use tnn_stable::grassmann::{
    check_plucker_relations, dual_embedding, is_tnn_point, plucker_of_matrix,
    representing_polynomial, RelationCertificate, TnnPointCertificate,
};
use tnn_stable::matrix::RationalMatrix;
use tnn_stable::operators::{
    apply_f64_table, delta_operator, exp_delta, sharp_of_matrix, symbol,
    test_sharp_preserver_exact, test_stability_preserver, PreserverVerdict, SharpPreserverVerdict,
};
use tnn_stable::poly::MultiaffinePoly;
use tnn_stable::stability::{
    assess_stability, check_rayleigh, elementary_symmetric, permanent_poly, sq_minor_poly,
    RayleighCheck, StabilityAssessment, StabilityMethod, StabilityVerdict,
};
use tnn_stable::tnn::{
    is_totally_nonnegative, is_totally_positive, random_tnn_word, random_tp_matrix, word_to_matrix,
};
use tnn_stable::{Error, Result};

const EXIT_OK: i32 = 0;
const EXIT_REFUTED: i32 = 1;
const EXIT_INVALID: i32 = 2;
const EXIT_UNDETERMINED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "tnn-stable",
    version,
    about = "Exact stability and total-nonnegativity toolkit"
)]
struct Cli {
    /// Pretty-print the JSON output
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the main JSON document (campaigns: per-trial records) here
    /// instead of / in addition to stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stability tests for multiaffine polynomials
    Stability {
        #[command(subcommand)]
        sub: StabilityCmd,
    },
    /// Total nonnegativity and positivity of exact matrices
    Tnn {
        #[command(subcommand)]
        sub: TnnCmd,
    },
    /// Plücker coordinates and the nonnegative Grassmannian
    Grassmann {
        #[command(subcommand)]
        sub: GrassmannCmd,
    },
    /// The matrix action on multiaffine space and preserver tests
    Op {
        #[command(subcommand)]
        sub: OpCmd,
    },
    /// Infinitesimal generators and their exponentials
    Delta {
        #[command(subcommand)]
        sub: DeltaCmd,
    },
    /// Generators for random and structured instances
    Gen {
        #[command(subcommand)]
        sub: GenCmd,
    },
    /// Randomized verification campaigns
    Campaign {
        #[command(subcommand)]
        sub: CampaignCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Oracle,
    Sample,
}

impl From<MethodArg> for StabilityMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => StabilityMethod::Auto,
            MethodArg::Exact => StabilityMethod::Exact,
            MethodArg::Oracle => StabilityMethod::Oracle,
            MethodArg::Sample => StabilityMethod::Sample,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Falsifier / sampler budget
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Decide or search stability of a polynomial file
    Check {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Sample the Rayleigh property on the nonnegative orthant
    Rayleigh {
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
    },
}

#[derive(Subcommand)]
enum TnnCmd {
    /// Certify all minors nonnegative, or produce the first negative one
    Check {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Certify all minors positive, or produce the first nonpositive one
    TpCheck {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand)]
enum GrassmannCmd {
    /// Plücker coordinates of a representing matrix
    Plucker {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Check the exchange relations (and report TNN status)
    Check {
        #[arg(long)]
        plucker: PathBuf,
    },
    /// The representing polynomial of a coordinate vector
    Represent {
        #[arg(long)]
        plucker: PathBuf,
    },
    /// The dual embedding of a square matrix into Gr(n, 2n)
    Dual {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Subcommand)]
enum OpCmd {
    /// Apply the sharp action of a matrix to a polynomial
    Sharp {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// The symbol of the sharp action, in 2n variables
    Symbol {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Preserver test: exact for a matrix, pipeline for an operator file
    Preserver {
        #[arg(long, conflicts_with = "operator")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        operator: Option<PathBuf>,
        #[command(flatten)]
        sample: SampleArgs,
    },
}

#[derive(Subcommand)]
enum DeltaCmd {
    /// The infinitesimal operator of a real matrix, as an operator file
    Build {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// exp(t·δ_Z): the dense operator table, or its image of a polynomial
    Exp {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        t: f64,
        /// Apply the exponential to this polynomial instead of dumping
        /// the table
        #[arg(long)]
        apply: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StableKind {
    Esym,
    Sqminor,
    Perm,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random word in the elementary generators
    TnnWord {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random totally positive matrix (verified before emission)
    Tp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stable polynomials: elementary symmetric, squared minors, or
    /// permanents
    Stable {
        #[arg(long, value_enum)]
        kind: StableKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CampaignCmd {
    /// Randomized verification of the Grassmannian stability theorem
    Thm1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Randomized verification of the preserver theorem
    Thm2 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

/// TNN_STABLE_MAX_N may lower (never raise) the size caps.
fn effective_cap(default_cap: usize) -> usize {
    match std::env::var("TNN_STABLE_MAX_N") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n.min(default_cap),
            _ => default_cap,
        },
        Err(_) => default_cap,
    }
}

fn check_cap(n: usize, default_cap: usize, what: &str) -> Result<()> {
    let cap = effective_cap(default_cap);
    if n > cap {
        return Err(Error::SizeCap(format!(
            "{what} has n = {n}, above the effective cap {cap}"
        )));
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_poly(path: &Path) -> Result<MultiaffinePoly> {
    let f = polynomial_from_json(&read_file(path)?)?;
    check_cap(f.num_vars(), tnn_stable::varset::MAX_VARS, "polynomial")?;
    Ok(f)
}

fn load_matrix(path: &Path) -> Result<RationalMatrix> {
    let m = matrix_from_json(&read_file(path)?)?;
    check_cap(
        m.rows().max(m.cols()),
        tnn_stable::varset::MAX_VARS,
        "matrix",
    )?;
    Ok(m)
}

struct Outcome {
    doc: Value,
    exit: i32,
}

fn ok(command: &str, exit: i32, payload: Value) -> Outcome {
    let mut doc = json!({
        "tool": "tnn-stable",
        "command": command,
        "exit": exit,
    });
    if let (Value::Object(doc_map), Value::Object(payload_map)) = (&mut doc, payload) {
        for (k, v) in payload_map {
            doc_map.insert(k, v);
        }
    }
    Outcome { doc, exit }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Stability { sub } => run_stability(sub),
        Command::Tnn { sub } => run_tnn(sub),
        Command::Grassmann { sub } => run_grassmann(sub),
        Command::Op { sub } => run_op(sub),
        Command::Delta { sub } => run_delta(sub),
        Command::Gen { sub } => run_gen(sub),
        Command::Campaign { sub } => run_campaign(sub, &cli.output),
    }
}

fn run_stability(sub: &StabilityCmd) -> Result<Outcome> {
    match sub {
        StabilityCmd::Check {
            poly,
            method,
            sample,
        } => {
            let f = load_poly(poly)?;
            let assessment = assess_stability(&f, (*method).into(), sample.samples, sample.seed)?;
            let (exit, payload) = match &assessment {
                StabilityAssessment::Verdict(v) => {
                    if let StabilityVerdict::NotStable(w) = v {
                        revalidate_not_stable(&f, w)?;
                    }
                    let exit = match v {
                        StabilityVerdict::NotStable(_) => EXIT_REFUTED,
                        StabilityVerdict::NoCounterexampleFound { .. } => EXIT_UNDETERMINED,
                        _ => EXIT_OK,
                    };
                    (exit, json!({"verdict": stability_verdict_value(v)}))
                }
                StabilityAssessment::OracleInapplicable(v) => (
                    EXIT_UNDETERMINED,
                    json!({
                        "verdict": {"status": "OracleInapplicable"},
                        "relation_violation": relation_violation_value(v),
                    }),
                ),
                StabilityAssessment::ExactInapplicable(reason) => (
                    EXIT_UNDETERMINED,
                    json!({"verdict": {"status": "ExactInapplicable", "reason": reason}}),
                ),
            };
            Ok(ok("stability.check", exit, payload))
        }
        StabilityCmd::Rayleigh { poly, sample } => {
            let f = load_poly(poly)?;
            let result = check_rayleigh(&f, sample.samples as usize, sample.seed)?;
            let exit = match &result {
                RayleighCheck::NoViolationFound { .. } => EXIT_OK,
                RayleighCheck::Violation { i, j, point, value } => {
                    // re-validate before emitting
                    let delta = tnn_stable::stability::rayleigh_difference(&f, *i, *j)?;
                    if delta.evaluate_exact(point)?.re() != value {
                        return Err(Error::Domain(
                            "Rayleigh witness failed re-validation".into(),
                        ));
                    }
                    EXIT_REFUTED
                }
            };
            Ok(ok(
                "stability.rayleigh",
                exit,
                json!({"result": rayleigh_check_value(&result)}),
            ))
        }
    }
}

fn run_tnn(sub: &TnnCmd) -> Result<Outcome> {
    match sub {
        TnnCmd::Check { matrix } => {
            let m = load_matrix(matrix)?;
            check_cap(m.rows(), tnn_stable::tnn::TNN_MAX_N, "TNN check")?;
            let cert = is_totally_nonnegative(&m)?;
            if let tnn_stable::tnn::TnnCertificate::NegativeMinor { rows, cols, value } = &cert {
                let recomputed = m.minor(*rows, *cols)?;
                if recomputed.re() != value {
                    return Err(Error::Domain("minor witness failed re-validation".into()));
                }
            }
            let exit = if cert.is_tnn() { EXIT_OK } else { EXIT_REFUTED };
            Ok(ok(
                "tnn.check",
                exit,
                json!({"certificate": tnn_certificate_value(&cert)}),
            ))
        }
        TnnCmd::TpCheck { matrix } => {
            let m = load_matrix(matrix)?;
            check_cap(m.rows(), tnn_stable::tnn::TNN_MAX_N, "TP check")?;
            let cert = is_totally_positive(&m)?;
            if let tnn_stable::tnn::TpCertificate::NonpositiveMinor { rows, cols, value } = &cert {
                let recomputed = m.minor(*rows, *cols)?;
                if recomputed.re() != value {
                    return Err(Error::Domain("minor witness failed re-validation".into()));
                }
            }
            let exit = if cert.is_tp() { EXIT_OK } else { EXIT_REFUTED };
            Ok(ok(
                "tnn.tp-check",
                exit,
                json!({"certificate": tp_certificate_value(&cert)}),
            ))
        }
    }
}

fn run_grassmann(sub: &GrassmannCmd) -> Result<Outcome> {
    match sub {
        GrassmannCmd::Plucker { matrix } => {
            let m = load_matrix(matrix)?;
            let p = plucker_of_matrix(&m)?;
            Ok(ok(
                "grassmann.plucker",
                EXIT_OK,
                json!({"plucker": plucker_to_value(&p)}),
            ))
        }
        GrassmannCmd::Check { plucker } => {
            let p = plucker_from_json(&read_file(plucker)?)?;
            let relations = check_plucker_relations(&p);
            let (exit, payload) = match &relations {
                RelationCertificate::Ok => {
                    let tnn = is_tnn_point(&p);
                    (
                        EXIT_OK,
                        json!({
                            "relations": relation_certificate_value(&relations),
                            "tnn_point": tnn_point_certificate_value(&tnn),
                        }),
                    )
                }
                RelationCertificate::Violated(v) => {
                    // relation sums recompute from the coordinates
                    let recheck = check_plucker_relations(&p);
                    if recheck != relations {
                        return Err(Error::Domain(
                            "relation witness failed re-validation".into(),
                        ));
                    }
                    let _ = v;
                    (
                        EXIT_REFUTED,
                        json!({"relations": relation_certificate_value(&relations)}),
                    )
                }
            };
            Ok(ok("grassmann.check", exit, payload))
        }
        GrassmannCmd::Represent { plucker } => {
            let p = plucker_from_json(&read_file(plucker)?)?;
            let f = representing_polynomial(&p);
            Ok(ok(
                "grassmann.represent",
                EXIT_OK,
                json!({"poly": polynomial_to_value(&f)}),
            ))
        }
        GrassmannCmd::Dual { matrix } => {
            let m = load_matrix(matrix)?;
            check_cap(m.rows(), tnn_stable::varset::MAX_VARS / 2, "dual embedding")?;
            let point = dual_embedding(&m)?;
            let tnn = is_tnn_point(point.plucker());
            let exit = match &tnn {
                TnnPointCertificate::TnnPoint { .. } => EXIT_OK,
                _ => EXIT_REFUTED,
            };
            Ok(ok(
                "grassmann.dual",
                exit,
                json!({
                    "plucker": plucker_to_value(point.plucker()),
                    "tnn_point": tnn_point_certificate_value(&tnn),
                }),
            ))
        }
    }
}

fn run_op(sub: &OpCmd) -> Result<Outcome> {
    match sub {
        OpCmd::Sharp { matrix, poly } => {
            let a = load_matrix(matrix)?;
            let f = load_poly(poly)?;
            let op = sharp_of_matrix(&a)?;
            let image = op.apply(&f)?;
            Ok(ok(
                "op.sharp",
                EXIT_OK,
                json!({"poly": polynomial_to_value(&image)}),
            ))
        }
        OpCmd::Symbol { matrix } => {
            let a = load_matrix(matrix)?;
            check_cap(a.rows(), tnn_stable::operators::SYMBOL_MAX_N, "symbol")?;
            let h = symbol(&sharp_of_matrix(&a)?)?;
            Ok(ok(
                "op.symbol",
                EXIT_OK,
                json!({"poly": polynomial_to_value(&h)}),
            ))
        }
        OpCmd::Preserver {
            matrix,
            operator,
            sample,
        } => match (matrix, operator) {
            (Some(path), None) => {
                let a = load_matrix(path)?;
                check_cap(a.rows(), tnn_stable::tnn::TNN_MAX_N, "preserver test")?;
                let verdict = test_sharp_preserver_exact(&a)?;
                if let SharpPreserverVerdict::NotPreserver { rows, cols, value } = &verdict {
                    let recomputed = a.minor(*rows, *cols)?;
                    if recomputed.re() != value {
                        return Err(Error::Domain("minor witness failed re-validation".into()));
                    }
                }
                let exit = if verdict.is_preserver() {
                    EXIT_OK
                } else {
                    EXIT_REFUTED
                };
                Ok(ok(
                    "op.preserver",
                    exit,
                    json!({"verdict": sharp_preserver_value(&verdict), "method": "exact-matrix"}),
                ))
            }
            (None, Some(path)) => {
                let phi = operator_from_json(&read_file(path)?)?;
                check_cap(
                    phi.num_vars(),
                    tnn_stable::operators::SYMBOL_MAX_N,
                    "preserver test",
                )?;
                let verdict = test_stability_preserver(&phi, sample.samples, sample.seed)?;
                if let PreserverVerdict::NotPreserver { on_symbol, witness } = &verdict {
                    let target = if *on_symbol {
                        symbol(&phi)?
                    } else {
                        phi.nonzero_images()
                            .next()
                            .map(|(_, p)| p.clone())
                            .unwrap_or(MultiaffinePoly::zero(phi.num_vars())?)
                    };
                    revalidate_not_stable(&target, witness)?;
                }
                let exit = match &verdict {
                    PreserverVerdict::NotPreserver { .. } => EXIT_REFUTED,
                    PreserverVerdict::Undetermined { .. } => EXIT_UNDETERMINED,
                    _ => EXIT_OK,
                };
                Ok(ok(
                    "op.preserver",
                    exit,
                    json!({"verdict": preserver_verdict_value(&verdict), "method": "pipeline"}),
                ))
            }
            _ => Err(Error::Precondition(
                "op preserver takes exactly one of --matrix or --operator".into(),
            )),
        },
    }
}

fn run_delta(sub: &DeltaCmd) -> Result<Outcome> {
    match sub {
        DeltaCmd::Build { matrix } => {
            let z = load_matrix(matrix)?;
            let op = delta_operator(&z)?;
            Ok(ok(
                "delta.build",
                EXIT_OK,
                json!({"operator": operator_to_value(&op)}),
            ))
        }
        DeltaCmd::Exp {
            matrix,
            t,
            apply,
            tol,
        } => {
            let z = load_matrix(matrix)?;
            check_cap(z.rows(), tnn_stable::operators::SYMBOL_MAX_N, "delta exp")?;
            let table = exp_delta(&z, *t, *tol)?;
            match apply {
                Some(path) => {
                    let f = load_poly(path)?;
                    if f.num_vars() != z.rows() {
                        return Err(Error::DimensionMismatch(format!(
                            "polynomial has {} variables, generator has {}",
                            f.num_vars(),
                            z.rows()
                        )));
                    }
                    let image = apply_f64_table(&table, &f)?;
                    Ok(ok(
                        "delta.exp",
                        EXIT_OK,
                        json!({
                            "t": float_value(*t),
                            "certified": false,
                            "poly": polynomial_to_value(&image),
                        }),
                    ))
                }
                None => {
                    let dim = table.nrows();
                    let rows: Vec<Value> = (0..dim)
                        .map(|r| {
                            Value::Array((0..dim).map(|c| float_value(table[[r, c]])).collect())
                        })
                        .collect();
                    Ok(ok(
                        "delta.exp",
                        EXIT_OK,
                        json!({
                            "t": float_value(*t),
                            "certified": false,
                            "basis": "subset masks ascending",
                            "table": rows,
                        }),
                    ))
                }
            }
        }
    }
}

fn run_gen(sub: &GenCmd) -> Result<Outcome> {
    match sub {
        GenCmd::TnnWord { n, len, seed } => {
            check_cap(*n, tnn_stable::varset::MAX_VARS, "word generation")?;
            let w = random_tnn_word(*n, *len, *seed)?;
            let m = word_to_matrix(&w);
            Ok(ok(
                "gen.tnn-word",
                EXIT_OK,
                json!({
                    "word": word_to_value(&w),
                    "matrix": matrix_to_value(&m),
                }),
            ))
        }
        GenCmd::Tp { n, seed } => {
            check_cap(*n, tnn_stable::tnn::TNN_MAX_N, "TP generation")?;
            let m = random_tp_matrix(*n, *seed)?;
            Ok(ok(
                "gen.tp",
                EXIT_OK,
                json!({"matrix": matrix_to_value(&m)}),
            ))
        }
        GenCmd::Stable { kind, n, k, matrix } => {
            let f = match kind {
                StableKind::Esym => {
                    let n = n.ok_or_else(|| {
                        Error::Precondition("gen stable --kind esym needs --n".into())
                    })?;
                    let k = k.ok_or_else(|| {
                        Error::Precondition("gen stable --kind esym needs --k".into())
                    })?;
                    check_cap(n, tnn_stable::varset::MAX_VARS, "elementary symmetric")?;
                    elementary_symmetric(n, k)?
                }
                StableKind::Sqminor => {
                    let path = matrix.as_ref().ok_or_else(|| {
                        Error::Precondition("gen stable --kind sqminor needs --matrix".into())
                    })?;
                    sq_minor_poly(&load_matrix(path)?)?
                }
                StableKind::Perm => {
                    let path = matrix.as_ref().ok_or_else(|| {
                        Error::Precondition("gen stable --kind perm needs --matrix".into())
                    })?;
                    permanent_poly(&load_matrix(path)?)?
                }
            };
            Ok(ok(
                "gen.stable",
                EXIT_OK,
                json!({"poly": polynomial_to_value(&f)}),
            ))
        }
    }
}

fn run_campaign(sub: &CampaignCmd, output: &Option<PathBuf>) -> Result<Outcome> {
    let mut sink: Option<Box<dyn Write>> = match output {
        Some(path) => Some(Box::new(fs::File::create(path).map_err(|e| {
            Error::Parse(format!("cannot open {}: {e}", path.display()))
        })?)),
        None => None,
    };
    match sub {
        CampaignCmd::Thm1 {
            n,
            k,
            trials,
            seed,
            samples,
        } => {
            check_cap(*n, tnn_stable::tnn::TNN_MAX_N, "thm1 campaign")?;
            if *k == 0 || *k > *n {
                return Err(Error::Precondition(format!(
                    "campaign thm1 needs 1 ≤ k ≤ n, got k = {k}, n = {n}"
                )));
            }
            let report = campaigns::run_thm1(*n, *k, *trials, *seed, *samples, &mut sink)?;
            let exit = if report.all_passed {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            Ok(ok(
                "campaign.thm1",
                exit,
                json!({"summary": report.summary}),
            ))
        }
        CampaignCmd::Thm2 {
            n,
            trials,
            seed,
            samples,
        } => {
            check_cap(*n, tnn_stable::tnn::TNN_MAX_N, "thm2 campaign")?;
            let report = campaigns::run_thm2(*n, *trials, *seed, *samples, &mut sink)?;
            let exit = if report.all_passed {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            Ok(ok(
                "campaign.thm2",
                exit,
                json!({"summary": report.summary}),
            ))
        }
    }
}

fn render(doc: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(doc).expect("JSON rendering")
    } else {
        serde_json::to_string(doc).expect("JSON rendering")
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            let doc = json!({
                "tool": "tnn-stable",
                "status": "invalid-input",
                "exit": EXIT_INVALID,
                "error": e.to_string(),
            });
            println!("{}", render(&doc, cli.pretty));
            std::process::exit(EXIT_INVALID);
        }
    };
    let text = render(&outcome.doc, cli.pretty);
    // campaigns stream their records to --output; every other command
    // writes its document there when asked
    let is_campaign = matches!(cli.command, Command::Campaign { .. });
    if let (Some(path), false) = (&cli.output, is_campaign) {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            let doc = json!({
                "tool": "tnn-stable",
                "status": "invalid-input",
                "exit": EXIT_INVALID,
                "error": format!("cannot write {}: {e}", path.display()),
            });
            println!("{}", render(&doc, cli.pretty));
            std::process::exit(EXIT_INVALID);
        }
    }
    println!("{text}");
    std::process::exit(outcome.exit);
}
