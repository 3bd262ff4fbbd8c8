//! JSON file formats shared between the library and the CLI.
//!
//! Rationals travel as "p/q" strings with q > 0. Variable lists are
//! strictly increasing 1-based indices. Rendering is deterministic:
//! terms, coordinates, and images are emitted in lexicographic order.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grassmann::PluckerVector;
use crate::matrix::RationalMatrix;
use crate::operators::MultiaffineOperator;
use crate::poly::MultiaffinePoly;
use crate::scalar::{parse_rational, rational_to_string, GaussianRational};
use crate::tnn::{GeneratorKind, GeneratorLetter, GeneratorWord};
use crate::varset::{binomial, VarSet};

fn parse_err<E: std::fmt::Display>(context: &str, e: E) -> Error {
    Error::Parse(format!("{context}: {e}"))
}

fn json_from_str<'a, T: Deserialize<'a>>(s: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| {
        Error::Parse(format!(
            "{what}: {e} (line {}, column {})",
            e.line(),
            e.column()
        ))
    })
}

fn check_strictly_increasing(vars: &[usize], context: &str) -> Result<()> {
    for w in vars.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Parse(format!(
                "{context}: variable list {vars:?} must be strictly increasing"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermEntry {
    vars: Vec<usize>,
    re: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialFile {
    n: usize,
    terms: Vec<TermEntry>,
}

pub fn polynomial_from_json(s: &str) -> Result<MultiaffinePoly> {
    let file: PolynomialFile = json_from_str(s, "polynomial")?;
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(file.terms.len());
    for (idx, t) in file.terms.iter().enumerate() {
        let context = format!("terms[{idx}]");
        check_strictly_increasing(&t.vars, &context)?;
        let set = VarSet::from_indices(&t.vars).map_err(|e| parse_err(&context, e))?;
        if !set.fits(file.n) {
            return Err(Error::Parse(format!(
                "{context}: variables {:?} exceed n = {}",
                t.vars, file.n
            )));
        }
        if !seen.insert(set) {
            return Err(Error::Parse(format!(
                "{context}: duplicate monomial {:?}",
                t.vars
            )));
        }
        let re = parse_rational(&t.re).map_err(|e| parse_err(&context, e))?;
        let im = match &t.im {
            Some(v) => parse_rational(v).map_err(|e| parse_err(&context, e))?,
            None => crate::scalar::Rational::from_integer(0.into()),
        };
        terms.push((set, GaussianRational::new(re, im)));
    }
    MultiaffinePoly::from_terms(file.n, terms)
}

pub fn polynomial_to_value(f: &MultiaffinePoly) -> Value {
    let file = PolynomialFile {
        n: f.num_vars(),
        terms: f
            .terms()
            .map(|(s, c)| TermEntry {
                vars: s.to_vec(),
                re: rational_to_string(c.re()),
                im: Some(rational_to_string(c.im())),
            })
            .collect(),
    };
    serde_json::to_value(file).expect("polynomial serialization is infallible")
}

// ---------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<String>>>,
}

fn parse_string_grid(
    grid: &[Vec<String>],
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Vec<Vec<crate::scalar::Rational>>> {
    if grid.len() != rows {
        return Err(Error::Parse(format!(
            "{what}: expected {rows} rows, found {}",
            grid.len()
        )));
    }
    grid.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "{what}: row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            row.iter()
                .enumerate()
                .map(|(c, s)| {
                    parse_rational(s).map_err(|e| parse_err(&format!("{what}[{r}][{c}]"), e))
                })
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(s: &str) -> Result<RationalMatrix> {
    let file: MatrixFile = json_from_str(s, "matrix")?;
    if file.rows > crate::varset::MAX_VARS || file.cols > crate::varset::MAX_VARS {
        return Err(Error::Parse(format!(
            "matrix files carry at most {0}×{0} entries, got {1}×{2}",
            crate::varset::MAX_VARS,
            file.rows,
            file.cols
        )));
    }
    let re = parse_string_grid(&file.entries, file.rows, file.cols, "entries")?;
    let im = file
        .im
        .as_ref()
        .map(|grid| parse_string_grid(grid, file.rows, file.cols, "im"))
        .transpose()?;
    RationalMatrix::from_fn(file.rows, file.cols, |r, c| {
        let real = re[r][c].clone();
        let imag = im
            .as_ref()
            .map(|g| g[r][c].clone())
            .unwrap_or_else(|| crate::scalar::Rational::from_integer(0.into()));
        GaussianRational::new(real, imag)
    })
}

pub fn matrix_to_value(m: &RationalMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| rational_to_string(m.get(r, c).re()))
                .collect()
        })
        .collect();
    let im = if m.is_real() {
        None
    } else {
        Some(
            (0..m.rows())
                .map(|r| {
                    (0..m.cols())
                        .map(|c| rational_to_string(m.get(r, c).im()))
                        .collect()
                })
                .collect(),
        )
    };
    serde_json::to_value(MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries,
        im,
    })
    .expect("matrix serialization is infallible")
}

// ---------------------------------------------------------------------
// Generator words
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LetterEntry {
    kind: String,
    i: usize,
    t: String,
}

#[derive(Serialize, Deserialize)]
struct WordFile {
    n: usize,
    letters: Vec<LetterEntry>,
}

pub fn word_from_json(s: &str) -> Result<GeneratorWord> {
    let file: WordFile = json_from_str(s, "generator word")?;
    let letters = file
        .letters
        .iter()
        .enumerate()
        .map(|(idx, l)| {
            let kind = match l.kind.as_str() {
                "D" => GeneratorKind::D,
                "E" => GeneratorKind::E,
                "F" => GeneratorKind::F,
                other => {
                    return Err(Error::Parse(format!(
                        "letters[{idx}]: unknown generator kind {other:?}"
                    )))
                }
            };
            let param =
                parse_rational(&l.t).map_err(|e| parse_err(&format!("letters[{idx}].t"), e))?;
            Ok(GeneratorLetter {
                kind,
                index: l.i,
                param,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorWord::new(file.n, letters)
}

pub fn word_to_value(w: &GeneratorWord) -> Value {
    serde_json::to_value(WordFile {
        n: w.n(),
        letters: w
            .letters()
            .iter()
            .map(|l| LetterEntry {
                kind: match l.kind {
                    GeneratorKind::D => "D".into(),
                    GeneratorKind::E => "E".into(),
                    GeneratorKind::F => "F".into(),
                },
                i: l.index,
                t: rational_to_string(&l.param),
            })
            .collect(),
    })
    .expect("word serialization is infallible")
}

// ---------------------------------------------------------------------
// Plücker vectors
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CoordEntry {
    set: Vec<usize>,
    re: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct PluckerFile {
    n: usize,
    k: usize,
    coords: Vec<CoordEntry>,
}

pub fn plucker_from_json(s: &str) -> Result<PluckerVector> {
    let file: PluckerFile = json_from_str(s, "Plücker vector")?;
    if file.k > file.n {
        return Err(Error::Parse(format!(
            "k = {} exceeds n = {}",
            file.k, file.n
        )));
    }
    let mut coords = vec![GaussianRational::zero(); binomial(file.n, file.k)];
    let mut seen = std::collections::BTreeSet::new();
    for (idx, entry) in file.coords.iter().enumerate() {
        let context = format!("coords[{idx}]");
        check_strictly_increasing(&entry.set, &context)?;
        let set = VarSet::from_indices(&entry.set).map_err(|e| parse_err(&context, e))?;
        if set.len() != file.k || !set.fits(file.n) {
            return Err(Error::Parse(format!(
                "{context}: {:?} is not a {}-subset of [{}]",
                entry.set, file.k, file.n
            )));
        }
        if !seen.insert(set) {
            return Err(Error::Parse(format!(
                "{context}: duplicate subset {:?}",
                entry.set
            )));
        }
        let re = parse_rational(&entry.re).map_err(|e| parse_err(&context, e))?;
        let im = match &entry.im {
            Some(v) => parse_rational(v).map_err(|e| parse_err(&context, e))?,
            None => crate::scalar::Rational::from_integer(0.into()),
        };
        coords[crate::varset::subset_rank(file.n, set)] = GaussianRational::new(re, im);
    }
    PluckerVector::new(file.n, file.k, coords)
}

pub fn plucker_to_value(p: &PluckerVector) -> Value {
    serde_json::to_value(PluckerFile {
        n: p.n(),
        k: p.k(),
        coords: p
            .entries()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| CoordEntry {
                set: s.to_vec(),
                re: rational_to_string(c.re()),
                im: Some(rational_to_string(c.im())),
            })
            .collect(),
    })
    .expect("Plücker serialization is infallible")
}

// ---------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ImageEntry {
    basis: Vec<usize>,
    poly: PolynomialFile,
}

#[derive(Serialize, Deserialize)]
struct OperatorFile {
    n: usize,
    images: Vec<ImageEntry>,
}

pub fn operator_from_json(s: &str) -> Result<MultiaffineOperator> {
    let file: OperatorFile = json_from_str(s, "operator")?;
    let mut images = Vec::with_capacity(file.images.len());
    let mut seen = std::collections::BTreeSet::new();
    for (idx, entry) in file.images.iter().enumerate() {
        let context = format!("images[{idx}]");
        check_strictly_increasing(&entry.basis, &context)?;
        let basis = VarSet::from_indices(&entry.basis).map_err(|e| parse_err(&context, e))?;
        if !seen.insert(basis) {
            return Err(Error::Parse(format!(
                "{context}: duplicate basis monomial {:?}",
                entry.basis
            )));
        }
        let poly_json = serde_json::to_string(&entry.poly).map_err(|e| parse_err(&context, e))?;
        let poly = polynomial_from_json(&poly_json)?;
        images.push((basis, poly));
    }
    MultiaffineOperator::from_images(file.n, images)
}

pub fn operator_to_value(op: &MultiaffineOperator) -> Value {
    let images: Vec<Value> = op
        .nonzero_images()
        .map(|(s, p)| {
            serde_json::json!({
                "basis": s.to_vec(),
                "poly": polynomial_to_value(p),
            })
        })
        .collect();
    serde_json::json!({
        "n": op.num_vars(),
        "images": images,
    })
}
