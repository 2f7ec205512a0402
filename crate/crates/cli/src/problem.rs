//! Problem files: a JSON document naming the cone and the two points.
//!
//! ```json
//! {
//!   "algebra": "herm-complex:2",
//!   "x": [[2, [0, 1]], [[0, -1], 3]],
//!   "y": "identity",
//!   "options": { "seed": 7, "samples": 1000 }
//! }
//! ```
//!
//! Points are written as matrix rows (complex entries as `[re, im]`),
//! `{"diagonal": [...]}`, `"identity"`, raw coordinates `{"coords": [...]}`,
//! a flat array for spin factors and the standard cone, or
//! `{"blocks": [...]}` / a list of blocks for direct sums.

use std::path::Path;
use std::sync::Arc;

use conemid::conegeom::{ConeBackend, StandardCone, SymmetricCone};
use conemid::{Algebra, AlgebraKind, Element};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Asymmetry above this is rejected.
pub const SYMMETRY_REJECT: f64 = 1e-8;
/// Asymmetry above this is repaired with a warning.
pub const SYMMETRY_WARN: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub tol: Option<f64>,
    pub tie_tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    algebra: Value,
    x: Value,
    y: Value,
    #[serde(default)]
    options: FileOptions,
}

/// A decoded pair of points on one cone.
#[derive(Debug, Clone)]
pub enum Pair {
    Standard {
        cone: StandardCone,
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Eja {
        cone: SymmetricCone,
        x: Element,
        y: Element,
    },
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub backend: ConeBackend,
    pub pair: Pair,
    pub options: FileOptions,
    pub warnings: Vec<String>,
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Problem, CliError> {
    let raw: RawProblem =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))?;
    let backend = parse_backend(&raw.algebra)?;
    let mut warnings = Vec::new();
    let pair = match &backend {
        ConeBackend::Standard(n) => {
            let x = decode_vector(&raw.x, "x")?;
            let y = decode_vector(&raw.y, "y")?;
            for (name, v) in [("x", &x), ("y", &y)] {
                if v.len() != *n {
                    return Err(CliError::Validation(format!(
                        "{name} has {} coordinates, standard:{n} needs {n}",
                        v.len()
                    )));
                }
            }
            Pair::Standard {
                cone: StandardCone::new(*n),
                x,
                y,
            }
        }
        ConeBackend::Eja(kind) => {
            let alg = Algebra::new(kind.clone()).map_err(|e| CliError::Parse(e.to_string()))?;
            let x = decode_element(&alg, &raw.x, "x", &mut warnings)?;
            let y = decode_element(&alg, &raw.y, "y", &mut warnings)?;
            Pair::Eja {
                cone: SymmetricCone::new(alg),
                x,
                y,
            }
        }
    };
    Ok(Problem {
        backend,
        pair,
        options: raw.options,
        warnings,
    })
}

fn parse_backend(v: &Value) -> Result<ConeBackend, CliError> {
    match v {
        Value::String(s) => s.parse().map_err(|e: conemid::Error| CliError::Parse(e.to_string())),
        Value::Object(map) if map.get("kind").and_then(Value::as_str) == Some("standard") => {
            let n = map
                .get("n")
                .and_then(Value::as_u64)
                .filter(|n| *n > 0)
                .ok_or_else(|| CliError::Parse("standard cone needs a positive \"n\"".into()))?;
            Ok(ConeBackend::Standard(n as usize))
        }
        Value::Object(_) => serde_json::from_value::<AlgebraKind>(v.clone())
            .map(ConeBackend::Eja)
            .map_err(|e| CliError::Parse(format!("algebra: {e}"))),
        _ => Err(CliError::Parse("algebra must be a string or an object".into())),
    }
}

fn number(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| CliError::Parse(format!("{what}: expected a number, got {v}")))
}

fn decode_vector(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what}: expected an array of numbers")))?;
    items.iter().map(|a| number(a, what)).collect()
}

fn complex(v: &Value, what: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Array(p) if p.len() == 2 => Ok(Complex64::new(number(&p[0], what)?, number(&p[1], what)?)),
        _ => Ok(Complex64::new(number(v, what)?, 0.0)),
    }
}

/// Square matrix rows, row-major.
fn decode_rows(v: &Value, m: usize, what: &str) -> Result<Vec<Complex64>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what}: expected matrix rows")))?;
    if rows.len() != m {
        return Err(CliError::Validation(format!(
            "{what} has {} rows, expected {m}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(m * m);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::Parse(format!("{what}: row {i} is not an array")))?;
        if row.len() != m {
            return Err(CliError::Validation(format!(
                "{what}: row {i} has {} entries, expected {m}",
                row.len()
            )));
        }
        for e in row {
            out.push(complex(e, what)?);
        }
    }
    Ok(out)
}

/// Replaces `a` by its Hermitian part after checking the asymmetry
/// `max |a_ij - conj(a_ji)|` relative to `max(1, max |a_ij|)`.
fn hermitian_part(a: &mut [Complex64], m: usize, what: &str, warnings: &mut Vec<String>) -> Result<(), CliError> {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i..m {
            worst = worst.max((a[i * m + j] - a[j * m + i].conj()).norm() / scale);
        }
    }
    if worst > SYMMETRY_REJECT {
        return Err(CliError::Parse(format!(
            "{what} is not symmetric: relative asymmetry {worst:e} exceeds {SYMMETRY_REJECT:e}"
        )));
    }
    if worst > SYMMETRY_WARN {
        warnings.push(format!("{what}: symmetrised (relative asymmetry {worst:e})"));
    }
    for i in 0..m {
        for j in i..m {
            let h = (a[i * m + j] + a[j * m + i].conj()) / 2.0;
            a[i * m + j] = h;
            a[j * m + i] = h.conj();
        }
    }
    Ok(())
}

pub fn decode_element(
    alg: &Arc<Algebra>,
    v: &Value,
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<Element, CliError> {
    if let Some(s) = v.as_str() {
        return match s {
            "identity" | "unit" => Ok(Element::unit(alg)),
            _ => Err(CliError::Parse(format!("{what}: unknown point keyword {s:?}"))),
        };
    }
    if let Some(map) = v.as_object() {
        if let Some(d) = map.get("diagonal") {
            return Ok(Element::diagonal(alg, &decode_vector(d, what)?)?);
        }
        if let Some(c) = map.get("coords") {
            return Ok(Element::new(alg, decode_vector(c, what)?)?);
        }
        if let Some(b) = map.get("blocks") {
            return decode_blocks(alg, b, what, warnings);
        }
        return Err(CliError::Parse(format!(
            "{what}: expected one of \"diagonal\", \"coords\", \"blocks\""
        )));
    }
    match alg.kind() {
        AlgebraKind::SymReal { m } => {
            let mut a = decode_rows(v, *m, what)?;
            if a.iter().any(|z| z.im != 0.0) {
                return Err(CliError::Parse(format!("{what}: complex entry in a real matrix")));
            }
            hermitian_part(&mut a, *m, what, warnings)?;
            let re: Vec<f64> = a.iter().map(|z| z.re).collect();
            Ok(Element::from_symmetric(alg, &re)?)
        }
        AlgebraKind::HermComplex { m } => {
            let mut a = decode_rows(v, *m, what)?;
            hermitian_part(&mut a, *m, what, warnings)?;
            Ok(Element::from_hermitian(alg, &a)?)
        }
        AlgebraKind::Spin { .. } => Ok(Element::new(alg, decode_vector(v, what)?)?),
        AlgebraKind::DirectSum { .. } => decode_blocks(alg, v, what, warnings),
    }
}

fn decode_blocks(
    alg: &Arc<Algebra>,
    v: &Value,
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<Element, CliError> {
    let AlgebraKind::DirectSum { summands } = alg.kind() else {
        return Err(CliError::Parse(format!("{what}: blocks given for {alg}")));
    };
    let blocks = v
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what}: expected a list of blocks")))?;
    if blocks.len() != summands.len() {
        return Err(CliError::Validation(format!(
            "{what} has {} blocks, {alg} has {} summands",
            blocks.len(),
            summands.len()
        )));
    }
    let mut coords = Vec::with_capacity(alg.dim());
    for (i, (b, kind)) in blocks.iter().zip(summands).enumerate() {
        let sub = Algebra::new(kind.clone())?;
        let e = decode_element(&sub, b, &format!("{what} block {i}"), warnings)?;
        coords.extend_from_slice(e.coords());
    }
    Ok(Element::new(alg, coords)?)
}
