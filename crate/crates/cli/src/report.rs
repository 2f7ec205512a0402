//! Report files and their JSON encoding.

use std::io;

use conemid::midspan::FaceCase;
use conemid::oracle::VerificationReport;
use conemid::Element;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

pub const TOOL_NAME: &str = "conemid";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// Every setting that influenced the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub backend: String,
    /// Midpoint tolerance; `None` means `1e-9 * max(1, d_T)`.
    pub tol: Option<f64>,
    pub tie_tol: f64,
    pub group_tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub radius: f64,
    pub ambient_fraction: f64,
    pub backend_check: bool,
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRecord {
    Real(Vec<Vec<f64>>),
    /// Entries as `[re, im]`.
    Complex(Vec<Vec<[f64; 2]>>),
}

/// A cone point: raw coordinates, plus the matrix when there is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub coords: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRecord>,
}

impl PointRecord {
    pub fn from_vec(v: &[f64]) -> Self {
        PointRecord {
            coords: v.to_vec(),
            matrix: None,
        }
    }

    pub fn from_element(e: &Element) -> Self {
        let matrix = if let Some(a) = e.to_symmetric() {
            let m = (a.len() as f64).sqrt().round() as usize;
            Some(MatrixRecord::Real(a.chunks(m).map(<[f64]>::to_vec).collect()))
        } else {
            e.to_hermitian().map(|a| {
                let m = (a.len() as f64).sqrt().round() as usize;
                MatrixRecord::Complex(
                    a.chunks(m)
                        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                )
            })
        };
        PointRecord {
            coords: e.coords().to_vec(),
            matrix,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    pub thompson: f64,
    pub delta2: f64,
    /// `M(x/y)`.
    pub m_xy: f64,
    /// `M(y/x)`.
    pub m_yx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainmentRecord {
    /// Distinct eigenvalues of `P(y^{-1/2}) x` (coordinate ratios `x_i / y_i` on `R^n_+`).
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Indices into `eigenvalues` that realise the distance.
    pub attaining: Vec<usize>,
    /// Sum of the attaining spectral idempotents, when computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<PointRecord>,
    pub k: usize,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub case: FaceCase,
    pub y_support: Option<Vec<usize>>,
    pub x_support: Option<Vec<usize>>,
    pub directions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanRecord {
    pub dimension: usize,
    pub formula_dimension: Option<usize>,
    pub base_point: PointRecord,
    pub basis: Vec<PointRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<FaceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub coincident: bool,
    pub proportional: bool,
    pub near_tie: bool,
    pub singleton: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub sampling_conclusive: bool,
    pub details: VerificationReport,
}

impl VerificationSummary {
    pub fn new(details: VerificationReport) -> Self {
        VerificationSummary {
            passed: details.passed(),
            sampling_conclusive: details.sampling_conclusive(),
            details,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: ToolInfo,
    pub config: ResolvedConfig,
    pub x: PointRecord,
    pub y: PointRecord,
    pub distances: Distances,
    pub geometric_mean: PointRecord,
    pub canonical_midpoint: PointRecord,
    pub attainment: AttainmentRecord,
    pub span: SpanRecord,
    pub flags: Flags,
    pub verification: Option<VerificationSummary>,
    pub warnings: Vec<String>,
}

/// Pretty JSON with every float written to 17 significant digits.
pub struct ExactFloats(PrettyFormatter<'static>);

impl Default for ExactFloats {
    fn default() -> Self {
        ExactFloats(PrettyFormatter::new())
    }
}

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
