//! Euclidean Jordan algebra kernel.
//!
//! Supported families are real symmetric matrices, complex Hermitian matrices,
//! spin factors and finite direct sums of those. Elements are stored as
//! coordinate vectors in a fixed basis that is orthonormal for the trace form
//! on the matrix families. Spin factors keep the canonical coordinates
//! `(t, w)`; their trace form is `2(ts + <w, z>)`.
//!
//! Matrix coordinate layout, for `i` in `0..m` and `j` in `i..m`:
//! the diagonal entry `a_ii`, then for `i < j` the value `sqrt(2) Re a_ij`
//! and (Hermitian only) `sqrt(2) Im a_ij`.

mod matrix;
mod peirce;
mod spectral;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use peirce::PeirceIndex;
pub use spectral::{ConeMembership, JordanFrame, SpectralDecomposition};

/// Default relative tolerance used to merge eigenvalues into one block.
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;
/// Bound on `|c^2 - c|` accepted for an idempotent.
pub const IDEMPOTENT_TOL: f64 = 1e-8;

/// Which algebra family an [`Algebra`] belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgebraKind {
    /// Real symmetric `m x m` matrices.
    SymReal { m: usize },
    /// Complex Hermitian `m x m` matrices.
    HermComplex { m: usize },
    /// Spin factor on `R x R^(m-1)`.
    Spin { m: usize },
    DirectSum { summands: Vec<AlgebraKind> },
}

impl AlgebraKind {
    pub fn sym_real(m: usize) -> Self {
        AlgebraKind::SymReal { m }
    }
    pub fn herm_complex(m: usize) -> Self {
        AlgebraKind::HermComplex { m }
    }
    pub fn spin(m: usize) -> Self {
        AlgebraKind::Spin { m }
    }
    pub fn direct_sum(summands: Vec<AlgebraKind>) -> Self {
        AlgebraKind::DirectSum { summands }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::SymReal { m } => write!(f, "sym-real:{m}"),
            AlgebraKind::HermComplex { m } => write!(f, "herm-complex:{m}"),
            AlgebraKind::Spin { m } => write!(f, "spin:{m}"),
            AlgebraKind::DirectSum { summands } => {
                write!(f, "direct-sum(")?;
                for (i, s) in summands.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `herm-complex:3` or
    /// `direct-sum(sym-real:2,spin:3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("direct-sum(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = Vec::new();
            let mut depth = 0usize;
            let mut start = 0usize;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        parts.push(&inner[start..i]);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(&inner[start..]);
            let summands = parts
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?;
            return Ok(AlgebraKind::DirectSum { summands });
        }
        let (name, size) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidAlgebra(format!("expected <kind>:<size>, got {s:?}")))?;
        let m: usize = size
            .trim()
            .parse()
            .map_err(|_| Error::InvalidAlgebra(format!("bad size in {s:?}")))?;
        match name.trim() {
            "sym-real" => Ok(AlgebraKind::SymReal { m }),
            "herm-complex" => Ok(AlgebraKind::HermComplex { m }),
            "spin" => Ok(AlgebraKind::Spin { m }),
            other => Err(Error::InvalidAlgebra(format!("unknown algebra kind {other:?}"))),
        }
    }
}

/// A validated algebra descriptor with its structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    kind: AlgebraKind,
    dim: usize,
    rank: usize,
    peirce_d: Option<usize>,
    summands: Vec<(usize, Arc<Algebra>)>,
    // trace-form weight of each coordinate, and its square root
    weight: Vec<f64>,
    metric: Vec<f64>,
}

impl Algebra {
    pub fn new(kind: AlgebraKind) -> Result<Arc<Self>> {
        Self::build(kind).map(Arc::new)
    }

    fn build(kind: AlgebraKind) -> Result<Self> {
        let simple = |kind, dim, rank, d: Option<usize>, w: f64| Algebra {
            kind,
            dim,
            rank,
            peirce_d: d,
            summands: Vec::new(),
            weight: vec![w; dim],
            metric: vec![w.sqrt(); dim],
        };
        match kind {
            AlgebraKind::SymReal { m } => {
                if m == 0 {
                    return Err(Error::InvalidAlgebra("sym-real needs m >= 1".into()));
                }
                let d = (m > 1).then_some(1);
                Ok(simple(kind, m * (m + 1) / 2, m, d, 1.0))
            }
            AlgebraKind::HermComplex { m } => {
                if m == 0 {
                    return Err(Error::InvalidAlgebra("herm-complex needs m >= 1".into()));
                }
                let d = (m > 1).then_some(2);
                Ok(simple(kind, m * m, m, d, 1.0))
            }
            AlgebraKind::Spin { m } => {
                if m < 2 {
                    return Err(Error::InvalidAlgebra("spin factor needs m >= 2".into()));
                }
                Ok(simple(kind, m, 2, Some(m - 2), 2.0))
            }
            AlgebraKind::DirectSum { ref summands } => {
                if summands.is_empty() {
                    return Err(Error::InvalidAlgebra("empty direct sum".into()));
                }
                let mut offset = 0;
                let mut rank = 0;
                let mut parts = Vec::with_capacity(summands.len());
                let mut metric = Vec::new();
                let mut weight = Vec::new();
                for s in summands {
                    let a = Self::build(s.clone())?;
                    rank += a.rank;
                    metric.extend_from_slice(&a.metric);
                    weight.extend_from_slice(&a.weight);
                    let dim = a.dim;
                    parts.push((offset, Arc::new(a)));
                    offset += dim;
                }
                Ok(Algebra {
                    kind,
                    dim: offset,
                    rank,
                    peirce_d: None,
                    summands: parts,
                    weight,
                    metric,
                })
            }
        }
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    /// Real vector-space dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Peirce constant `d`; defined for simple algebras of rank > 1.
    pub fn peirce_d(&self) -> Option<usize> {
        self.peirce_d
    }

    pub fn is_simple(&self) -> bool {
        !matches!(self.kind, AlgebraKind::DirectSum { .. })
    }

    fn product_raw(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        match self.kind {
            AlgebraKind::SymReal { m } => {
                let x = matrix::sym_to_matrix(m, a);
                let y = matrix::sym_to_matrix(m, b);
                let z = matrix::mul_real(m, &x, &y);
                matrix::real_to_sym_coords(m, &z, out);
            }
            AlgebraKind::HermComplex { m } => {
                let x = matrix::herm_to_matrix(m, a);
                let y = matrix::herm_to_matrix(m, b);
                let z = matrix::mul_complex(m, &x, &y);
                matrix::complex_to_herm_coords(m, &z, out);
            }
            AlgebraKind::Spin { .. } => {
                let (t, w) = (a[0], &a[1..]);
                let (s, z) = (b[0], &b[1..]);
                out[0] = t * s + crate::linalg::dot(w, z);
                for i in 1..a.len() {
                    out[i] = t * z[i - 1] + s * w[i - 1];
                }
            }
            AlgebraKind::DirectSum { .. } => {
                for (off, sub) in &self.summands {
                    let r = *off..*off + sub.dim;
                    sub.product_raw(&a[r.clone()], &b[r.clone()], &mut out[r]);
                }
            }
        }
    }

    fn unit_raw(&self, out: &mut [f64]) {
        match self.kind {
            AlgebraKind::SymReal { m } | AlgebraKind::HermComplex { m } => {
                let complex = matches!(self.kind, AlgebraKind::HermComplex { .. });
                let mut k = 0;
                for i in 0..m {
                    for j in i..m {
                        if i == j {
                            out[k] = 1.0;
                            k += 1;
                        } else {
                            out[k] = 0.0;
                            k += 1;
                            if complex {
                                out[k] = 0.0;
                                k += 1;
                            }
                        }
                    }
                }
            }
            AlgebraKind::Spin { .. } => {
                out.iter_mut().for_each(|x| *x = 0.0);
                out[0] = 1.0;
            }
            AlgebraKind::DirectSum { .. } => {
                for (off, sub) in &self.summands {
                    sub.unit_raw(&mut out[*off..*off + sub.dim]);
                }
            }
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

/// An element of a Euclidean Jordan algebra.
#[derive(Debug, Clone)]
pub struct Element {
    algebra: Arc<Algebra>,
    coords: Vec<f64>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a.kind == b.kind
}

impl Element {
    pub fn new(algebra: &Arc<Algebra>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim,
                got: coords.len(),
            });
        }
        Ok(Element {
            algebra: Arc::clone(algebra),
            coords,
        })
    }

    pub fn zeros(algebra: &Arc<Algebra>) -> Self {
        Element {
            algebra: Arc::clone(algebra),
            coords: vec![0.0; algebra.dim],
        }
    }

    /// The unit `e`.
    pub fn unit(algebra: &Arc<Algebra>) -> Self {
        let mut coords = vec![0.0; algebra.dim];
        algebra.unit_raw(&mut coords);
        Element {
            algebra: Arc::clone(algebra),
            coords,
        }
    }

    /// Builds a symmetric-matrix element from row-major entries.
    /// Only the upper triangle is read.
    pub fn from_symmetric(algebra: &Arc<Algebra>, entries: &[f64]) -> Result<Self> {
        let AlgebraKind::SymReal { m } = algebra.kind else {
            return Err(Error::InvalidAlgebra(format!("{algebra} is not sym-real")));
        };
        if entries.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: entries.len(),
            });
        }
        let mut coords = vec![0.0; algebra.dim];
        matrix::upper_real_to_coords(m, entries, &mut coords);
        Element::new(algebra, coords)
    }

    /// Builds a Hermitian-matrix element from row-major entries.
    /// Only the upper triangle is read.
    pub fn from_hermitian(algebra: &Arc<Algebra>, entries: &[Complex64]) -> Result<Self> {
        let AlgebraKind::HermComplex { m } = algebra.kind else {
            return Err(Error::InvalidAlgebra(format!("{algebra} is not herm-complex")));
        };
        if entries.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: entries.len(),
            });
        }
        let mut coords = vec![0.0; algebra.dim];
        matrix::upper_complex_to_coords(m, entries, &mut coords);
        Element::new(algebra, coords)
    }

    /// Diagonal matrix element (matrix families), or one coordinate per
    /// summand for a direct sum of one-dimensional algebras.
    pub fn diagonal(algebra: &Arc<Algebra>, diag: &[f64]) -> Result<Self> {
        match algebra.kind {
            AlgebraKind::SymReal { m } | AlgebraKind::HermComplex { m } => {
                if diag.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: diag.len(),
                    });
                }
                let mut x = Element::zeros(algebra);
                let complex = matches!(algebra.kind, AlgebraKind::HermComplex { .. });
                for (i, d) in diag.iter().enumerate() {
                    x.coords[matrix::diag_index(m, i, complex)] = *d;
                }
                Ok(x)
            }
            _ if algebra.dim == algebra.rank => Element::new(algebra, diag.to_vec()),
            _ => Err(Error::InvalidAlgebra(format!("{algebra} has no diagonal form"))),
        }
    }

    /// Symmetric matrix of a sym-real element, row-major.
    pub fn to_symmetric(&self) -> Option<Vec<f64>> {
        match self.algebra.kind {
            AlgebraKind::SymReal { m } => Some(matrix::sym_to_matrix(m, &self.coords)),
            _ => None,
        }
    }

    /// Hermitian matrix of a herm-complex element, row-major.
    pub fn to_hermitian(&self) -> Option<Vec<Complex64>> {
        match self.algebra.kind {
            AlgebraKind::HermComplex { m } => Some(matrix::herm_to_matrix(m, &self.coords)),
            _ => None,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Coordinates in a basis orthonormal for the trace form.
    pub fn orthonormal_coords(&self) -> Vec<f64> {
        self.coords
            .iter()
            .zip(&self.algebra.metric)
            .map(|(c, w)| c * w)
            .collect()
    }

    pub fn from_orthonormal_coords(algebra: &Arc<Algebra>, v: &[f64]) -> Result<Self> {
        let coords = v.iter().zip(&algebra.metric).map(|(c, w)| c / w).collect();
        Element::new(algebra, coords)
    }

    /// Per-summand components of a direct-sum element.
    pub fn summands(&self) -> Vec<Element> {
        if self.algebra.summands.is_empty() {
            return vec![self.clone()];
        }
        self.algebra
            .summands
            .iter()
            .map(|(off, sub)| Element {
                algebra: Arc::clone(sub),
                coords: self.coords[*off..*off + sub.dim].to_vec(),
            })
            .collect()
    }

    pub fn check_same(&self, other: &Element) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.algebra.to_string(),
                right: other.algebra.to_string(),
            })
        }
    }

    /// Jordan product `self • other`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut out = vec![0.0; self.coords.len()];
        self.algebra
            .product_raw(&self.coords, &other.coords, &mut out);
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coords: out,
        })
    }

    pub fn square(&self) -> Element {
        self.jordan(self).expect("same algebra")
    }

    /// Trace inner product.
    pub fn inner(&self, other: &Element) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.algebra.weight)
            .map(|((a, b), w)| a * b * w)
            .sum())
    }

    /// Norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same algebra").sqrt()
    }

    /// Quadratic representation `P(self) z = 2 self•(self•z) - self²•z`.
    pub fn quad(&self, z: &Element) -> Result<Element> {
        let xz = self.jordan(z)?;
        let x_xz = self.jordan(&xz)?;
        let x2z = self.square().jordan(z)?;
        Ok(&(&x_xz * 2.0) - &x2z)
    }

    /// Matrix of `L(self)` in orthonormal coordinates, row-major.
    pub fn multiplication_matrix(&self) -> Vec<f64> {
        let n = self.algebra.dim;
        let mut l = vec![0.0; n * n];
        let mut basis = vec![0.0; n];
        let mut out = vec![0.0; n];
        let w = &self.algebra.metric;
        for j in 0..n {
            basis.iter_mut().for_each(|b| *b = 0.0);
            basis[j] = 1.0 / w[j];
            self.algebra.product_raw(&self.coords, &basis, &mut out);
            for i in 0..n {
                l[i * n + j] = out[i] * w[i];
            }
        }
        l
    }

    pub fn axpy(&mut self, a: f64, x: &Element) {
        assert!(same_algebra(&self.algebra, &x.algebra), "algebra mismatch");
        for (s, v) in self.coords.iter_mut().zip(&x.coords) {
            *s += a * v;
        }
    }

    pub fn distance_to(&self, other: &Element) -> f64 {
        (self - other).norm()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &Element {
    type Output = Element;
    fn mul(self, rhs: f64) -> Element {
        Element {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.iter().map(|c| c * rhs).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self * -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> Arc<Algebra> {
        Algebra::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn descriptor_constants() {
        for m in 1..=6 {
            let a = alg(&format!("sym-real:{m}"));
            assert_eq!((a.dim(), a.rank()), (m * (m + 1) / 2, m));
            let h = alg(&format!("herm-complex:{m}"));
            assert_eq!((h.dim(), h.rank()), (m * m, m));
            if m > 1 {
                for x in [&a, &h] {
                    let d = x.peirce_d().unwrap();
                    let r = x.rank();
                    assert_eq!(x.dim(), r + d * r * (r - 1) / 2);
                }
            } else {
                assert_eq!(a.peirce_d(), None);
            }
        }
        for m in 2..=10 {
            let s = alg(&format!("spin:{m}"));
            assert_eq!((s.dim(), s.rank(), s.peirce_d()), (m, 2, Some(m - 2)));
        }
        let ds = alg("direct-sum(sym-real:2,spin:4,herm-complex:2)");
        assert_eq!((ds.dim(), ds.rank(), ds.peirce_d()), (3 + 4 + 4, 2 + 2 + 2, None));
        assert_eq!(ds.to_string(), "direct-sum(sym-real:2,spin:4,herm-complex:2)");
        assert!(Algebra::new(AlgebraKind::spin(1)).is_err());
        assert!(Algebra::new(AlgebraKind::direct_sum(vec![])).is_err());
        assert!("cube:3".parse::<AlgebraKind>().is_err());
    }

    #[test]
    fn anticommuting_pair_has_zero_product() {
        let a = alg("sym-real:2");
        let x = Element::from_symmetric(&a, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let y = Element::from_symmetric(&a, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let p = x.jordan(&y).unwrap();
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn spin_unit_acts_as_identity() {
        let a = alg("spin:3");
        let e = Element::unit(&a);
        assert_eq!(e.coords(), &[1.0, 0.0, 0.0]);
        let x = Element::new(&a, vec![0.3, -1.2, 2.5]).unwrap();
        assert_eq!(e.jordan(&x).unwrap(), x);
    }

    #[test]
    fn diagonal_product_is_entrywise() {
        for s in ["sym-real:3", "herm-complex:3"] {
            let a = alg(s);
            let x = Element::diagonal(&a, &[1.0, -2.0, 3.0]).unwrap();
            let y = Element::diagonal(&a, &[4.0, 5.0, 0.5]).unwrap();
            let want = Element::diagonal(&a, &[4.0, -10.0, 1.5]).unwrap();
            assert!(x.jordan(&y).unwrap().distance_to(&want) < 1e-14);
        }
    }

    #[test]
    fn trace_inner_products() {
        let a = alg("sym-real:2");
        let i = Element::unit(&a);
        assert_eq!(i.inner(&i).unwrap(), 2.0);
        let s = alg("spin:3");
        let e = Element::unit(&s);
        assert_eq!(e.inner(&e).unwrap(), 2.0);
        // tr(XY) for a full symmetric pair
        let x = Element::from_symmetric(&a, &[1.0, 2.0, 2.0, 3.0]).unwrap();
        let y = Element::from_symmetric(&a, &[-1.0, 0.5, 0.5, 4.0]).unwrap();
        assert!((x.inner(&y).unwrap() - (-1.0 + 2.0 * 0.5 * 2.0 + 12.0)).abs() < 1e-14);
    }

    #[test]
    fn units_of_each_family() {
        let a = alg("sym-real:3");
        assert_eq!(
            Element::unit(&a).to_symmetric().unwrap(),
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(Element::unit(&alg("spin:4")).coords(), &[1.0, 0.0, 0.0, 0.0]);
        let ds = alg("direct-sum(sym-real:2,spin:3)");
        assert_eq!(
            Element::unit(&ds).coords(),
            &[1.0, 0.0, 1.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = Element::unit(&alg("sym-real:2"));
        let b = Element::unit(&alg("spin:3"));
        assert!(matches!(a.jordan(&b), Err(Error::AlgebraMismatch { .. })));
        assert!(matches!(a.inner(&b), Err(Error::AlgebraMismatch { .. })));
        assert!(Element::new(&alg("spin:3"), vec![1.0]).is_err());
    }

    #[test]
    fn quadratic_representation_matches_xzx() {
        let a = alg("herm-complex:3");
        let x = Element::new(&a, (0..9).map(|i| (i as f64 * 0.7).sin()).collect()).unwrap();
        let z = Element::new(&a, (0..9).map(|i| (i as f64 * 1.3).cos()).collect()).unwrap();
        let px = x.quad(&z).unwrap();
        let xm = x.to_hermitian().unwrap();
        let zm = z.to_hermitian().unwrap();
        let xzx = matrix::mul_complex(3, &matrix::mul_complex(3, &xm, &zm), &xm);
        let want = Element::from_hermitian(&a, &xzx).unwrap();
        assert!(px.distance_to(&want) < 1e-13);
    }

    #[test]
    fn quadratic_representation_on_diagonals() {
        let a = alg("sym-real:2");
        let x = Element::diagonal(&a, &[2.0, 3.0]).unwrap();
        let z = Element::diagonal(&a, &[5.0, 7.0]).unwrap();
        let want = Element::diagonal(&a, &[20.0, 63.0]).unwrap();
        assert!(x.quad(&z).unwrap().distance_to(&want) < 1e-13);
        let e = Element::unit(&a);
        assert!(e.quad(&z).unwrap().distance_to(&z) < 1e-15);
    }

    #[test]
    fn hermitian_round_trip() {
        let a = alg("herm-complex:2");
        let m = [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, -3.0),
            Complex64::new(2.0, 3.0),
            Complex64::new(-4.0, 0.0),
        ];
        let x = Element::from_hermitian(&a, &m).unwrap();
        assert_eq!(x.to_hermitian().unwrap(), m.to_vec());
        // ||X||^2 = tr(X^2) = 1 + 16 + 2*13
        assert!((x.inner(&x).unwrap() - 43.0).abs() < 1e-12);
    }

    #[test]
    fn multiplication_matrix_is_symmetric() {
        let a = alg("direct-sum(spin:4,herm-complex:2)");
        let x = Element::new(&a, (0..8).map(|i| 1.0 + i as f64 * 0.25).collect()).unwrap();
        let l = x.multiplication_matrix();
        let n = a.dim();
        for i in 0..n {
            for j in 0..n {
                assert!((l[i * n + j] - l[j * n + i]).abs() < 1e-14);
            }
        }
    }
}
