//! Order-unit cone operations shared by the standard cone `R^n_+` and the
//! cones of squares of Euclidean Jordan algebras: gauge ratios `M(x/y)`,
//! boundary crossings of half-lines, faces and the two-dimensional chart
//! through a pair of points.

use std::collections::BTreeSet;
use std::fmt::{self, Debug};
use std::str::FromStr;
use std::sync::Arc;

use crate::ejalg::{Algebra, AlgebraKind, ConeMembership, Element};
use crate::error::{Error, Result};
use crate::linalg;

/// Relative threshold below which a point counts as non-interior.
pub const INTERIOR_TOL: f64 = 1e-12;
/// Which cone a computation runs on: `standard:n` for `R^n_+`, or an
/// algebra descriptor for its cone of squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConeBackend {
    Standard(usize),
    Eja(AlgebraKind),
}

impl fmt::Display for ConeBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeBackend::Standard(n) => write!(f, "standard:{n}"),
            ConeBackend::Eja(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for ConeBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("standard:") {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::InvalidAlgebra(format!("bad size in {s:?}")))?;
            if n == 0 {
                return Err(Error::InvalidAlgebra("standard cone needs n >= 1".into()));
            }
            return Ok(ConeBackend::Standard(n));
        }
        Ok(ConeBackend::Eja(s.parse()?))
    }
}

/// Normalised cross-Gram determinant below which two points are proportional.
pub const PROPORTIONAL_TOL: f64 = 1e-10;

/// A closed cone with an order unit in a finite-dimensional inner-product
/// space.
pub trait OrderUnitCone: Sync {
    type Point: Clone + Debug + Send + Sync;

    fn ambient_dim(&self) -> usize;

    /// The order unit `u`.
    fn order_unit(&self) -> Self::Point;

    /// Verifies that `p` belongs to this cone's ambient space.
    fn check(&self, p: &Self::Point) -> Result<()>;

    /// `a x + b y`.
    fn combine(&self, a: f64, x: &Self::Point, b: f64, y: &Self::Point) -> Self::Point;

    fn inner(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// Coordinates in an orthonormal basis of the ambient space.
    fn to_orthonormal(&self, x: &Self::Point) -> Vec<f64>;

    fn from_orthonormal(&self, v: &[f64]) -> Self::Point;

    /// Smallest and largest "eigenvalue" relative to the order unit:
    /// the spectral bounds on a symmetric cone, extreme coordinates on `R^n_+`.
    fn spectral_bounds(&self, x: &Self::Point) -> Result<(f64, f64)>;

    /// `(M(x/y), M(y/x))` for interior `x`, `y`.
    fn gauge_pair(&self, x: &Self::Point, y: &Self::Point) -> Result<(f64, f64)>;

    /// `M(x/y) = inf { b > 0 : x <= b y }`.
    fn gauge_ratio(&self, x: &Self::Point, y: &Self::Point) -> Result<f64> {
        Ok(self.gauge_pair(x, y)?.0)
    }

    fn membership(&self, x: &Self::Point, tol: f64) -> Result<ConeMembership> {
        let (lo, hi) = self.spectral_bounds(x)?;
        Ok(ConeMembership::classify(lo, lo.abs().max(hi.abs()), tol))
    }

    fn ensure_interior(&self, x: &Self::Point) -> Result<()> {
        let (lo, hi) = self.spectral_bounds(x)?;
        if ConeMembership::classify(lo, lo.abs().max(hi.abs()), INTERIOR_TOL)
            == ConeMembership::Interior
        {
            Ok(())
        } else {
            Err(Error::NotInterior { min_eigenvalue: lo })
        }
    }

    /// `|x|_u = inf { l > 0 : -l u <= x <= l u }`.
    fn order_unit_norm(&self, x: &Self::Point) -> Result<f64> {
        let (lo, hi) = self.spectral_bounds(x)?;
        Ok(lo.abs().max(hi.abs()))
    }

    fn norm(&self, x: &Self::Point) -> f64 {
        self.inner(x, x).sqrt()
    }
}

/// `R^n_+` with order unit `(1, ..., 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StandardCone {
    n: usize,
}

impl StandardCone {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "standard cone needs n >= 1");
        StandardCone { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl OrderUnitCone for StandardCone {
    type Point = Vec<f64>;

    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn order_unit(&self) -> Vec<f64> {
        vec![1.0; self.n]
    }

    fn check(&self, p: &Vec<f64>) -> Result<()> {
        if p.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.len(),
            })
        }
    }

    fn combine(&self, a: f64, x: &Vec<f64>, b: f64, y: &Vec<f64>) -> Vec<f64> {
        x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect()
    }

    fn inner(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        linalg::dot(x, y)
    }

    fn to_orthonormal(&self, x: &Vec<f64>) -> Vec<f64> {
        x.clone()
    }

    fn from_orthonormal(&self, v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }

    fn spectral_bounds(&self, x: &Vec<f64>) -> Result<(f64, f64)> {
        self.check(x)?;
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    }

    fn gauge_pair(&self, x: &Vec<f64>, y: &Vec<f64>) -> Result<(f64, f64)> {
        self.ensure_interior(x)?;
        self.ensure_interior(y)?;
        let mut up = 0.0f64;
        let mut down = 0.0f64;
        for (xi, yi) in x.iter().zip(y) {
            up = up.max(xi / yi);
            down = down.max(yi / xi);
        }
        Ok((up, down))
    }
}

/// Interior of the cone of squares of a Euclidean Jordan algebra, with the
/// algebra unit as order unit.
#[derive(Debug, Clone)]
pub struct SymmetricCone {
    algebra: Arc<Algebra>,
}

impl SymmetricCone {
    pub fn new(algebra: Arc<Algebra>) -> Self {
        SymmetricCone { algebra }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// `P(y^{-1/2}) x`, with interiority checks on both inputs.
    pub fn relative_position(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        let frame = y.jordan_frame()?;
        let lo = frame.eigenvalues[0];
        let hi = *frame.eigenvalues.last().expect("rank >= 1");
        if ConeMembership::classify(lo, lo.abs().max(hi.abs()), INTERIOR_TOL)
            != ConeMembership::Interior
        {
            return Err(Error::NotInterior { min_eigenvalue: lo });
        }
        let inv_sqrt = frame.map(|l| Ok(l.powf(-0.5)))?;
        let reduced = inv_sqrt.quad(x)?;
        self.ensure_interior(&reduced)?;
        Ok(reduced)
    }
}

impl OrderUnitCone for SymmetricCone {
    type Point = Element;

    fn ambient_dim(&self) -> usize {
        self.algebra.dim()
    }

    fn order_unit(&self) -> Element {
        Element::unit(&self.algebra)
    }

    fn check(&self, p: &Element) -> Result<()> {
        p.check_same(&Element::zeros(&self.algebra))
    }

    fn combine(&self, a: f64, x: &Element, b: f64, y: &Element) -> Element {
        let mut out = x * a;
        out.axpy(b, y);
        out
    }

    fn inner(&self, x: &Element, y: &Element) -> f64 {
        x.inner(y).expect("points of one cone")
    }

    fn to_orthonormal(&self, x: &Element) -> Vec<f64> {
        x.orthonormal_coords()
    }

    fn from_orthonormal(&self, v: &[f64]) -> Element {
        Element::from_orthonormal_coords(&self.algebra, v).expect("ambient dimension")
    }

    fn spectral_bounds(&self, x: &Element) -> Result<(f64, f64)> {
        self.check(x)?;
        x.spectral_bounds()
    }

    fn gauge_pair(&self, x: &Element, y: &Element) -> Result<(f64, f64)> {
        let (lo, hi) = self.relative_position(x, y)?.spectral_bounds()?;
        Ok((hi, 1.0 / lo))
    }
}

/// Normalised cross-Gram determinant `1 - <x,y>^2 / (|x|^2 |y|^2)`.
pub fn cross_gram_determinant<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> f64 {
    let xx = cone.inner(x, x);
    let yy = cone.inner(y, y);
    let xy = cone.inner(x, y);
    (1.0 - xy * xy / (xx * yy)).max(0.0)
}

pub fn is_proportional<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> bool {
    cross_gram_determinant(cone, x, y) <= PROPORTIONAL_TOL
}

/// Gauge ratio `M(x/y)`.
pub fn m_ratio<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> Result<f64> {
    cone.gauge_ratio(x, y)
}

/// Point where the half-line from `x` through `y` leaves the cone:
/// `M/(M-1) y + 1/(1-M) x` with `M = M(x/y)`.
pub fn boundary_point<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> Result<C::Point> {
    let m = cone.gauge_ratio(x, y)?;
    if m <= 1.0 + 1e-12 {
        return Err(Error::NoBoundaryCrossing(m));
    }
    Ok(cone.combine(m / (m - 1.0), y, 1.0 / (1.0 - m), x))
}

/// Support `{ i : z_i > tol }` of a point of `R^n_+`, which indexes the
/// coordinate directions spanning the face generated by `z`.
pub fn face_span_standard(z: &[f64], tol: f64) -> Result<BTreeSet<usize>> {
    let mut support = BTreeSet::new();
    for (i, &v) in z.iter().enumerate() {
        if v < -tol {
            return Err(Error::NegativeCoordinate { index: i, value: v });
        }
        if v > tol {
            support.insert(i);
        }
    }
    Ok(support)
}

/// A face of a cone: a coordinate support on `R^n_+`, or the face
/// `K(c, 0) = F_{e-c}` of a symmetric cone.
#[derive(Debug, Clone)]
pub enum FaceDescriptor {
    Support(BTreeSet<usize>),
    Peirce(Element),
}

impl FaceDescriptor {
    /// Dimension of the linear span of the face.
    pub fn span_dimension(&self) -> Result<usize> {
        match self {
            FaceDescriptor::Support(s) => Ok(s.len()),
            FaceDescriptor::Peirce(c) => Ok(c.peirce_zero_basis()?.len()),
        }
    }

    /// Whether `y` (a point of the cone) lies in this face.
    pub fn contains_standard(&self, y: &[f64], tol: f64) -> Result<bool> {
        match self {
            FaceDescriptor::Support(s) => Ok(face_span_standard(y, tol)?.is_subset(s)),
            FaceDescriptor::Peirce(_) => Err(Error::InvalidAlgebra(
                "Peirce face queried with a standard-cone point".into(),
            )),
        }
    }
}

/// Linear isomorphism of `span(x, y)` onto `R^2` carrying the
/// two-dimensional cone `K(x, y)` onto `R^2_+`.
///
/// Points are written `a * v_dir + b * u_dir`; the chart coordinates are
/// `(a, b)`.
#[derive(Debug, Clone)]
pub struct TwoDimChart<P> {
    pub u_dir: P,
    pub v_dir: P,
    pub x_coords: (f64, f64),
    pub y_coords: (f64, f64),
    /// `(M(x/y), M(y/x))`.
    pub gauges: (f64, f64),
}

impl<P: Clone> TwoDimChart<P> {
    pub fn point<C: OrderUnitCone<Point = P>>(&self, cone: &C, a: f64, b: f64) -> P {
        cone.combine(a, &self.v_dir, b, &self.u_dir)
    }

    /// Chart coordinates of a point of `span(x, y)`, solved from the 2x2
    /// Gram system of `(v_dir, u_dir)`.
    pub fn coordinates<C: OrderUnitCone<Point = P>>(&self, cone: &C, z: &P) -> (f64, f64) {
        let vv = cone.inner(&self.v_dir, &self.v_dir);
        let uu = cone.inner(&self.u_dir, &self.u_dir);
        let vu = cone.inner(&self.v_dir, &self.u_dir);
        let zv = cone.inner(z, &self.v_dir);
        let zu = cone.inner(z, &self.u_dir);
        let det = vv * uu - vu * vu;
        ((zv * uu - zu * vu) / det, (zu * vv - zv * vu) / det)
    }
}

/// Chart through the linearly independent interior points `x` and `y`.
///
/// `u_dir = y - x / M(x/y)` and `v_dir = x - y / M(y/x)` span the two
/// boundary rays of `K(x, y)`. With `M1 = M(x/y)`, `M2 = M(y/x)` and
/// `D = M1 M2 - 1 > 0` the coordinates are
/// `x = (M1 M2 / D, M1 / D)` and `y = (M2 / D, M1 M2 / D)`.
pub fn two_dim_chart<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
) -> Result<TwoDimChart<C::Point>> {
    let (m1, m2) = cone.gauge_pair(x, y)?;
    if is_proportional(cone, x, y) || m1 * m2 <= 1.0 {
        return Err(Error::Proportional);
    }
    let u_dir = cone.combine(1.0, y, -1.0 / m1, x);
    let v_dir = cone.combine(1.0, x, -1.0 / m2, y);
    let p = m1 * m2;
    let d = p - 1.0;
    Ok(TwoDimChart {
        u_dir,
        v_dir,
        x_coords: (p / d, m1 / d),
        y_coords: (m2 / d, p / d),
        gauges: (m1, m2),
    })
}

/// Order-unit norm `|x|_u`.
pub fn order_unit_norm<C: OrderUnitCone>(cone: &C, x: &C::Point) -> Result<f64> {
    cone.order_unit_norm(x)
}
