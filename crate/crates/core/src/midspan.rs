//! Affine span of the Thompson midpoint set `M(x, y)`.
//!
//! On a symmetric cone the pair is first reduced to `(P(y^{-1/2}) x, e)`.
//! The span is then `m + V(c, 0)`, where `c` collects the spectral
//! idempotents whose eigenvalue realises the distance, and the result is
//! carried back by `P(y^{1/2})`. On `R^n_+` the span is read off the
//! supports of the boundary points of the line through `x` and `y`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::conegeom::{
    boundary_point, face_span_standard, is_proportional, OrderUnitCone, StandardCone,
    SymmetricCone,
};
use crate::ejalg::{Algebra, Element, SpectralDecomposition, DEFAULT_GROUP_TOL, IDEMPOTENT_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::thompson::canonical_midpoint;

/// Default relative tolerance for deciding that an eigenvalue attains the
/// distance.
pub const DEFAULT_TIE_TOL: f64 = 1e-8;
/// Relative deficits below this are rounding noise, not near-ties.
const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidspanOptions {
    pub tie_tol: f64,
    pub group_tol: f64,
}

impl Default for MidspanOptions {
    fn default() -> Self {
        MidspanOptions {
            tie_tol: DEFAULT_TIE_TOL,
            group_tol: DEFAULT_GROUP_TOL,
        }
    }
}

/// `x~ = P(y^{-1/2}) x` together with the congruence relating the pairs
/// `(x, y)` and `(x~, e)`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: Element,
    pub sqrt: Element,
    pub inv_sqrt: Element,
}

impl Reduction {
    /// `P(y^{1/2}) z`.
    pub fn push_forward(&self, z: &Element) -> Result<Element> {
        self.sqrt.quad(z)
    }

    /// `P(y^{-1/2}) z`.
    pub fn pull_back(&self, z: &Element) -> Result<Element> {
        self.inv_sqrt.quad(z)
    }
}

pub fn reduce_pair(x: &Element, y: &Element) -> Result<Reduction> {
    let cone = SymmetricCone::new(x.algebra().clone());
    cone.ensure_interior(x)?;
    cone.ensure_interior(y)?;
    let frame = y.jordan_frame()?;
    let sqrt = frame.map(|l| Ok(l.sqrt()))?;
    let inv_sqrt = frame.map(|l| Ok(1.0 / l.sqrt()))?;
    let reduced = inv_sqrt.quad(x)?;
    Ok(Reduction {
        reduced,
        sqrt,
        inv_sqrt,
    })
}

/// Attainment classification of the spectral blocks of `x~`.
#[derive(Debug, Clone)]
pub struct AttainmentReport {
    pub spectral: SpectralDecomposition,
    /// Block indices whose `max(l, 1/l)` reaches the target.
    pub attaining: Vec<usize>,
    /// Sum of the attaining spectral idempotents.
    pub c: Element,
    /// Total multiplicity of the non-attaining blocks.
    pub k: usize,
    /// `max(lambda_max, 1/lambda_min) = exp(d_T(x~, e))`.
    pub target: f64,
    /// `log target - max log max(l, 1/l)` over non-attaining blocks.
    pub gap: Option<f64>,
    pub near_tie: bool,
}

struct Classification {
    attaining: Vec<bool>,
    gap: Option<f64>,
    near_tie: bool,
}

/// Shared rule: value `a_i = max(l_i, 1/l_i)` attains iff
/// `a_i >= (1 - tau) * max_j a_j`.
fn classify(values: &[f64], tie_tol: f64) -> (f64, Classification) {
    let spread: Vec<f64> = values.iter().map(|l| l.max(1.0 / l)).collect();
    let target = spread.iter().copied().fold(0.0f64, f64::max);
    let mut attaining = Vec::with_capacity(spread.len());
    let mut best_other: Option<f64> = None;
    let mut near_tie = false;
    for &a in &spread {
        let hit = a >= (1.0 - tie_tol) * target;
        attaining.push(hit);
        let deficit = 1.0 - a / target;
        if deficit > ROUNDING_FLOOR && deficit <= 10.0 * tie_tol {
            near_tie = true;
        }
        if !hit {
            best_other = Some(best_other.map_or(a, |b: f64| b.max(a)));
        }
    }
    let gap = best_other.map(|b| target.ln() - b.ln());
    (
        target,
        Classification {
            attaining,
            gap,
            near_tie,
        },
    )
}

/// Classifies the spectrum of an interior `x~ != e`.
pub fn attaining_set(reduced: &Element, tie_tol: f64, group_tol: f64) -> Result<AttainmentReport> {
    let (lo, hi) = reduced.spectral_bounds()?;
    if lo <= 0.0 {
        return Err(Error::NotInterior { min_eigenvalue: lo });
    }
    if hi.max(1.0 / lo).ln() <= tie_tol {
        return Err(Error::CoincidentPair);
    }
    let spectral = reduced.spectral_decompose(group_tol)?;
    let (target, cls) = classify(&spectral.eigenvalues, tie_tol);
    let mut c = Element::zeros(reduced.algebra());
    let mut attaining = Vec::new();
    let mut k = 0;
    for (i, hit) in cls.attaining.iter().enumerate() {
        if *hit {
            attaining.push(i);
            c.axpy(1.0, &spectral.idempotents[i]);
        } else {
            k += spectral.multiplicities[i];
        }
    }
    let residual = c.idempotent_residual();
    if residual > IDEMPOTENT_TOL {
        return Err(Error::Invariant(format!(
            "sum of attaining idempotents has residual {residual:e}"
        )));
    }
    Ok(AttainmentReport {
        spectral,
        attaining,
        c,
        k,
        target,
        gap: cls.gap,
        near_tie: cls.near_tie,
    })
}

/// `k + d k (k - 1) / 2`, the dimension of `V(c, 0)` for an idempotent of
/// rank `r - k` in a simple algebra of rank `r > 1` with Peirce constant `d`.
pub fn closed_form_dimension(algebra: &Algebra, k: usize) -> Option<usize> {
    if !algebra.is_simple() || algebra.rank() < 2 {
        return None;
    }
    let d = algebra.peirce_d()?;
    Some(k + d * k * k.saturating_sub(1) / 2)
}

/// Which boundary face governs the span on `R^n_+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceCase {
    /// `M(x/y) > M(y/x)`: span of the face of `y'`.
    YFace,
    /// `M(x/y) < M(y/x)`: span of the face of `x'`.
    XFace,
    /// Tie: intersection of both spans.
    Intersection,
    /// Equal or proportional pair.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct StandardFaces {
    pub case: FaceCase,
    pub y_support: Option<BTreeSet<usize>>,
    pub x_support: Option<BTreeSet<usize>>,
    pub directions: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
pub struct MidspanReport<P> {
    /// The canonical midpoint.
    pub base_point: P,
    /// Orthonormal basis of the direction space.
    pub basis: Vec<P>,
    pub dimension: usize,
    /// Total multiplicity of non-attaining eigenvalues (coordinates on `R^n_+`).
    pub k: usize,
    pub distance: f64,
    pub attainment_gap: Option<f64>,
    pub near_tie: bool,
    pub proportional: bool,
    pub formula_dimension: Option<usize>,
    pub attainment: Option<AttainmentReport>,
    pub faces: Option<StandardFaces>,
}

impl<P> MidspanReport<P> {
    fn degenerate(base_point: P, distance: f64, proportional: bool) -> Self {
        MidspanReport {
            base_point,
            basis: Vec::new(),
            dimension: 0,
            k: 0,
            distance,
            attainment_gap: None,
            near_tie: false,
            proportional,
            formula_dimension: None,
            attainment: None,
            faces: None,
        }
    }
}

/// Cones for which the midpoint span is computable.
pub trait MidpointSpan: OrderUnitCone {
    fn midpoint_span(
        &self,
        x: &Self::Point,
        y: &Self::Point,
        opts: &MidspanOptions,
    ) -> Result<MidspanReport<Self::Point>>;
}

impl MidpointSpan for SymmetricCone {
    fn midpoint_span(
        &self,
        x: &Element,
        y: &Element,
        opts: &MidspanOptions,
    ) -> Result<MidspanReport<Element>> {
        self.check(x)?;
        self.check(y)?;
        let red = reduce_pair(x, y)?;
        let e = self.order_unit();
        let proportional = is_proportional(self, x, y);
        let att = match attaining_set(&red.reduced, opts.tie_tol, opts.group_tol) {
            Ok(a) => a,
            Err(Error::CoincidentPair) => {
                let d = crate::thompson::distance(self, x, y)?;
                let m = canonical_midpoint(self, x, y)?;
                return Ok(MidspanReport::degenerate(m, d, true));
            }
            Err(err) => return Err(err),
        };
        let base_point = red.push_forward(&canonical_midpoint(self, &red.reduced, &e)?)?;
        let peirce = att.c.peirce_zero_basis()?;
        let pushed: Vec<Vec<f64>> = peirce
            .iter()
            .map(|b| red.push_forward(b).map(|p| p.orthonormal_coords()))
            .collect::<Result<_>>()?;
        let basis: Vec<Element> = linalg::orthonormalize(&pushed, 1e-12)
            .iter()
            .map(|v| Element::from_orthonormal_coords(self.algebra(), v))
            .collect::<Result<_>>()?;
        if basis.len() != peirce.len() {
            return Err(Error::Invariant(format!(
                "congruence collapsed a {}-dimensional Peirce space to {}",
                peirce.len(),
                basis.len()
            )));
        }
        Ok(MidspanReport {
            base_point,
            dimension: basis.len(),
            basis,
            k: att.k,
            distance: att.target.ln(),
            attainment_gap: att.gap,
            near_tie: att.near_tie,
            proportional,
            formula_dimension: closed_form_dimension(self.algebra(), att.k),
            attainment: Some(att),
            faces: None,
        })
    }
}

impl MidpointSpan for StandardCone {
    fn midpoint_span(
        &self,
        x: &Vec<f64>,
        y: &Vec<f64>,
        opts: &MidspanOptions,
    ) -> Result<MidspanReport<Vec<f64>>> {
        let (m1, m2) = self.gauge_pair(x, y)?;
        let distance = m1.max(m2).ln().max(0.0);
        let proportional = is_proportional(self, x, y);
        let base_point = canonical_midpoint(self, x, y)?;
        let tau = opts.tie_tol;
        if distance <= tau {
            let mut r = MidspanReport::degenerate(base_point, distance, true);
            r.faces = Some(StandardFaces {
                case: FaceCase::Degenerate,
                y_support: None,
                x_support: None,
                directions: BTreeSet::new(),
            });
            return Ok(r);
        }
        let ratios: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / b).collect();
        let (_, cls) = classify(&ratios, tau);

        // supports of y' and x' from their rescaled coordinates
        // y'_i proportional to 1 - r_i / M1, x'_i to 1 - (1/r_i) / M2
        let y_scaled: Vec<f64> = ratios.iter().map(|r| 1.0 - r / m1).collect();
        let x_scaled: Vec<f64> = ratios.iter().map(|r| 1.0 - (1.0 / r) / m2).collect();
        let support = |v: &[f64]| -> Result<BTreeSet<usize>> {
            let clipped: Vec<f64> = v.iter().map(|s| s.max(0.0)).collect();
            face_span_standard(&clipped, tau)
        };
        let tie = (m1 - m2).abs() <= tau * m1.max(m2);
        let (case, y_support, x_support) = if tie {
            (FaceCase::Intersection, Some(support(&y_scaled)?), Some(support(&x_scaled)?))
        } else if m1 > m2 {
            boundary_point(self, x, y)?;
            (FaceCase::YFace, Some(support(&y_scaled)?), None)
        } else {
            boundary_point(self, y, x)?;
            (FaceCase::XFace, None, Some(support(&x_scaled)?))
        };
        let directions: BTreeSet<usize> = match (&y_support, &x_support) {
            (Some(a), Some(b)) => a.intersection(b).copied().collect(),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => BTreeSet::new(),
        };
        let k = cls.attaining.iter().filter(|a| !**a).count();
        let basis = directions
            .iter()
            .map(|&i| {
                let mut v = vec![0.0; self.n()];
                v[i] = 1.0;
                v
            })
            .collect::<Vec<_>>();
        Ok(MidspanReport {
            base_point,
            dimension: basis.len(),
            basis,
            k,
            distance,
            attainment_gap: cls.gap,
            near_tie: cls.near_tie,
            proportional,
            formula_dimension: None,
            attainment: None,
            faces: Some(StandardFaces {
                case,
                y_support,
                x_support,
                directions,
            }),
        })
    }
}

/// Dimension of `aff M(x, y)`; on simple algebras the Peirce count is
/// checked against the closed form.
pub fn midspan_dimension<C: MidpointSpan>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    opts: &MidspanOptions,
) -> Result<usize> {
    let report = cone.midpoint_span(x, y, opts)?;
    if let Some(f) = report.formula_dimension {
        if f != report.dimension {
            return Err(Error::Invariant(format!(
                "Peirce basis has dimension {} but closed form gives {f}",
                report.dimension
            )));
        }
    }
    if report.faces.is_some() && report.k != report.dimension {
        return Err(Error::Invariant(format!(
            "face supports give dimension {} but {} coordinates fail to attain",
            report.dimension, report.k
        )));
    }
    Ok(report.dimension)
}

/// Whether `M(x, y)` is a single point.
pub fn is_singleton<C: MidpointSpan>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    opts: &MidspanOptions,
) -> Result<bool> {
    Ok(midspan_dimension(cone, x, y, opts)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ejalg::AlgebraKind;
    use crate::thompson::{geometric_mean, is_midpoint};
    use std::sync::Arc;

    fn cone(s: &str) -> SymmetricCone {
        SymmetricCone::new(Algebra::new(s.parse::<AlgebraKind>().unwrap()).unwrap())
    }

    fn diag(k: &SymmetricCone, d: &[f64]) -> Element {
        Element::diagonal(k.algebra(), d).unwrap()
    }

    fn opts() -> MidspanOptions {
        MidspanOptions::default()
    }

    #[test]
    fn reduction_cases() {
        let k = cone("sym-real:3");
        let e = k.order_unit();
        let x = diag(&k, &[4.0, 2.0, 1.0]);
        let y = diag(&k, &[2.0, 4.0, 1.0]);
        assert!(reduce_pair(&x, &e).unwrap().reduced.distance_to(&x) < 1e-15);
        assert!(reduce_pair(&x, &x).unwrap().reduced.distance_to(&e) < 1e-14);
        let r = reduce_pair(&x, &y).unwrap();
        assert!(r.reduced.distance_to(&diag(&k, &[2.0, 0.5, 1.0])) < 1e-14);
        let back = r.push_forward(&r.pull_back(&x).unwrap()).unwrap();
        assert!(back.distance_to(&x) < 1e-13);
    }

    #[test]
    fn attainment_examples() {
        let k = cone("sym-real:3");
        let a = attaining_set(&diag(&k, &[4.0, 2.0, 1.0]), 1e-8, 1e-8).unwrap();
        assert_eq!(a.k, 2);
        assert!(a.c.distance_to(&diag(&k, &[1.0, 0.0, 0.0])) < 1e-14);
        let a = attaining_set(&diag(&k, &[4.0, 2.0, 0.25]), 1e-8, 1e-8).unwrap();
        assert_eq!(a.k, 1);
        assert!(a.c.distance_to(&diag(&k, &[1.0, 0.0, 1.0])) < 1e-14);
        assert!(!a.near_tie);
        let k2 = cone("sym-real:2");
        let a = attaining_set(&diag(&k2, &[4.0, 0.25]), 1e-8, 1e-8).unwrap();
        assert_eq!(a.k, 0);
        assert!(matches!(
            attaining_set(&k2.order_unit(), 1e-8, 1e-8),
            Err(Error::CoincidentPair)
        ));
    }

    #[test]
    fn near_tie_flag() {
        let k = cone("sym-real:2");
        let a = attaining_set(&diag(&k, &[4.0, 0.25 * (1.0 + 5e-8)]), 1e-8, 1e-12).unwrap();
        assert!(a.near_tie);
        assert_eq!(a.k, 1);
    }

    #[test]
    fn hermitian_span() {
        let k = cone("herm-complex:3");
        let r = k
            .midpoint_span(&diag(&k, &[4.0, 2.0, 1.0]), &k.order_unit(), &opts())
            .unwrap();
        assert_eq!(r.dimension, 4);
        assert_eq!(r.formula_dimension, Some(4));
    }

    #[test]
    fn symmetric_span() {
        let k = cone("sym-real:3");
        let x = diag(&k, &[4.0, 2.0, 1.0]);
        let e = k.order_unit();
        let r = k.midpoint_span(&x, &e, &opts()).unwrap();
        assert_eq!(r.dimension, 3);
        assert!(r.base_point.distance_to(&diag(&k, &[2.0, 4.0 / 3.0, 1.0])) < 1e-14);
        for b in &r.basis {
            let m = b.to_symmetric().unwrap();
            for j in 0..3 {
                assert!(m[j].abs() < 1e-14 && m[3 * j].abs() < 1e-14);
            }
        }
        // every basis direction lies in V(c, 0) after pulling back
        let att = r.attainment.as_ref().unwrap();
        for b in &r.basis {
            assert!(att.c.jordan(b).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn standard_span() {
        let s = StandardCone::new(3);
        let r = s
            .midpoint_span(&vec![4.0, 2.0, 1.0], &vec![1.0, 1.0, 1.0], &opts())
            .unwrap();
        assert_eq!(r.dimension, 2);
        let f = r.faces.unwrap();
        assert_eq!(f.case, FaceCase::YFace);
        assert_eq!(f.directions, BTreeSet::from([1, 2]));
        assert_eq!(r.base_point, vec![2.0, 4.0 / 3.0, 1.0]);
    }

    #[test]
    fn standard_cases() {
        let s = StandardCone::new(3);
        let one = vec![1.0; 3];
        let r = s.midpoint_span(&vec![0.25, 0.5, 1.0], &one, &opts()).unwrap();
        assert_eq!(r.faces.as_ref().unwrap().case, FaceCase::XFace);
        assert_eq!(r.dimension, 2);
        let r = s.midpoint_span(&vec![4.0, 0.25, 2.0], &one, &opts()).unwrap();
        assert_eq!(r.faces.as_ref().unwrap().case, FaceCase::Intersection);
        assert_eq!(r.faces.as_ref().unwrap().directions, BTreeSet::from([2]));
        let r = s.midpoint_span(&vec![3.0, 3.0, 3.0], &one, &opts()).unwrap();
        assert_eq!(r.dimension, 0);
        let r = s.midpoint_span(&one, &one, &opts()).unwrap();
        assert_eq!(r.dimension, 0);
        assert_eq!(r.base_point, one);
    }

    #[test]
    fn closed_form_examples() {
        let k = cone("herm-complex:4");
        let x = diag(&k, &[5.0, 3.0, 2.0, 1.5]);
        assert_eq!(midspan_dimension(&k, &x, &k.order_unit(), &opts()).unwrap(), 9);
        let sp = cone("spin:5");
        let mut w = vec![0.0; 5];
        w[0] = 2.0;
        w[1] = 0.5;
        let x = Element::new(sp.algebra(), w).unwrap();
        assert_eq!(midspan_dimension(&sp, &x, &sp.order_unit(), &opts()).unwrap(), 1);
        let k2 = cone("sym-real:2");
        assert!(is_singleton(&k2, &diag(&k2, &[4.0, 0.25]), &k2.order_unit(), &opts()).unwrap());
        assert!(!is_singleton(&k2, &diag(&k2, &[4.0, 2.0]), &k2.order_unit(), &opts()).unwrap());
        let x = diag(&k2, &[1.0, 2.0]);
        assert!(is_singleton(&k2, &(&x * 3.0), &x, &opts()).unwrap());
    }

    #[test]
    fn formula_undefined_on_direct_sums() {
        let k = cone("direct-sum(sym-real:2,spin:3)");
        let alg: &Arc<Algebra> = k.algebra();
        assert_eq!(closed_form_dimension(alg, 2), None);
    }

    #[test]
    fn base_point_coherence() {
        let k = cone("sym-real:3");
        let x = diag(&k, &[4.0, 2.0, 1.0]);
        let y = Element::from_symmetric(
            k.algebra(),
            &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0],
        )
        .unwrap();
        let r = k.midpoint_span(&x, &y, &opts()).unwrap();
        assert!(is_midpoint(&k, &x, &y, &r.base_point, None));
        let g = geometric_mean(&x, &y).unwrap();
        let diff = (&g - &r.base_point).orthonormal_coords();
        let span: Vec<Vec<f64>> = r.basis.iter().map(|b| b.orthonormal_coords()).collect();
        let rest = linalg::reject_from(&diff, &span);
        assert!(linalg::norm(&rest) < 1e-9);
    }
}
