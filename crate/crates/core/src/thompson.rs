//! Thompson's part metric, its two families of geodesics and the midpoint
//! predicate.

use crate::conegeom::{is_proportional, two_dim_chart, OrderUnitCone, SymmetricCone};
use crate::ejalg::Element;
use crate::error::{Error, Result};

/// `d_T(x, y) = log max(M(x/y), M(y/x))`.
pub fn distance<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> Result<f64> {
    let (m1, m2) = cone.gauge_pair(x, y)?;
    Ok(m1.max(m2).ln().max(0.0))
}

/// Euclidean norm of the log-spectrum of `P(y^{-1/2}) x`.
pub fn delta2(x: &Element, y: &Element) -> Result<f64> {
    let cone = SymmetricCone::new(x.algebra().clone());
    let reduced = cone.relative_position(x, y)?;
    Ok(reduced
        .eigenvalues()?
        .iter()
        .map(|l| l.ln().powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `P(x^{1/2}) (P(x^{-1/2}) y)^t`.
pub fn power_geodesic(x: &Element, y: &Element, t: f64) -> Result<Element> {
    let cone = SymmetricCone::new(x.algebra().clone());
    cone.ensure_interior(x)?;
    let frame = x.jordan_frame()?;
    let sqrt = frame.map(|l| Ok(l.sqrt()))?;
    let inv_sqrt = frame.map(|l| Ok(1.0 / l.sqrt()))?;
    let w = inv_sqrt.quad(y)?;
    cone.ensure_interior(&w)?;
    sqrt.quad(&w.power(t)?)
}

/// `x # y`, the midpoint of the power geodesic.
pub fn geometric_mean(x: &Element, y: &Element) -> Result<Element> {
    power_geodesic(x, y, 0.5)
}

/// Pull-back under the two-dimensional chart of the coordinatewise
/// geometric path in `R^2_+`. Proportional pairs `y = s x` give `s^t x`.
pub fn canonical_geodesic<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    t: f64,
) -> Result<C::Point> {
    cone.ensure_interior(x)?;
    cone.ensure_interior(y)?;
    if is_proportional(cone, x, y) {
        let s = cone.inner(x, y) / cone.inner(x, x);
        return Ok(cone.combine(s.powf(t), x, 0.0, y));
    }
    let chart = match two_dim_chart(cone, x, y) {
        Ok(c) => c,
        Err(Error::Proportional) => {
            let s = cone.inner(x, y) / cone.inner(x, x);
            return Ok(cone.combine(s.powf(t), x, 0.0, y));
        }
        Err(e) => return Err(e),
    };
    let (a1, b1) = chart.x_coords;
    let (a2, b2) = chart.y_coords;
    let a = a1.powf(1.0 - t) * a2.powf(t);
    let b = b1.powf(1.0 - t) * b2.powf(t);
    Ok(chart.point(cone, a, b))
}

/// `m_xy = gamma_xy(1/2)`.
pub fn canonical_midpoint<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point) -> Result<C::Point> {
    canonical_geodesic(cone, x, y, 0.5)
}

/// Default absolute tolerance for the midpoint test at distance `d`.
pub fn midpoint_tolerance(d: f64) -> f64 {
    1e-9 * d.max(1.0)
}

/// Whether `z` is a Thompson midpoint of `x` and `y` within `tol`
/// (default [`midpoint_tolerance`]). Non-interior `z` is never a midpoint.
pub fn is_midpoint<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    z: &C::Point,
    tol: Option<f64>,
) -> bool {
    let Ok(d) = distance(cone, x, y) else {
        return false;
    };
    let tol = tol.unwrap_or_else(|| midpoint_tolerance(d));
    is_midpoint_at(cone, x, y, z, d, tol)
}

/// [`is_midpoint`] with `d = d_T(x, y)` already known.
pub fn is_midpoint_at<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    z: &C::Point,
    d: f64,
    tol: f64,
) -> bool {
    let (Ok(dxz), Ok(dzy)) = (distance(cone, x, z), distance(cone, z, y)) else {
        return false;
    };
    (dxz - d / 2.0).abs() <= tol && (dzy - d / 2.0).abs() <= tol
}

#[derive(Debug, Clone)]
pub struct GeodesicSample<P> {
    pub t: f64,
    pub point: P,
}

/// `n + 1` equally spaced samples of the canonical geodesic.
pub fn sample_canonical_geodesic<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    n: usize,
) -> Result<Vec<GeodesicSample<C::Point>>> {
    let n = n.max(1);
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            Ok(GeodesicSample {
                t,
                point: canonical_geodesic(cone, x, y, t)?,
            })
        })
        .collect()
}
