//! Independent checks of a predicted midpoint span: deterministic
//! perturbations along and across the span, Monte-Carlo sampling of the
//! midpoint set with numerical rank estimation, and grid enumeration on
//! `R^n_+`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conegeom::{OrderUnitCone, StandardCone};
use crate::error::{Error, Result};
use crate::linalg;
use crate::midspan::{MidpointSpan, MidspanOptions, MidspanReport};
use crate::random::{gaussian_vector, stream_rng, unit_vector};
use crate::thompson::{distance, is_midpoint, is_midpoint_at, midpoint_tolerance};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-6;
/// Smallest perturbation size reachable by halving.
pub const EPSILON_FLOOR: f64 = 1e-6;
/// Acceptances needed before a sampled rank is compared with the prediction.
pub const MIN_ACCEPTED: usize = 50;
pub const MAX_GRID: usize = 41;
pub const MAX_BRUTE_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PassCount {
    pub passed: usize,
    pub total: usize,
}

impl PassCount {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl std::fmt::Display for PassCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.passed, self.total)
    }
}

/// Perturbation size `min(1e-2, gap / 10) * lambda_min(base)`.
///
/// A perturbation of order-unit size at most `s * lambda_min(base)` moves
/// `base` by at most `-log(1 - s)` in Thompson distance, so blocks that do not
/// attain the distance keep doing so.
pub fn default_epsilon<C: OrderUnitCone>(cone: &C, report: &MidspanReport<C::Point>) -> Result<f64> {
    let (lo, _) = cone.spectral_bounds(&report.base_point)?;
    let rel = match report.attainment_gap {
        Some(g) => (g / 10.0).min(1e-2),
        None => 1e-2,
    };
    Ok(rel * lo)
}

/// Perturbation size `1e-2 * lambda_min(base)` for the negative test.
///
/// Directions outside the predicted span leave the midpoint set for every
/// nonzero size, so the gap bound is not needed; along Peirce-1/2
/// directions the distances move only at second order, and a gap-limited
/// size can sink that change below the midpoint tolerance.
pub fn negative_epsilon<C: OrderUnitCone>(cone: &C, report: &MidspanReport<C::Point>) -> Result<f64> {
    let (lo, _) = cone.spectral_bounds(&report.base_point)?;
    Ok(1e-2 * lo)
}

/// Halves `eps` until `base +- eps * d` is interior for every direction.
fn interior_epsilon<C: OrderUnitCone>(
    cone: &C,
    base: &C::Point,
    directions: &[C::Point],
    mut eps: f64,
) -> Result<f64> {
    let (lo, _) = cone.spectral_bounds(base)?;
    let floor = EPSILON_FLOOR * lo.max(f64::MIN_POSITIVE);
    loop {
        let ok = directions.iter().all(|d| {
            [eps, -eps]
                .iter()
                .all(|s| cone.ensure_interior(&cone.combine(1.0, base, *s, d)).is_ok())
        });
        if ok {
            return Ok(eps);
        }
        eps /= 2.0;
        if eps < floor {
            return Err(Error::EpsilonFloor { floor });
        }
    }
}

fn resolve_tol<C: OrderUnitCone>(cone: &C, x: &C::Point, y: &C::Point, tol: Option<f64>) -> Result<f64> {
    match tol {
        Some(t) => Ok(t),
        None => Ok(midpoint_tolerance(distance(cone, x, y)?)),
    }
}

/// Every basis direction `b` must give midpoints `base +- eps b`.
/// Returns the pass count and the `eps` actually used.
pub fn verify_span_positive<C: OrderUnitCone>(
    cone: &C,
    report: &MidspanReport<C::Point>,
    x: &C::Point,
    y: &C::Point,
    eps: f64,
    tol: Option<f64>,
) -> Result<(PassCount, f64)> {
    if report.basis.is_empty() {
        return Ok((PassCount::default(), eps));
    }
    let tol = resolve_tol(cone, x, y, tol)?;
    let eps = interior_epsilon(cone, &report.base_point, &report.basis, eps)?;
    let passed = report
        .basis
        .iter()
        .filter(|b| {
            [eps, -eps].iter().all(|s| {
                let z = cone.combine(1.0, &report.base_point, *s, b);
                is_midpoint(cone, x, y, &z, Some(tol))
            })
        })
        .count();
    Ok((
        PassCount {
            passed,
            total: report.basis.len(),
        },
        eps,
    ))
}

/// Orthonormal basis of the orthogonal complement of the predicted span.
pub fn complement_directions<C: OrderUnitCone>(cone: &C, report: &MidspanReport<C::Point>) -> Vec<C::Point> {
    let span: Vec<Vec<f64>> = report.basis.iter().map(|b| cone.to_orthonormal(b)).collect();
    linalg::orthogonal_complement(&span, cone.ambient_dim())
        .iter()
        .map(|v| cone.from_orthonormal(v))
        .collect()
}

/// Every complement direction `w` must leave the midpoint set at
/// `base + s w` for each `s` in `{eps, -eps, eps/2, -eps/2}`.
pub fn verify_span_negative<C: OrderUnitCone>(
    cone: &C,
    report: &MidspanReport<C::Point>,
    x: &C::Point,
    y: &C::Point,
    eps: f64,
    tol: Option<f64>,
) -> Result<(PassCount, f64)> {
    let dirs = complement_directions(cone, report);
    if dirs.is_empty() {
        return Ok((PassCount::default(), eps));
    }
    let tol = resolve_tol(cone, x, y, tol)?;
    let eps = interior_epsilon(cone, &report.base_point, &dirs, eps)?;
    let passed = dirs
        .iter()
        .filter(|w| {
            [eps, -eps, eps / 2.0, -eps / 2.0].iter().all(|s| {
                let z = cone.combine(1.0, &report.base_point, *s, w);
                !is_midpoint(cone, x, y, &z, Some(tol))
            })
        })
        .count();
    Ok((
        PassCount {
            passed,
            total: dirs.len(),
        },
        eps,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    /// Number of proposals; proposal 0 is the base point itself.
    pub samples: usize,
    /// Proposal radius relative to `lambda_min(base)`.
    pub radius: f64,
    pub seed: u64,
    pub tol: Option<f64>,
    /// Share of proposals drawn along uniformly random ambient directions;
    /// the rest are drawn inside the predicted span.
    pub ambient_fraction: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            samples: 2000,
            radius: 1e-2,
            seed: 0,
            tol: None,
            ambient_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AcceptedSample<P> {
    pub index: usize,
    pub point: P,
    pub from_ambient: bool,
}

#[derive(Debug, Clone)]
pub struct SampleResult<P> {
    /// Accepted proposals in index order, starting with the base point.
    pub accepted: Vec<AcceptedSample<P>>,
    pub proposals: usize,
    /// Accepted proposals other than the base point.
    pub accepted_off_base: usize,
    /// Accepted proposals drawn along ambient directions.
    pub ambient_accepted: usize,
    /// Largest distance of an accepted point from the base.
    pub max_offset: f64,
    pub singular_values: Vec<f64>,
    pub estimated_dimension: usize,
}

/// Numerical rank of a family of vectors: singular values above
/// `RANK_TOL * sigma_1`.
pub fn numerical_rank(rows: &[Vec<f64>]) -> (usize, Vec<f64>) {
    if rows.is_empty() || rows[0].is_empty() {
        return (0, Vec::new());
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return (0, sv);
    }
    let rank = sv.iter().filter(|s| **s > RANK_TOL * top).count();
    (rank, sv)
}

/// Rejection sampling of midpoints around `report.base_point`.
///
/// Proposal `i > 0` is `base + r g` with `r` uniform in
/// `[radius/10, radius] * lambda_min(base)` and `g` a unit direction, either
/// uniform in the ambient space or uniform in the predicted span. Each
/// proposal draws from its own stream, so the result does not depend on
/// the thread count.
pub fn sample_midpoints<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    report: &MidspanReport<C::Point>,
    opts: &SampleOptions,
) -> Result<SampleResult<C::Point>> {
    let d = distance(cone, x, y)?;
    if d == 0.0 {
        return Err(Error::CoincidentPair);
    }
    let tol = opts.tol.unwrap_or_else(|| midpoint_tolerance(d));
    let base = &report.base_point;
    let (lo, _) = cone.spectral_bounds(base)?;
    let n = cone.ambient_dim();
    let span: Vec<Vec<f64>> = report.basis.iter().map(|b| cone.to_orthonormal(b)).collect();
    let base_coords = cone.to_orthonormal(base);

    let outcomes: Vec<Option<(C::Point, bool, Vec<f64>)>> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                let ok = is_midpoint_at(cone, x, y, base, d, tol);
                return ok.then(|| (base.clone(), false, vec![0.0; n]));
            }
            let mut rng = stream_rng(opts.seed, i as u64);
            let ambient = span.is_empty() || rand::Rng::random_bool(&mut rng, opts.ambient_fraction.clamp(0.0, 1.0));
            let dir = if ambient {
                unit_vector(&mut rng, n)
            } else {
                let c = gaussian_vector(&mut rng, span.len());
                let mut v = vec![0.0; n];
                for (ci, b) in c.iter().zip(&span) {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        *vj += ci * bj;
                    }
                }
                let nv = linalg::norm(&v);
                v.iter_mut().for_each(|a| *a /= nv);
                v
            };
            let r = rand::Rng::random_range(&mut rng, opts.radius / 10.0..=opts.radius) * lo;
            let offset: Vec<f64> = dir.iter().map(|a| r * a).collect();
            let coords: Vec<f64> = base_coords.iter().zip(&offset).map(|(b, o)| b + o).collect();
            let z = cone.from_orthonormal(&coords);
            if cone.ensure_interior(&z).is_err() {
                return None;
            }
            is_midpoint_at(cone, x, y, &z, d, tol).then_some((z, ambient, offset))
        })
        .collect();

    let mut accepted = Vec::new();
    let mut offsets = Vec::new();
    let mut ambient_accepted = 0;
    let mut max_offset = 0.0f64;
    for (index, out) in outcomes.into_iter().enumerate() {
        if let Some((point, from_ambient, offset)) = out {
            if from_ambient {
                ambient_accepted += 1;
            }
            max_offset = max_offset.max(linalg::norm(&offset));
            if index > 0 {
                offsets.push(offset);
            }
            accepted.push(AcceptedSample {
                index,
                point,
                from_ambient,
            });
        }
    }
    let (estimated_dimension, singular_values) = numerical_rank(&offsets);
    Ok(SampleResult {
        accepted_off_base: offsets.len(),
        accepted,
        proposals: opts.samples,
        ambient_accepted,
        max_offset,
        singular_values,
        estimated_dimension,
    })
}

/// Affine rank of the midpoints found on a grid of `points_per_axis`
/// points per coordinate, centred at the canonical midpoint with
/// half-width half of each coordinate.
pub fn brute_force_standard(
    cone: &StandardCone,
    x: &Vec<f64>,
    y: &Vec<f64>,
    points_per_axis: usize,
    tol: Option<f64>,
) -> Result<usize> {
    let n = cone.n();
    if n > MAX_BRUTE_DIM {
        return Err(Error::Limit(format!("brute force needs n <= {MAX_BRUTE_DIM}, got {n}")));
    }
    if !(2..=MAX_GRID).contains(&points_per_axis) {
        return Err(Error::Limit(format!(
            "grid needs 2..={MAX_GRID} points per axis, got {points_per_axis}"
        )));
    }
    let d = distance(cone, x, y)?;
    let tol = tol.unwrap_or_else(|| midpoint_tolerance(d));
    let center = crate::thompson::canonical_midpoint(cone, x, y)?;
    let g = points_per_axis;
    let axis = |i: usize, j: usize| {
        let s = 2.0 * j as f64 / (g - 1) as f64 - 1.0;
        center[i] + 0.5 * center[i] * s
    };
    let total = g.pow(n as u32);
    let kept: Vec<Vec<f64>> = (0..total)
        .filter_map(|mut idx| {
            let mut z = vec![0.0; n];
            for (i, zi) in z.iter_mut().enumerate() {
                *zi = axis(i, idx % g);
                idx /= g;
            }
            is_midpoint_at(cone, x, y, &z, d, tol).then_some(z)
        })
        .collect();
    let Some(first) = kept.first() else {
        return Err(Error::Invariant("grid contains no midpoint".into()));
    };
    let diffs: Vec<Vec<f64>> = kept[1..]
        .iter()
        .map(|z| z.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(numerical_rank(&diffs).0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationTolerances {
    pub midpoint_tol: f64,
    pub rank_tol: f64,
    pub epsilon_floor: f64,
    pub min_accepted: usize,
    pub sampling: SampleOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub positive: PassCount,
    pub negative: PassCount,
    pub predicted_dimension: usize,
    pub sampled_dimension: usize,
    pub accepted_samples: usize,
    pub ambient_accepted: usize,
    /// Size used by the positive test.
    pub epsilon_used: f64,
    /// Size used by the negative test.
    pub epsilon_negative: f64,
    pub tolerances: VerificationTolerances,
}

impl VerificationReport {
    /// Whether the sampled rank is informative.
    pub fn sampling_conclusive(&self) -> bool {
        self.accepted_samples >= self.tolerances.min_accepted
    }

    pub fn passed(&self) -> bool {
        self.positive.all_passed()
            && self.negative.all_passed()
            && self.sampled_dimension <= self.predicted_dimension
            && (!self.sampling_conclusive() || self.sampled_dimension == self.predicted_dimension)
    }
}

/// Runs the positive, negative and sampling oracles against `report`.
/// Pairs at distance zero skip sampling.
pub fn verify<C: OrderUnitCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    report: &MidspanReport<C::Point>,
    sampling: &SampleOptions,
) -> Result<VerificationReport> {
    let d = distance(cone, x, y)?;
    let midpoint_tol = sampling.tol.unwrap_or_else(|| midpoint_tolerance(d));
    let eps_pos0 = default_epsilon(cone, report)?;
    let eps_neg0 = negative_epsilon(cone, report)?;
    let (positive, eps_pos) = verify_span_positive(cone, report, x, y, eps_pos0, Some(midpoint_tol))?;
    let (negative, eps_neg) = verify_span_negative(cone, report, x, y, eps_neg0, Some(midpoint_tol))?;
    let (sampled_dimension, accepted_samples, ambient_accepted) = if d > 0.0 {
        let s = sample_midpoints(cone, x, y, report, sampling)?;
        (s.estimated_dimension, s.accepted_off_base, s.ambient_accepted)
    } else {
        (0, 0, 0)
    };
    Ok(VerificationReport {
        positive,
        negative,
        predicted_dimension: report.dimension,
        sampled_dimension,
        accepted_samples,
        ambient_accepted,
        epsilon_used: eps_pos,
        epsilon_negative: eps_neg,
        tolerances: VerificationTolerances {
            midpoint_tol,
            rank_tol: RANK_TOL,
            epsilon_floor: EPSILON_FLOOR,
            min_accepted: MIN_ACCEPTED,
            sampling: *sampling,
        },
    })
}

/// Computes the span and verifies it in one call.
pub fn analyze_and_verify<C: MidpointSpan>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    opts: &MidspanOptions,
    sampling: &SampleOptions,
) -> Result<(MidspanReport<C::Point>, VerificationReport)> {
    let report = cone.midpoint_span(x, y, opts)?;
    let v = verify(cone, x, y, &report, sampling)?;
    Ok((report, v))
}
