//! Seeded property suites over the algebra kernel, the metric, the span
//! computation and its oracles.
//!
//! Each suite runs a number of independent cases. Case `i` of a suite draws
//! from its own random stream, so outcomes do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conegeom::{
    boundary_point, two_dim_chart, ConeBackend, OrderUnitCone, StandardCone, SymmetricCone,
};
use crate::ejalg::{Algebra, AlgebraKind, Element};
use crate::error::Error;
use crate::linalg;
use crate::midspan::{closed_form_dimension, midspan_dimension, MidpointSpan, MidspanOptions};
use crate::oracle::{brute_force_standard, verify, SampleOptions};
use crate::random::{
    random_element, random_frame, random_interior, random_square, random_standard,
    spectrum_with_k, stream_rng, with_spectrum,
};
use crate::thompson::{canonical_geodesic, canonical_midpoint, distance, power_geodesic};

pub const DEFAULT_SEED: u64 = 20_170_605;
pub const DEFAULT_CASES: usize = 1000;
/// Cap on pairs for the sampling oracle suite.
pub const ORACLE_PAIRS: usize = 200;
/// Proposals per pair in the sampling oracle suite.
pub const ORACLE_SAMPLES: usize = 600;
/// Grid resolution of the exhaustive standard-cone suite.
pub const EXHAUSTIVE_GRID: usize = 41;

const LOG_SPREAD: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    pub cases: usize,
    pub backends: Vec<ConeBackend>,
}

impl SelftestConfig {
    pub fn default_backends() -> Vec<ConeBackend> {
        [
            "sym-real:3",
            "herm-complex:3",
            "spin:5",
            "direct-sum(sym-real:2,spin:3)",
            "standard:3",
        ]
        .iter()
        .map(|s| s.parse().expect("valid descriptor"))
        .collect()
    }
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: DEFAULT_SEED,
            cases: DEFAULT_CASES,
            backends: Self::default_backends(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub backend: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest residual observed, in the suite's own units.
    pub worst: f64,
    pub seconds: f64,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A failed case with its description.
#[derive(Debug)]
pub struct Fail(pub String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(e.to_string())
    }
}

type CaseResult = std::result::Result<f64, Fail>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

// FNV-1a, stable across toolchains
fn tag(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.bytes().chain(std::iter::once(0)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn run_cases<F>(suite: &str, backend: &str, cases: usize, seed: u64, f: F) -> SuiteOutcome
where
    F: Fn(&mut ChaCha8Rng) -> CaseResult + Sync,
{
    let start = Instant::now();
    let base = seed ^ tag(&[suite, backend]);
    let results: Vec<CaseResult> = (0..cases)
        .into_par_iter()
        .map(|i| f(&mut stream_rng(base, i as u64)))
        .collect();
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut first_failure = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => worst = worst.max(v),
            Err(Fail(msg)) => {
                failures += 1;
                first_failure.get_or_insert_with(|| format!("case {i}: {msg}"));
            }
        }
    }
    SuiteOutcome {
        suite: suite.to_string(),
        backend: backend.to_string(),
        cases,
        failures,
        worst,
        seconds: start.elapsed().as_secs_f64(),
        first_failure,
    }
}

/// Random generators and cone-specific maps needed by the generic suites.
trait TestCone: MidpointSpan {
    fn interior(&self, rng: &mut ChaCha8Rng) -> Result<Self::Point, Fail>;
    fn square(&self, rng: &mut ChaCha8Rng) -> Self::Point;
    /// Cone automorphism determined by an interior `w`.
    fn congruence(&self, w: &Self::Point, p: &Self::Point) -> Result<Self::Point, Fail>;
    fn power_path(&self, x: &Self::Point, y: &Self::Point, t: f64) -> Result<Self::Point, Fail>;
    fn rank(&self) -> usize;
    /// `x` with `x / y` (after congruence) having exactly `spectrum`.
    fn with_relative_spectrum(
        &self,
        y: &Self::Point,
        spectrum: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Result<Self::Point, Fail>;
    /// Closed-form dimension for a pair with `k` non-attaining values.
    fn expected_dimension(&self, k: usize) -> Option<usize>;
}

impl TestCone for SymmetricCone {
    fn interior(&self, rng: &mut ChaCha8Rng) -> Result<Element, Fail> {
        Ok(random_interior(self.algebra(), LOG_SPREAD, rng)?)
    }

    fn square(&self, rng: &mut ChaCha8Rng) -> Element {
        random_square(self.algebra(), rng)
    }

    fn congruence(&self, w: &Element, p: &Element) -> Result<Element, Fail> {
        Ok(w.quad(p)?)
    }

    fn power_path(&self, x: &Element, y: &Element, t: f64) -> Result<Element, Fail> {
        Ok(power_geodesic(x, y, t)?)
    }

    fn rank(&self) -> usize {
        self.algebra().rank()
    }

    fn with_relative_spectrum(
        &self,
        y: &Element,
        spectrum: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Result<Element, Fail> {
        let reduced = with_spectrum(self.algebra(), spectrum, rng)?;
        Ok(y.sqrt()?.quad(&reduced)?)
    }

    fn expected_dimension(&self, k: usize) -> Option<usize> {
        closed_form_dimension(self.algebra(), k)
    }
}

impl TestCone for StandardCone {
    fn interior(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>, Fail> {
        Ok(random_standard(self.n(), LOG_SPREAD, rng))
    }

    fn square(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        // include exact zeros to exercise faces
        (0..self.n())
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(0.0..3.0f64).powi(2)
                }
            })
            .collect()
    }

    fn congruence(&self, w: &Vec<f64>, p: &Vec<f64>) -> Result<Vec<f64>, Fail> {
        Ok(w.iter().zip(p).map(|(a, b)| a * a * b).collect())
    }

    fn power_path(&self, x: &Vec<f64>, y: &Vec<f64>, t: f64) -> Result<Vec<f64>, Fail> {
        Ok(x.iter().zip(y).map(|(a, b)| a.powf(1.0 - t) * b.powf(t)).collect())
    }

    fn rank(&self) -> usize {
        self.n()
    }

    fn with_relative_spectrum(
        &self,
        y: &Vec<f64>,
        spectrum: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<f64>, Fail> {
        let mut s = spectrum.to_vec();
        s.shuffle(rng);
        Ok(y.iter().zip(&s).map(|(a, b)| a * b).collect())
    }

    fn expected_dimension(&self, k: usize) -> Option<usize> {
        Some(k)
    }
}

/// A pair whose relative spectrum has exactly `k` non-attaining values
/// separated from the attaining ones by a log-gap of at least
/// `margin * log alpha`.
fn controlled_pair<C: TestCone>(
    cone: &C,
    rng: &mut ChaCha8Rng,
) -> Result<(C::Point, C::Point, usize), Fail> {
    let r = cone.rank();
    let k = if r > 1 { rng.random_range(0..r) } else { 0 };
    let alpha = rng.random_range(0.3f64..2.0).exp();
    let spectrum = spectrum_with_k(r, k, alpha, 0.2, rng);
    let y = cone.interior(rng)?;
    let x = cone.with_relative_spectrum(&y, &spectrum, rng)?;
    Ok((x, y, k))
}

fn generic_suites<C: TestCone>(cone: &C, backend: &str, cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    let n = cfg.cases;
    let seed = cfg.seed;
    let mut out = Vec::new();

    out.push(run_cases("metric-axioms", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        let z = cone.interior(rng)?;
        let dxy = distance(cone, &x, &y)?;
        let dyx = distance(cone, &y, &x)?;
        let dxz = distance(cone, &x, &z)?;
        let dyz = distance(cone, &y, &z)?;
        let dxx = distance(cone, &x, &x)?;
        let sym = (dxy - dyx).abs();
        ensure(sym <= 1e-10 * dxy.max(1.0), || format!("asymmetry {sym:e}"))?;
        ensure(dxy >= 0.0, || format!("negative distance {dxy}"))?;
        ensure(dxx <= 1e-10, || format!("d(x,x) = {dxx:e}"))?;
        let excess = dxz - dxy - dyz;
        ensure(excess <= 1e-10 * (dxy + dyz).max(1.0), || {
            format!("triangle inequality violated by {excess:e}")
        })?;
        Ok(sym.max(dxx).max(excess.max(0.0)))
    }));

    out.push(run_cases("isometry", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        let w = cone.interior(rng)?;
        let d = distance(cone, &x, &y)?;
        let dw = distance(cone, &cone.congruence(&w, &x)?, &cone.congruence(&w, &y)?)?;
        let err = (d - dw).abs();
        ensure(err <= 1e-9 * d.max(1.0), || format!("distance moved by {err:e}"))?;
        Ok(err)
    }));

    out.push(run_cases("norm-monotonicity", backend, n, seed, |rng| {
        let x = cone.square(rng);
        let y = cone.combine(1.0, &x, 1.0, &cone.square(rng));
        let nx = cone.order_unit_norm(&x)?;
        let ny = cone.order_unit_norm(&y)?;
        let excess = nx - ny;
        ensure(excess <= 1e-10 * ny.max(1.0), || {
            format!("|x|_u = {nx} exceeds |y|_u = {ny} with x <= y")
        })?;
        Ok(excess.max(0.0))
    }));

    out.push(run_cases("midpoint-identity", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        let m = canonical_midpoint(cone, &x, &y)?;
        let (mxy, myx) = cone.gauge_pair(&x, &y)?;
        let my = cone.gauge_ratio(&m, &y)?;
        let mx = cone.gauge_ratio(&m, &x)?;
        let e1 = (my * my - mxy).abs() / mxy;
        let e2 = (mx * mx - myx).abs() / myx;
        ensure(e1 <= 1e-8 && e2 <= 1e-8, || {
            format!("relative errors {e1:e}, {e2:e}")
        })?;
        Ok(e1.max(e2))
    }));

    out.push(run_cases("geodesic", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        let d = distance(cone, &x, &y)?;
        let mut s: f64 = rng.random();
        let mut t: f64 = rng.random();
        if s > t {
            std::mem::swap(&mut s, &mut t);
        }
        let mut worst = 0.0f64;
        for (name, gs, gt) in [
            ("canonical", canonical_geodesic(cone, &x, &y, s)?, canonical_geodesic(cone, &x, &y, t)?),
            ("power", cone.power_path(&x, &y, s)?, cone.power_path(&x, &y, t)?),
        ] {
            let err = (distance(cone, &gs, &gt)? - (t - s) * d).abs();
            ensure(err <= 1e-8, || format!("{name} geodesic off by {err:e}"))?;
            worst = worst.max(err);
        }
        Ok(worst)
    }));

    out.push(run_cases("boundary-point", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        if cone.gauge_ratio(&x, &y)? <= 1.0 + 1e-6 {
            return Ok(0.0);
        }
        let b = boundary_point(cone, &x, &y)?;
        let (lo, hi) = cone.spectral_bounds(&b)?;
        let scale = lo.abs().max(hi.abs()).max(1.0);
        ensure(lo.abs() <= 1e-9 * scale, || format!("min eigenvalue {lo:e} off the boundary"))?;
        // b - y must be parallel to y - x
        let dir = cone.to_orthonormal(&cone.combine(1.0, &y, -1.0, &x));
        let off = cone.to_orthonormal(&cone.combine(1.0, &b, -1.0, &y));
        let unit = linalg::orthonormalize(&[dir], 0.0);
        let rest = linalg::norm(&linalg::reject_from(&off, &unit));
        let bn = cone.norm(&b).max(1.0);
        ensure(rest <= 1e-9 * bn, || format!("off the line by {rest:e}"))?;
        Ok((lo.abs() / scale).max(rest / bn))
    }));

    out.push(run_cases("chart-isometry", backend, n, seed, |rng| {
        let x = cone.interior(rng)?;
        let y = cone.interior(rng)?;
        let chart = match two_dim_chart(cone, &x, &y) {
            Ok(c) => c,
            Err(Error::Proportional) => return Ok(0.0),
            Err(e) => return Err(e.into()),
        };
        let plane = StandardCone::new(2);
        let (a1, b1) = chart.x_coords;
        let mut pick = || {
            let a = a1 * rng.random_range(-1.0f64..1.0).exp();
            let b = b1 * rng.random_range(-1.0f64..1.0).exp();
            chart.point(cone, a, b)
        };
        let w = pick();
        let z = pick();
        let d = distance(cone, &w, &z)?;
        let (p, q) = (chart.coordinates(cone, &w), chart.coordinates(cone, &z));
        let d2 = distance(&plane, &vec![p.0, p.1], &vec![q.0, q.1])?;
        let err = (d - d2).abs();
        ensure(err <= 1e-9, || format!("chart distorts distance by {err:e}"))?;
        Ok(err)
    }));

    out.push(run_cases("closed-form-dimension", backend, n, seed, |rng| {
        let (x, y, k) = controlled_pair(cone, rng)?;
        let report = cone.midpoint_span(&x, &y, &MidspanOptions::default())?;
        ensure(report.k == k, || format!("constructed k = {k}, reported {}", report.k))?;
        let dim = midspan_dimension(cone, &x, &y, &MidspanOptions::default())?;
        if let Some(want) = cone.expected_dimension(k) {
            ensure(dim == want, || format!("dimension {dim}, closed form {want}"))?;
        }
        Ok(0.0)
    }));

    out.push(run_cases("midspan-covariance", backend, n, seed, |rng| {
        let (x, y, _) = controlled_pair(cone, rng)?;
        let w = cone.interior(rng)?;
        let o = MidspanOptions::default();
        let d = midspan_dimension(cone, &x, &y, &o)?;
        let swapped = midspan_dimension(cone, &y, &x, &o)?;
        let moved = midspan_dimension(cone, &cone.congruence(&w, &x)?, &cone.congruence(&w, &y)?, &o)?;
        ensure(d == swapped && d == moved, || {
            format!("dimensions {d}, swapped {swapped}, congruent {moved}")
        })?;
        Ok(0.0)
    }));

    let pairs = n.min(ORACLE_PAIRS);
    out.push(run_cases("oracle-agreement", backend, pairs, seed, |rng| {
        let (x, y, _) = controlled_pair(cone, rng)?;
        let report = cone.midpoint_span(&x, &y, &MidspanOptions::default())?;
        let sampling = SampleOptions {
            samples: ORACLE_SAMPLES,
            seed: rng.random(),
            ..SampleOptions::default()
        };
        let v = verify(cone, &x, &y, &report, &sampling)?;
        ensure(v.passed(), || {
            format!(
                "positive {}, negative {}, sampled {} of predicted {} ({} accepted)",
                v.positive, v.negative, v.sampled_dimension, v.predicted_dimension, v.accepted_samples
            )
        })?;
        Ok(0.0)
    }));

    out
}

fn algebra_suites(cone: &SymmetricCone, backend: &str, cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    let n = cfg.cases;
    let seed = cfg.seed;
    let alg = cone.algebra();
    let mut out = Vec::new();

    out.push(run_cases("jordan-identity", backend, n, seed, |rng| {
        let x = random_element(alg, rng);
        let y = random_element(alg, rng);
        let x2 = x.square();
        let lhs = x.jordan(&x2.jordan(&y)?)?;
        let rhs = x2.jordan(&x.jordan(&y)?)?;
        let scale = (x.norm().powi(3) * y.norm()).max(1.0);
        let err = lhs.distance_to(&rhs) / scale;
        let comm = x.jordan(&y)?.distance_to(&y.jordan(&x)?) / (x.norm() * y.norm()).max(1.0);
        ensure(err <= 1e-10 && comm <= 1e-12, || {
            format!("Jordan identity residual {err:e}, commutator {comm:e}")
        })?;
        Ok(err.max(comm))
    }));

    out.push(run_cases("self-adjointness", backend, n, seed, |rng| {
        let x = random_element(alg, rng);
        let y = random_element(alg, rng);
        let z = random_element(alg, rng);
        let a = x.jordan(&y)?.inner(&z)?;
        let b = y.inner(&x.jordan(&z)?)?;
        let err = (a - b).abs() / (x.norm() * y.norm() * z.norm()).max(1.0);
        ensure(err <= 1e-10, || format!("<x.y, z> - <y, x.z> = {err:e}"))?;
        Ok(err)
    }));

    out.push(run_cases("orthogonality-equivalence", backend, n, seed, |rng| {
        let r = alg.rank();
        let mut worst = 0.0f64;
        if r >= 2 {
            let frame = random_frame(alg, rng)?;
            let split = rng.random_range(1..r);
            let mut a = Element::zeros(alg);
            let mut b = Element::zeros(alg);
            for (i, c) in frame.iter().enumerate() {
                let w = rng.random_range(0.1..3.0);
                if i < split {
                    a.axpy(w, c);
                } else {
                    b.axpy(w, c);
                }
            }
            let scale = a.norm() * b.norm();
            let ip = a.inner(&b)?.abs() / scale;
            let prod = a.jordan(&b)?.norm() / scale;
            ensure(ip <= 1e-10 && prod <= 1e-10, || {
                format!("disjoint blocks: <a,b> = {ip:e}, |a.b| = {prod:e}")
            })?;
            worst = ip.max(prod);
        }
        // <a, b> = <a.b, e> bounds the product from below
        let a = random_square(alg, rng);
        let b = random_square(alg, rng);
        let ip = a.inner(&b)?;
        if ip > 1e-10 * a.norm() * b.norm() {
            let prod = a.jordan(&b)?.norm();
            let e = Element::unit(alg);
            ensure(prod * e.norm() >= ip * (1.0 - 1e-10), || {
                format!("|a.b| |e| = {} < <a,b> = {ip}", prod * e.norm())
            })?;
        }
        Ok(worst)
    }));

    out.push(run_cases("spectral-reconstruction", backend, n, seed, |rng| {
        let x = random_element(alg, rng);
        let frame = x.jordan_frame()?;
        let scale = x.norm().max(1.0);
        let rec = frame.reconstruct().distance_to(&x) / scale;
        let mut worst = rec;
        let mut sum = Element::zeros(alg);
        for (i, c) in frame.primitives.iter().enumerate() {
            worst = worst.max(c.idempotent_residual());
            for d in &frame.primitives[i + 1..] {
                worst = worst.max(c.jordan(d)?.norm());
            }
            sum.axpy(1.0, c);
        }
        worst = worst.max(sum.distance_to(&Element::unit(alg)));
        let grouped = x.spectral()?;
        let total: usize = grouped.multiplicities.iter().sum();
        ensure(total == alg.rank(), || format!("multiplicities sum to {total}"))?;
        worst = worst.max(grouped.reconstruct().distance_to(&x) / scale);
        ensure(worst <= 1e-10, || format!("frame residual {worst:e}"))?;
        Ok(worst)
    }));

    out.push(run_cases("quad-automorphism", backend, n, seed, |rng| {
        let x = random_interior(alg, LOG_SPREAD, rng)?;
        let z = random_square(alg, rng);
        let pz = x.quad(&z)?;
        let (lo, hi) = pz.spectral_bounds()?;
        let scale = hi.abs().max(1.0);
        ensure(lo >= -1e-10 * scale, || format!("P(x) z has eigenvalue {lo:e}"))?;
        let back = x.inverse()?.quad(&pz)?;
        let err = back.distance_to(&z) / z.norm().max(1.0);
        ensure(err <= 1e-9, || format!("P(x^-1) P(x) z - z = {err:e}"))?;
        Ok(err.max((-lo / scale).max(0.0)))
    }));

    out.push(run_cases("peirce-dimension", backend, n, seed, |rng| {
        let frame = random_frame(alg, rng)?;
        let r = frame.len();
        let j = rng.random_range(1..=r);
        let mut pick: Vec<usize> = (0..r).collect();
        pick.shuffle(rng);
        let mut c = Element::zeros(alg);
        for &i in &pick[..j] {
            c.axpy(1.0, &frame[i]);
        }
        let got = c.peirce_zero_basis()?.len();
        // per summand: (r_s - j_s) + d_s (r_s - j_s)(r_s - j_s - 1) / 2
        let parts = c.summands();
        let want: usize = parts
            .iter()
            .map(|p| {
                let sub = p.algebra();
                let ones = p.eigenvalues().map(|ev| ev.iter().filter(|l| **l > 0.5).count());
                let k = sub.rank() - ones.unwrap_or(0);
                let d = sub.peirce_d().unwrap_or(0);
                k + d * k * k.saturating_sub(1) / 2
            })
            .sum();
        ensure(got == want, || format!("dim V(c,0) = {got}, expected {want} for j = {j}"))?;
        Ok(0.0)
    }));

    out
}

fn dual_route_suite(cone: &StandardCone, backend: &str, cfg: &SelftestConfig) -> SuiteOutcome {
    let n = cone.n();
    let kind = AlgebraKind::direct_sum(vec![AlgebraKind::sym_real(1); n]);
    let alg = Algebra::new(kind).expect("valid direct sum");
    let eja = SymmetricCone::new(Arc::clone(&alg));
    run_cases("standard-dual-route", backend, cfg.cases, cfg.seed, |rng| {
        let (x, y, _) = controlled_pair(cone, rng)?;
        let o = MidspanOptions::default();
        let a = cone.midpoint_span(&x, &y, &o)?;
        let xe = Element::diagonal(&alg, &x)?;
        let ye = Element::diagonal(&alg, &y)?;
        let b = eja.midpoint_span(&xe, &ye, &o)?;
        ensure(a.dimension == b.dimension, || {
            format!("face route {} vs Peirce route {}", a.dimension, b.dimension)
        })?;
        let err = a
            .base_point
            .iter()
            .zip(b.base_point.coords())
            .map(|(p, q)| (p - q).abs() / p)
            .fold(0.0, f64::max);
        ensure(err <= 1e-10, || format!("base points differ by {err:e}"))?;
        Ok(err)
    })
}

/// Outcome of the exhaustive grid comparison on small integer pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ExhaustiveOutcome {
    pub n: usize,
    pub pairs: usize,
    /// Distinct pairs up to permutation and rescaling of coordinates.
    pub classes: usize,
    pub tie_pairs: usize,
    pub mismatches: Vec<String>,
}

/// Compares the predicted dimension with grid enumeration for every pair
/// `x, y` in `{1, ..., max_value}^n`.
///
/// The grid oracle runs once per class of pairs equal up to a permutation
/// and a positive rescaling of coordinates (both automorphisms of the cone),
/// on the first pair met in that class.
pub fn exhaustive_standard(n: usize, max_value: u32, grid: usize) -> ExhaustiveOutcome {
    let cone = StandardCone::new(n);
    let values: Vec<f64> = (1..=max_value).map(f64::from).collect();
    let count = values.len().pow(n as u32);
    let point = |mut idx: usize| -> Vec<f64> {
        (0..n)
            .map(|_| {
                let v = values[idx % values.len()];
                idx /= values.len();
                v
            })
            .collect()
    };
    let key = |x: &[f64], y: &[f64]| -> Vec<(u32, u32)> {
        let mut k: Vec<(u32, u32)> = x
            .iter()
            .zip(y)
            .map(|(a, b)| {
                let (p, q) = (*a as u32, *b as u32);
                let g = gcd(p, q);
                (p / g, q / g)
            })
            .collect();
        k.sort_by(|a, b| (a.0 as u64 * b.1 as u64).cmp(&(b.0 as u64 * a.1 as u64)));
        k
    };
    let mut classes: BTreeMap<Vec<(u32, u32)>, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut pairs = Vec::with_capacity(count * count);
    for i in 0..count {
        for j in 0..count {
            let (x, y) = (point(i), point(j));
            let k = key(&x, &y);
            classes.entry(k.clone()).or_insert_with(|| (x.clone(), y.clone()));
            pairs.push((x, y, k));
        }
    }
    let reps: Vec<(Vec<(u32, u32)>, (Vec<f64>, Vec<f64>))> = classes.into_iter().collect();
    let brute: BTreeMap<Vec<(u32, u32)>, Result<usize, String>> = reps
        .par_iter()
        .map(|(k, (x, y))| {
            (
                k.clone(),
                brute_force_standard(&cone, x, y, grid, None).map_err(|e| e.to_string()),
            )
        })
        .collect();
    let o = MidspanOptions::default();
    let mut mismatches = Vec::new();
    let mut tie_pairs = 0;
    for (x, y, k) in &pairs {
        let (m1, m2) = cone.gauge_pair(x, y).expect("integer points are interior");
        if (m1 - m2).abs() <= o.tie_tol * m1.max(m2) && m1 > 1.0 {
            tie_pairs += 1;
        }
        let predicted = midspan_dimension(&cone, x, y, &o);
        match (&predicted, &brute[k]) {
            (Ok(p), Ok(b)) if p == b => {}
            _ => mismatches.push(format!(
                "x = {x:?}, y = {y:?}: predicted {predicted:?}, grid {:?}",
                brute[k]
            )),
        }
    }
    ExhaustiveOutcome {
        n,
        pairs: pairs.len(),
        classes: reps.len(),
        tie_pairs,
        mismatches,
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn exhaustive_suite(backend: &str) -> SuiteOutcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = 0;
    let mut first_failure = None;
    for n in [2, 3] {
        let r = exhaustive_standard(n, 4, EXHAUSTIVE_GRID);
        cases += r.pairs;
        failures += r.mismatches.len();
        if r.tie_pairs == 0 {
            failures += 1;
        }
        if first_failure.is_none() {
            first_failure = r.mismatches.first().cloned();
        }
    }
    SuiteOutcome {
        suite: "standard-brute-force".into(),
        backend: backend.to_string(),
        cases,
        failures,
        worst: 0.0,
        seconds: start.elapsed().as_secs_f64(),
        first_failure,
    }
}

/// Runs every suite applicable to each configured backend.
pub fn run(cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    let mut out = Vec::new();
    let mut brute_done = false;
    for backend in &cfg.backends {
        let label = backend.to_string();
        match backend {
            ConeBackend::Eja(kind) => match Algebra::new(kind.clone()) {
                Ok(alg) => {
                    let cone = SymmetricCone::new(alg);
                    out.extend(algebra_suites(&cone, &label, cfg));
                    out.extend(generic_suites(&cone, &label, cfg));
                }
                Err(e) => out.push(SuiteOutcome {
                    suite: "construct".into(),
                    backend: label,
                    cases: 1,
                    failures: 1,
                    worst: 0.0,
                    seconds: 0.0,
                    first_failure: Some(e.to_string()),
                }),
            },
            ConeBackend::Standard(n) => {
                let cone = StandardCone::new(*n);
                out.extend(generic_suites(&cone, &label, cfg));
                out.push(dual_route_suite(&cone, &label, cfg));
                if !brute_done {
                    out.push(exhaustive_suite("standard:2,3"));
                    brute_done = true;
                }
            }
        }
    }
    out
}

/// Plain-text summary table, one row per suite and backend.
pub fn render_table(outcomes: &[SuiteOutcome]) -> String {
    let w_suite = outcomes.iter().map(|o| o.suite.len()).max().unwrap_or(5).max(5);
    let w_backend = outcomes.iter().map(|o| o.backend.len()).max().unwrap_or(7).max(7);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<w_suite$}  {:<w_backend$}  {:>6}  {:>8}  {:>10}  {:>8}  status",
        "suite", "backend", "cases", "failures", "worst", "seconds"
    );
    for o in outcomes {
        let _ = writeln!(
            s,
            "{:<w_suite$}  {:<w_backend$}  {:>6}  {:>8}  {:>10.3e}  {:>8.2}  {}",
            o.suite,
            o.backend,
            o.cases,
            o.failures,
            o.worst,
            o.seconds,
            if o.passed() { "ok" } else { "FAIL" }
        );
    }
    let failed: Vec<&SuiteOutcome> = outcomes.iter().filter(|o| !o.passed()).collect();
    let _ = writeln!(
        s,
        "{} suites, {} failed",
        outcomes.len(),
        failed.len()
    );
    for o in failed {
        if let Some(msg) = &o.first_failure {
            let _ = writeln!(s, "  {} [{}]: {msg}", o.suite, o.backend);
        }
    }
    s
}
