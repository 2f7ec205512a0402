//! The four subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use conemid::conegeom::{ConeBackend, OrderUnitCone, StandardCone, SymmetricCone};
use conemid::midspan::{MidpointSpan, MidspanOptions, MidspanReport, DEFAULT_TIE_TOL};
use conemid::oracle::{self, complement_directions, SampleOptions, VerificationReport};
use conemid::selftest::{self, SelftestConfig};
use conemid::{thompson, Element};

use crate::error::CliError;
use crate::problem::{self, Pair, Problem};
use crate::report::{
    to_json, AttainmentRecord, Distances, FaceRecord, Flags, PointRecord, ReportFile, ResolvedConfig,
    SpanRecord, ToolInfo, VerificationSummary,
};

pub const SEED_ENV: &str = "CONEMID_SEED";
pub const DEFAULT_SAMPLES: usize = 2000;
pub const DEFAULT_RADIUS: f64 = 1e-2;

/// Command-line overrides; unset values fall back to the problem file,
/// then to `CONEMID_SEED` for the seed, then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct RunFlags {
    pub tol: Option<f64>,
    pub tie_tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub radius: Option<f64>,
    pub backend_check: bool,
    pub inject_fault: bool,
    pub verify: bool,
}

pub fn resolve_config(problem: &Problem, flags: &RunFlags) -> Result<ResolvedConfig, CliError> {
    let o = &problem.options;
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Parse(format!("{SEED_ENV}={s:?}: {e}")))?,
        ),
        Err(_) => None,
    };
    let cfg = ResolvedConfig {
        backend: problem.backend.to_string(),
        tol: flags.tol.or(o.tol),
        tie_tol: flags.tie_tol.or(o.tie_tol).unwrap_or(DEFAULT_TIE_TOL),
        group_tol: MidspanOptions::default().group_tol,
        seed: flags.seed.or(o.seed).or(env_seed).unwrap_or(0),
        samples: flags.samples.or(o.samples).unwrap_or(DEFAULT_SAMPLES),
        radius: flags.radius.or(o.radius).unwrap_or(DEFAULT_RADIUS),
        ambient_fraction: SampleOptions::default().ambient_fraction,
        backend_check: flags.backend_check,
        verify: flags.verify,
    };
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if let Some(t) = cfg.tol {
        if !positive(t) {
            return Err(CliError::Parse(format!("tol must be positive, got {t}")));
        }
    }
    if !(positive(cfg.tie_tol) && cfg.tie_tol < 0.5) {
        return Err(CliError::Parse(format!("tie-tol must lie in (0, 0.5), got {}", cfg.tie_tol)));
    }
    if !(positive(cfg.radius) && cfg.radius < 1.0) {
        return Err(CliError::Parse(format!("radius must lie in (0, 1), got {}", cfg.radius)));
    }
    if cfg.samples == 0 {
        return Err(CliError::Parse("samples must be at least 1".into()));
    }
    Ok(cfg)
}

fn midspan_options(cfg: &ResolvedConfig) -> MidspanOptions {
    MidspanOptions {
        tie_tol: cfg.tie_tol,
        group_tol: cfg.group_tol,
    }
}

fn sample_options(cfg: &ResolvedConfig) -> SampleOptions {
    SampleOptions {
        samples: cfg.samples,
        radius: cfg.radius,
        seed: cfg.seed,
        tol: cfg.tol,
        ambient_fraction: cfg.ambient_fraction,
    }
}

/// Cone-specific pieces of a report.
trait CliCone: MidpointSpan {
    fn record(&self, p: &Self::Point) -> PointRecord;
    fn geometric_mean(&self, x: &Self::Point, y: &Self::Point) -> conemid::Result<Self::Point>;
    fn delta2(&self, x: &Self::Point, y: &Self::Point) -> conemid::Result<f64>;
    fn attainment(
        &self,
        x: &Self::Point,
        y: &Self::Point,
        report: &MidspanReport<Self::Point>,
        cfg: &ResolvedConfig,
    ) -> conemid::Result<AttainmentRecord>;
}

impl CliCone for SymmetricCone {
    fn record(&self, p: &Element) -> PointRecord {
        PointRecord::from_element(p)
    }

    fn geometric_mean(&self, x: &Element, y: &Element) -> conemid::Result<Element> {
        thompson::geometric_mean(x, y)
    }

    fn delta2(&self, x: &Element, y: &Element) -> conemid::Result<f64> {
        thompson::delta2(x, y)
    }

    fn attainment(
        &self,
        x: &Element,
        y: &Element,
        report: &MidspanReport<Element>,
        cfg: &ResolvedConfig,
    ) -> conemid::Result<AttainmentRecord> {
        if let Some(a) = &report.attainment {
            return Ok(AttainmentRecord {
                eigenvalues: a.spectral.eigenvalues.clone(),
                multiplicities: a.spectral.multiplicities.clone(),
                attaining: a.attaining.clone(),
                c: Some(PointRecord::from_element(&a.c)),
                k: a.k,
                gap: a.gap,
            });
        }
        let s = self.relative_position(x, y)?.spectral_decompose(cfg.group_tol)?;
        Ok(AttainmentRecord {
            attaining: (0..s.eigenvalues.len()).collect(),
            eigenvalues: s.eigenvalues,
            multiplicities: s.multiplicities,
            c: Some(PointRecord::from_element(&Element::unit(self.algebra()))),
            k: 0,
            gap: None,
        })
    }
}

impl CliCone for StandardCone {
    fn record(&self, p: &Vec<f64>) -> PointRecord {
        PointRecord::from_vec(p)
    }

    fn geometric_mean(&self, x: &Vec<f64>, y: &Vec<f64>) -> conemid::Result<Vec<f64>> {
        Ok(x.iter().zip(y).map(|(a, b)| (a * b).sqrt()).collect())
    }

    fn delta2(&self, x: &Vec<f64>, y: &Vec<f64>) -> conemid::Result<f64> {
        Ok(x.iter().zip(y).map(|(a, b)| (a / b).ln().powi(2)).sum::<f64>().sqrt())
    }

    fn attainment(
        &self,
        x: &Vec<f64>,
        y: &Vec<f64>,
        report: &MidspanReport<Vec<f64>>,
        cfg: &ResolvedConfig,
    ) -> conemid::Result<AttainmentRecord> {
        let ratios: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / b).collect();
        let spread: Vec<f64> = ratios.iter().map(|r| r.max(1.0 / r)).collect();
        let target = spread.iter().copied().fold(1.0, f64::max);
        let attaining: Vec<usize> = (0..ratios.len())
            .filter(|&i| spread[i] >= (1.0 - cfg.tie_tol) * target)
            .collect();
        let mut c = vec![0.0; ratios.len()];
        for &i in &attaining {
            c[i] = 1.0;
        }
        Ok(AttainmentRecord {
            multiplicities: vec![1; ratios.len()],
            eigenvalues: ratios,
            attaining,
            c: Some(PointRecord::from_vec(&c)),
            k: report.k,
            gap: report.attainment_gap,
        })
    }
}

fn check_backend<P>(report: &MidspanReport<P>) -> Result<(), CliError> {
    if let Some(f) = report.formula_dimension {
        if f != report.dimension {
            return Err(CliError::Internal(format!(
                "Peirce basis has dimension {} but the closed form gives {f}",
                report.dimension
            )));
        }
    }
    if report.faces.is_some() && report.k != report.dimension {
        return Err(CliError::Internal(format!(
            "face supports give dimension {} but {} coordinates fail to attain",
            report.dimension, report.k
        )));
    }
    Ok(())
}

/// Replaces one predicted direction by a direction outside the span, or
/// adds one when the span is a point.
fn corrupt<C: OrderUnitCone>(cone: &C, report: &mut MidspanReport<C::Point>) {
    let Some(w) = complement_directions(cone, report).into_iter().next() else {
        report.basis.pop();
        report.dimension = report.basis.len();
        return;
    };
    report.basis.pop();
    report.basis.push(w);
    report.dimension = report.basis.len();
}

struct Analysis<P> {
    report: MidspanReport<P>,
    verification: Option<VerificationReport>,
}

fn analyse<C: CliCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    cfg: &ResolvedConfig,
    inject_fault: bool,
) -> Result<Analysis<C::Point>, CliError> {
    cone.ensure_interior(x).map_err(|e| CliError::Validation(format!("x: {e}")))?;
    cone.ensure_interior(y).map_err(|e| CliError::Validation(format!("y: {e}")))?;
    let mut report = cone.midpoint_span(x, y, &midspan_options(cfg))?;
    if cfg.backend_check {
        check_backend(&report)?;
    }
    if inject_fault {
        corrupt(cone, &mut report);
    }
    let verification = if cfg.verify {
        Some(oracle::verify(cone, x, y, &report, &sample_options(cfg))?)
    } else {
        None
    };
    Ok(Analysis { report, verification })
}

fn build_report<C: CliCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    cfg: &ResolvedConfig,
    analysis: Analysis<C::Point>,
    warnings: Vec<String>,
) -> Result<ReportFile, CliError> {
    let (m_xy, m_yx) = cone.gauge_pair(x, y)?;
    let report = analysis.report;
    let faces = report.faces.as_ref().map(|f| FaceRecord {
        case: f.case,
        y_support: f.y_support.as_ref().map(|s| s.iter().copied().collect()),
        x_support: f.x_support.as_ref().map(|s| s.iter().copied().collect()),
        directions: f.directions.iter().copied().collect(),
    });
    let canonical = thompson::canonical_midpoint(cone, x, y)?;
    Ok(ReportFile {
        tool: ToolInfo::current(),
        config: cfg.clone(),
        x: cone.record(x),
        y: cone.record(y),
        distances: Distances {
            thompson: thompson::distance(cone, x, y)?,
            delta2: cone.delta2(x, y)?,
            m_xy,
            m_yx,
        },
        geometric_mean: cone.record(&cone.geometric_mean(x, y)?),
        canonical_midpoint: cone.record(&canonical),
        attainment: cone.attainment(x, y, &report, cfg)?,
        span: SpanRecord {
            dimension: report.dimension,
            formula_dimension: report.formula_dimension,
            base_point: cone.record(&report.base_point),
            basis: report.basis.iter().map(|b| cone.record(b)).collect(),
            faces,
        },
        flags: Flags {
            coincident: report.distance == 0.0,
            proportional: report.proportional,
            near_tie: report.near_tie,
            singleton: report.dimension == 0,
        },
        verification: analysis.verification.map(VerificationSummary::new),
        warnings,
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    to_json(value).map_err(|e| CliError::Internal(format!("serialising report: {e}")))
}

/// Full analysis of a problem file.
pub fn analyze_problem(problem: &Problem, flags: &RunFlags) -> Result<ReportFile, CliError> {
    let cfg = resolve_config(problem, flags)?;
    let warnings = problem.warnings.clone();
    match &problem.pair {
        Pair::Standard { cone, x, y } => {
            let a = analyse(cone, x, y, &cfg, flags.inject_fault)?;
            build_report(cone, x, y, &cfg, a, warnings)
        }
        Pair::Eja { cone, x, y } => {
            let a = analyse(cone, x, y, &cfg, flags.inject_fault)?;
            build_report(cone, x, y, &cfg, a, warnings)
        }
    }
}

pub fn run_analyze(input: &Path, output: Option<&Path>, flags: &RunFlags) -> Result<(), CliError> {
    let problem = problem::load(input)?;
    print_warnings(&problem.warnings);
    let report = analyze_problem(&problem, flags)?;
    if let Some(v) = &report.verification {
        if !v.passed {
            eprintln!("warning: verification did not confirm the predicted span");
        }
    }
    write_text(output, &json(&report)?)
}

/// Verification of the predicted span of a problem file.
pub fn verify_problem(problem: &Problem, flags: &RunFlags) -> Result<VerificationReport, CliError> {
    let flags = RunFlags {
        verify: true,
        ..flags.clone()
    };
    let cfg = resolve_config(problem, &flags)?;
    let v = match &problem.pair {
        Pair::Standard { cone, x, y } => analyse(cone, x, y, &cfg, flags.inject_fault)?.verification,
        Pair::Eja { cone, x, y } => analyse(cone, x, y, &cfg, flags.inject_fault)?.verification,
    };
    v.ok_or_else(|| CliError::Internal("verification did not run".into()))
}

pub fn run_verify(input: &Path, output: Option<&Path>, flags: &RunFlags) -> Result<(), CliError> {
    let problem = problem::load(input)?;
    print_warnings(&problem.warnings);
    let v = verify_problem(&problem, flags)?;
    write_text(output, &json(&v)?)?;
    if v.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "positive {}, negative {}, sampled dimension {} vs predicted {}",
            v.positive, v.negative, v.sampled_dimension, v.predicted_dimension
        )))
    }
}

/// One CSV row per accepted sample: coordinates of `z - base` along the
/// first two span directions.
pub fn sample_rows(problem: &Problem, flags: &RunFlags) -> Result<Vec<[f64; 2]>, CliError> {
    let flags = RunFlags {
        verify: false,
        ..flags.clone()
    };
    let cfg = resolve_config(problem, &flags)?;
    match &problem.pair {
        Pair::Standard { cone, x, y } => rows_on(cone, x, y, &cfg, flags.inject_fault),
        Pair::Eja { cone, x, y } => rows_on(cone, x, y, &cfg, flags.inject_fault),
    }
}

fn rows_on<C: CliCone>(
    cone: &C,
    x: &C::Point,
    y: &C::Point,
    cfg: &ResolvedConfig,
    inject_fault: bool,
) -> Result<Vec<[f64; 2]>, CliError> {
    let report = analyse(cone, x, y, cfg, inject_fault)?.report;
    if report.distance == 0.0 {
        return Ok(vec![[0.0, 0.0]]);
    }
    let s = oracle::sample_midpoints(cone, x, y, &report, &sample_options(cfg))?;
    let axes: Vec<Vec<f64>> = report.basis.iter().take(2).map(|b| cone.to_orthonormal(b)).collect();
    Ok(s.accepted
        .iter()
        .map(|a| {
            let off = cone.to_orthonormal(&cone.combine(1.0, &a.point, -1.0, &report.base_point));
            let mut t = [0.0; 2];
            for (tj, axis) in t.iter_mut().zip(&axes) {
                *tj = off.iter().zip(axis).map(|(p, q)| p * q).sum();
            }
            t
        })
        .collect())
}

pub fn run_samples(input: &Path, csv_path: &Path, flags: &RunFlags) -> Result<(), CliError> {
    let problem = problem::load(input)?;
    print_warnings(&problem.warnings);
    let rows = sample_rows(&problem, flags)?;
    let write_err = |e: csv::Error| CliError::Write {
        path: csv_path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    };
    let mut w = csv::Writer::from_path(csv_path).map_err(write_err)?;
    w.write_record(["t1", "t2", "accepted"]).map_err(write_err)?;
    for [t1, t2] in rows {
        w.write_record([format!("{t1:.16e}"), format!("{t2:.16e}"), "1".into()])
            .map_err(write_err)?;
    }
    w.flush().map_err(|source| CliError::Write {
        path: csv_path.to_path_buf(),
        source,
    })
}

/// Runs the property suites and prints the summary table.
pub fn run_selftest(seed: Option<u64>, pairs: Option<usize>, backends: &[String]) -> Result<(), CliError> {
    let mut cfg = SelftestConfig::default();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(p) = pairs {
        if p == 0 {
            return Err(CliError::Parse("pairs must be at least 1".into()));
        }
        cfg.cases = p;
    }
    if !backends.is_empty() {
        cfg.backends = backends
            .iter()
            .map(|b| b.parse::<ConeBackend>().map_err(|e| CliError::Parse(format!("{b}: {e}"))))
            .collect::<Result<_, _>>()?;
    }
    let outcomes = selftest::run(&cfg);
    print!("{}", selftest::render_table(&outcomes));
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Internal(format!("{failed} selftest suites failed")))
    }
}
