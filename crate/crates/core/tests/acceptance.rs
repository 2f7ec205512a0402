//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use conemid::conegeom::{m_ratio, StandardCone, SymmetricCone};
use conemid::midspan::{MidpointSpan, MidspanOptions, DEFAULT_TIE_TOL};
use conemid::oracle::{self, brute_force_standard, sample_midpoints, SampleOptions, MIN_ACCEPTED};
use conemid::random::{random_interior, random_standard, spectrum_with_k, stream_rng, with_spectrum};
use conemid::selftest::{self, exhaustive_standard, SelftestConfig};
use conemid::thompson::{canonical_midpoint, distance, geometric_mean, is_midpoint};
use conemid::{Algebra, AlgebraKind, Element};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

const SEED: u64 = 0x5EED_2017;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn alg(s: &str) -> Arc<Algebra> {
    Algebra::new(s.parse::<AlgebraKind>().unwrap()).unwrap()
}

/// `x = P(y^{1/2}) x~`, so that `P(y^{-1/2}) x = x~`.
fn lift(y: &Element, reduced: &Element) -> Element {
    y.sqrt().unwrap().quad(reduced).unwrap()
}

/// Pair with relative spectrum `spectrum` over a random frame and base.
fn eja_pair<R: Rng>(a: &Arc<Algebra>, spectrum: &[f64], rng: &mut R) -> (Element, Element) {
    let y = random_interior(a, 1.0, rng).unwrap();
    let reduced = with_spectrum(a, spectrum, rng).unwrap();
    (lift(&y, &reduced), y)
}

fn standard_pair<R: Rng>(n: usize, spectrum: &[f64], rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let y = random_standard(n, 1.0, rng);
    let mut s = spectrum.to_vec();
    s.shuffle(rng);
    (y.iter().zip(&s).map(|(a, b)| a * b).collect(), y)
}

/// Random spectrum with a random number `k` of non-attaining values.
fn controlled_spectrum<R: Rng>(rank: usize, rng: &mut R) -> (Vec<f64>, usize) {
    let k = if rank > 1 { rng.random_range(0..rank) } else { 0 };
    let alpha = rng.random_range(0.3f64..2.0).exp();
    (spectrum_with_k(rank, k, alpha, 0.2, rng), k)
}

fn hermitian_matrix(x: &Element, m: usize) -> DMatrix<Complex64> {
    let h = x.to_hermitian().unwrap_or_else(|| {
        let s = x.to_symmetric().unwrap();
        s.iter().map(|v| Complex64::new(*v, 0.0)).collect()
    });
    DMatrix::from_row_slice(m, m, &h)
}

/// Count of eigenvalues failing `max(l, 1/l) >= (1 - tau) max_j max(l_j, 1/l_j)`,
/// or `None` when a non-attaining value lies within `1e-4` of attaining.
fn k_by_rule(eigs: &[f64], tau: f64) -> Option<usize> {
    let spread: Vec<f64> = eigs.iter().map(|l| l.max(1.0 / l)).collect();
    let target = spread.iter().copied().fold(0.0, f64::max);
    let mut k = 0;
    for a in spread {
        if a < (1.0 - tau) * target {
            if 1.0 - a / target < 1e-4 {
                return None;
            }
            k += 1;
        }
    }
    Some(k)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let tau = DEFAULT_TIE_TOL;
    let opts = MidspanOptions::default();
    let mut failures = Vec::new();
    let mut resampled = 0;
    let mut ks = [0usize; 6];
    let mut cases = 0;
    for m in 2..=6usize {
        let a = alg(&format!("herm-complex:{m}"));
        let cone = SymmetricCone::new(a.clone());
        let e = Element::unit(&a);
        for i in 0..100u64 {
            let mut rng = stream_rng(SEED ^ 1, (m as u64) << 32 | i);
            let (x, k) = loop {
                // alternate generic draws and draws with repeated extremes
                let x = if i % 2 == 0 {
                    random_interior(&a, 1.5, &mut rng).unwrap()
                } else {
                    with_spectrum(&a, &controlled_spectrum(m, &mut rng).0, &mut rng).unwrap()
                };
                let eigs = SymmetricEigen::new(hermitian_matrix(&x, m)).eigenvalues;
                match k_by_rule(eigs.as_slice(), tau) {
                    Some(k) => break (x, k),
                    None => resampled += 1,
                }
            };
            cases += 1;
            ks[k] += 1;
            let got = conemid::midspan::midspan_dimension(&cone, &x, &e, &opts);
            if got.as_ref().ok() != Some(&(k * k)) {
                failures.push(format!("m = {m}, case {i}: k = {k}, got {got:?}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        failures.is_empty() && t < Duration::from_secs(30),
        format!(
            "{cases} cases, {} failures, k histogram {ks:?}, {resampled} resampled, {:.2}s{}",
            failures.len(),
            t.as_secs_f64(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn peirce_d(kind: &str, m: usize) -> usize {
    match kind {
        "sym-real" => 1,
        "herm-complex" => 2,
        "spin" => m - 2,
        _ => unreachable!(),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let opts = MidspanOptions::default();
    let mut backends = Vec::new();
    backends.extend((2..=6).map(|m| ("sym-real", m)));
    backends.extend((2..=5).map(|m| ("herm-complex", m)));
    backends.extend((3..=10).map(|m| ("spin", m)));
    let mut failures = Vec::new();
    let mut cases = 0;
    for (bi, (kind, m)) in backends.iter().enumerate() {
        let a = alg(&format!("{kind}:{m}"));
        let cone = SymmetricCone::new(a.clone());
        let d = peirce_d(kind, *m);
        for i in 0..1000u64 {
            let mut rng = stream_rng(SEED ^ 2, (bi as u64) << 32 | i);
            let (spectrum, k) = controlled_spectrum(a.rank(), &mut rng);
            let (x, y) = eja_pair(&a, &spectrum, &mut rng);
            cases += 1;
            let closed = k + d * k * k.saturating_sub(1) / 2;
            match cone.midpoint_span(&x, &y, &opts) {
                Ok(r) if r.dimension == closed && r.formula_dimension == Some(closed) && r.k == k => {}
                Ok(r) => failures.push(format!(
                    "{kind}:{m} case {i}: k = {k}, closed form {closed}, Peirce {} (k {}, formula {:?})",
                    r.dimension, r.k, r.formula_dimension
                )),
                Err(e) => failures.push(format!("{kind}:{m} case {i}: {e}")),
            }
        }
    }
    let t = start.elapsed();
    outcome(
        failures.is_empty() && t < Duration::from_secs(60),
        format!(
            "{} backends, {cases} cases, {} failures, {:.2}s{}",
            backends.len(),
            failures.len(),
            t.as_secs_f64(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_3() -> Outcome {
    let opts = MidspanOptions::default();
    let sampling = |seed| SampleOptions {
        samples: 500,
        seed,
        ..SampleOptions::default()
    };
    let algebras = ["sym-real:3", "herm-complex:3", "spin:5", "direct-sum(sym-real:2,spin:3)", "herm-complex:4"];
    let mut failures = Vec::new();
    let mut worst_offset = 0.0f64;
    let mut min_dim = usize::MAX;
    for i in 0..100u64 {
        let a = alg(algebras[i as usize % algebras.len()]);
        let cone = SymmetricCone::new(a.clone());
        let mut rng = stream_rng(SEED ^ 3, i);
        let alpha = rng.random_range(0.3f64..2.0).exp();
        let r = a.rank();
        let singleton = i < 50;
        let k = if singleton { 0 } else { rng.random_range(1..r) };
        let spectrum = spectrum_with_k(r, k, alpha, 0.2, &mut rng);
        let (x, y) = eja_pair(&a, &spectrum, &mut rng);
        let report = match cone.midpoint_span(&x, &y, &opts) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("pair {i}: {e}"));
                continue;
            }
        };
        if singleton {
            if report.dimension != 0 {
                failures.push(format!("pair {i} ({a}): dimension {}", report.dimension));
                continue;
            }
            match sample_midpoints(&cone, &x, &y, &report, &sampling(i)) {
                Ok(s) => {
                    let off = s
                        .accepted
                        .iter()
                        .map(|p| p.point.distance_to(&report.base_point))
                        .fold(0.0, f64::max);
                    worst_offset = worst_offset.max(off);
                    if off > 1e-6 || s.accepted.first().map(|p| p.index) != Some(0) {
                        failures.push(format!("pair {i} ({a}): accepted point at {off:e} from base"));
                    }
                }
                Err(e) => failures.push(format!("pair {i}: {e}")),
            }
        } else {
            min_dim = min_dim.min(report.dimension);
            if report.dimension == 0 {
                failures.push(format!("pair {i} ({a}): k = {k} but dimension 0"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "50 singleton + 50 non-singleton pairs, {} failures, worst accepted offset {worst_offset:e}, \
             smallest non-singleton dimension {min_dim}{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// `M(x/y)` from a Cholesky factor of `y`.
fn gauge_by_cholesky(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> f64 {
    let l = y.clone().cholesky().unwrap();
    let linv = l.l().try_inverse().unwrap();
    let w = &linv * x * linv.adjoint();
    let w = (&w + w.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(w).eigenvalues.max()
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_gauge = 0.0f64;
    let mut failures = Vec::new();
    let mut count = 0;
    let eja = ["sym-real:3", "herm-complex:3", "spin:5", "direct-sum(sym-real:2,spin:3)"];
    for (bi, s) in eja.iter().enumerate() {
        let a = alg(s);
        let cone = SymmetricCone::new(a.clone());
        let m = match a.kind() {
            AlgebraKind::SymReal { m } | AlgebraKind::HermComplex { m } => Some(*m),
            _ => None,
        };
        for i in 0..500u64 {
            let mut rng = stream_rng(SEED ^ 4, (bi as u64) << 32 | i);
            let x = random_interior(&a, 2.0, &mut rng).unwrap();
            let y = random_interior(&a, 2.0, &mut rng).unwrap();
            let mid = canonical_midpoint(&cone, &x, &y).unwrap();
            let (gxy, gmy) = (m_ratio(&cone, &x, &y).unwrap(), m_ratio(&cone, &mid, &y).unwrap());
            let (gyx, gmx) = (m_ratio(&cone, &y, &x).unwrap(), m_ratio(&cone, &mid, &x).unwrap());
            let err = relative_error(gmy * gmy, gxy).max(relative_error(gmx * gmx, gyx));
            if let Some(m) = m {
                let (xm, ym) = (hermitian_matrix(&x, m), hermitian_matrix(&y, m));
                let g = relative_error(gxy, gauge_by_cholesky(&xm, &ym));
                worst_gauge = worst_gauge.max(g);
                if g > 1e-10 {
                    failures.push(format!("{s} pair {i}: gauge differs from Cholesky route by {g:e}"));
                }
            }
            worst = worst.max(err);
            count += 1;
            if err > 1e-8 {
                failures.push(format!("{s} pair {i}: relative error {err:e}"));
            }
        }
    }
    let cone = StandardCone::new(3);
    for i in 0..500u64 {
        let mut rng = stream_rng(SEED ^ 4, 99 << 32 | i);
        let x = random_standard(3, 2.0, &mut rng);
        let y = random_standard(3, 2.0, &mut rng);
        let mid = canonical_midpoint(&cone, &x, &y).unwrap();
        let max_ratio = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a / b).fold(0.0, f64::max);
        let err = relative_error(max_ratio(&mid, &y).powi(2), max_ratio(&x, &y))
            .max(relative_error(max_ratio(&mid, &x).powi(2), max_ratio(&y, &x)));
        worst = worst.max(err);
        count += 1;
        if err > 1e-8 {
            failures.push(format!("standard:3 pair {i}: relative error {err:e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "5 backends x 500 pairs ({count}), worst relative error {worst:e}, \
             worst gauge cross-check {worst_gauge:e}{}",
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for n in [2, 3] {
        let r = exhaustive_standard(n, 4, oracle::MAX_GRID);
        pass &= r.mismatches.is_empty() && r.tie_pairs > 0;
        detail.push(format!(
            "R^{n}_+: {} pairs, {} classes, {} ties, {} mismatches",
            r.pairs,
            r.classes,
            r.tie_pairs,
            r.mismatches.len()
        ));
    }
    // explicit tie: M(x/y) = M(y/x) = 2
    let cone = StandardCone::new(3);
    let (x, y) = (vec![4.0, 1.0, 3.0], vec![2.0, 2.0, 2.0]);
    let predicted = conemid::midspan::midspan_dimension(&cone, &x, &y, &MidspanOptions::default());
    let brute = brute_force_standard(&cone, &x, &y, oracle::MAX_GRID, None);
    let tie_ok = matches!((&predicted, &brute), (Ok(1), Ok(1)));
    pass &= tie_ok;
    detail.push(format!("tie pair (4,1,3)/(2,2,2): predicted {predicted:?}, grid {brute:?}"));
    let t = start.elapsed();
    pass &= t < Duration::from_secs(60);
    detail.push(format!("{:.2}s", t.as_secs_f64()));
    outcome(pass, detail.join("; "))
}

/// Outcome of one verified pair: whether it agrees, whether sampling was
/// conclusive, and a description.
type PairCheck = Result<(bool, bool, String), String>;

fn check_pair<C: MidpointSpan>(cone: &C, x: &C::Point, y: &C::Point, seed: u64) -> PairCheck {
    let sampling = SampleOptions {
        samples: 600,
        seed,
        ..SampleOptions::default()
    };
    let (r, v) = oracle::analyze_and_verify(cone, x, y, &MidspanOptions::default(), &sampling)
        .map_err(|e| e.to_string())?;
    let conclusive = v.accepted_samples >= MIN_ACCEPTED;
    let ok = v.positive.all_passed()
        && v.negative.all_passed()
        && v.sampled_dimension <= r.dimension
        && (!conclusive || v.sampled_dimension == r.dimension);
    Ok((
        ok,
        conclusive,
        format!(
            "predicted {}, sampled {} from {} acceptances, positive {}, negative {}",
            r.dimension, v.sampled_dimension, v.accepted_samples, v.positive, v.negative
        ),
    ))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut tally = |name: &str, results: Vec<PairCheck>| {
        let mut conclusive = 0;
        let mut bad = 0;
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok((ok, concl, what)) => {
                    conclusive += concl as usize;
                    if !ok {
                        bad += 1;
                        failures.push(format!("{name} pair {i}: {what}"));
                    }
                }
                Err(e) => {
                    bad += 1;
                    failures.push(format!("{name} pair {i}: {e}"));
                }
            }
        }
        lines.push(format!("{name}: {bad} mismatches, {conclusive}/200 conclusive"));
    };
    let eja = ["sym-real:3", "herm-complex:3", "spin:5", "direct-sum(sym-real:2,spin:3)", "sym-real:5"];
    for (bi, s) in eja.iter().enumerate() {
        let a = alg(s);
        let cone = SymmetricCone::new(a.clone());
        let results = (0..200u64)
            .map(|i| {
                let mut rng = stream_rng(SEED ^ 6, (bi as u64) << 32 | i);
                let (x, y) = if i % 4 == 0 {
                    (random_interior(&a, 1.5, &mut rng).unwrap(), random_interior(&a, 1.5, &mut rng).unwrap())
                } else {
                    eja_pair(&a, &controlled_spectrum(a.rank(), &mut rng).0, &mut rng)
                };
                check_pair(&cone, &x, &y, i)
            })
            .collect();
        tally(s, results);
    }
    let cone = StandardCone::new(3);
    let results = (0..200u64)
        .map(|i| {
            let mut rng = stream_rng(SEED ^ 6, 99 << 32 | i);
            let (x, y) = if i % 4 == 0 {
                (random_standard(3, 1.5, &mut rng), random_standard(3, 1.5, &mut rng))
            } else {
                standard_pair(3, &controlled_spectrum(3, &mut rng).0, &mut rng)
            };
            check_pair(&cone, &x, &y, i)
        })
        .collect();
    tally("standard:3", results);
    outcome(
        failures.is_empty(),
        format!(
            "{}{}",
            lines.join("; "),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// Canonical midpoint of commuting diagonal pairs computed coordinatewise
/// from the eigenvalue ratios `r_i = x_i / y_i`.
fn ratio_midpoint(x: &[f64], y: &[f64]) -> Vec<f64> {
    let r: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / b).collect();
    let m1 = r.iter().copied().fold(0.0, f64::max);
    let m2 = r.iter().map(|v| 1.0 / v).fold(0.0, f64::max);
    let d = m1 * m2 - 1.0;
    // x = a1 v + b1 u, y = a2 v + b2 u with v = x - y / M2, u = y - x / M1
    let (a1, b1, a2, b2) = (m1 * m2 / d, m1 / d, m2 / d, m1 * m2 / d);
    let (a, b) = ((a1 * a2).sqrt(), (b1 * b2).sqrt());
    x.iter()
        .zip(y)
        .map(|(xi, yi)| a * (xi - yi / m2) + b * (yi - xi / m1))
        .collect()
}

fn criterion_7() -> Outcome {
    let opts = MidspanOptions::default();
    let a = alg("sym-real:3");
    let cone = SymmetricCone::new(a.clone());
    let x = Element::diagonal(&a, &[4.0, 2.0, 1.0]).unwrap();
    let e = Element::unit(&a);
    let d = distance(&cone, &x, &e).unwrap();
    let d_err = (d - 4f64.ln()).abs();
    let gm = geometric_mean(&x, &e).unwrap();
    let gm_err = gm.distance_to(&Element::diagonal(&a, &[2.0, 2f64.sqrt(), 1.0]).unwrap());
    let oracle_mid = ratio_midpoint(&[4.0, 2.0, 1.0], &[1.0, 1.0, 1.0]);
    let oracle_err = oracle_mid
        .iter()
        .zip([2.0, 4.0 / 3.0, 1.0])
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    let mid = canonical_midpoint(&cone, &x, &e).unwrap();
    let mid_err = mid.distance_to(&Element::diagonal(&a, &oracle_mid).unwrap());
    let mid_ok = is_midpoint(&cone, &x, &e, &mid, None);
    let dim_sym = conemid::midspan::midspan_dimension(&cone, &x, &e, &opts);
    let h = alg("herm-complex:3");
    let hcone = SymmetricCone::new(h.clone());
    let hx = Element::diagonal(&h, &[4.0, 2.0, 1.0]).unwrap();
    let dim_herm = conemid::midspan::midspan_dimension(&hcone, &hx, &Element::unit(&h), &opts);
    let pass = d_err <= 1e-12
        && gm_err <= 1e-10
        && oracle_err <= 1e-14
        && mid_err <= 1e-10
        && mid_ok
        && matches!(dim_sym, Ok(3))
        && matches!(dim_herm, Ok(4));
    outcome(
        pass,
        format!(
            "|d_T - log 4| = {d_err:e}, geometric mean error {gm_err:e}, canonical midpoint error {mid_err:e}, \
             dim sym-real(3) = {dim_sym:?}, dim herm-complex(3) = {dim_herm:?}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let outcomes = selftest::run(&SelftestConfig::default());
    let t = start.elapsed();
    let required = [
        "jordan-identity",
        "orthogonality-equivalence",
        "isometry",
        "norm-monotonicity",
        "metric-axioms",
    ];
    let mut missing = Vec::new();
    for name in required {
        let rows: Vec<_> = outcomes.iter().filter(|o| o.suite == name).collect();
        if rows.is_empty() || rows.iter().any(|o| o.cases < 1000) {
            missing.push(name);
        }
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| format!("{} on {}", o.suite, o.backend))
        .collect();
    let pass = missing.is_empty() && failed.is_empty() && t < Duration::from_secs(180);
    outcome(
        pass,
        format!(
            "{} suites, {} failed, required suites missing or short: {missing:?}, {:.2}s{}",
            outcomes.len(),
            failed.len(),
            t.as_secs_f64(),
            failed.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Hermitian k^2 law", criterion_1),
        ("Peirce dimension equals closed form", criterion_2),
        ("singleton criterion", criterion_3),
        ("midpoint gauge identity", criterion_4),
        ("standard cone exhaustive brute force", criterion_5),
        ("oracle agreement", criterion_6),
        ("worked example", criterion_7),
        ("property suites and selftest runtime", criterion_8),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.pass;
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
