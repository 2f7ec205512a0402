//! Jordan frames, spectral decompositions and the functional calculus.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{matrix, Algebra, AlgebraKind, Element, DEFAULT_GROUP_TOL};
use crate::error::{Error, Result};
use crate::linalg::jacobi_eigen;

/// `x = sum_j eigenvalues[j] * primitives[j]` over a complete system of
/// primitive orthogonal idempotents. Eigenvalues are ascending.
#[derive(Debug, Clone)]
pub struct JordanFrame {
    pub primitives: Vec<Element>,
    pub eigenvalues: Vec<f64>,
}

/// Distinct eigenvalues (strictly increasing) with their spectral idempotents.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<Element>,
    pub multiplicities: Vec<usize>,
}

/// Whether a point lies inside, on the boundary of, or outside the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeMembership {
    Interior,
    Boundary,
    Outside,
}

impl ConeMembership {
    /// Classifies by smallest eigenvalue against `tol * max(1, spectral radius)`.
    pub fn classify(min: f64, max_abs: f64, tol: f64) -> Self {
        let scale = max_abs.max(1.0);
        if min > tol * scale {
            ConeMembership::Interior
        } else if min < -tol * scale {
            ConeMembership::Outside
        } else {
            ConeMembership::Boundary
        }
    }
}

type RawFrame = Vec<(f64, Vec<f64>)>;

impl Algebra {
    fn frame_raw(&self, x: &[f64]) -> Result<RawFrame> {
        match self.kind {
            AlgebraKind::SymReal { m } => {
                let a = matrix::sym_to_matrix(m, x);
                let eig = jacobi_eigen(&a, m)?;
                Ok(eig
                    .values
                    .into_iter()
                    .zip(eig.vectors)
                    .map(|(lambda, u)| {
                        let mut outer = vec![0.0; m * m];
                        for i in 0..m {
                            for j in 0..m {
                                outer[i * m + j] = u[i] * u[j];
                            }
                        }
                        let mut c = vec![0.0; self.dim];
                        matrix::upper_real_to_coords(m, &outer, &mut c);
                        (lambda, c)
                    })
                    .collect())
            }
            AlgebraKind::HermComplex { m } => {
                let h = matrix::herm_to_matrix(m, x);
                let vectors = hermitian_eigenvectors(m, &h)?;
                let mut out = Vec::with_capacity(m);
                for u in vectors {
                    // Rayleigh quotient u* H u
                    let mut lambda = 0.0;
                    for i in 0..m {
                        let mut hu = Complex64::new(0.0, 0.0);
                        for j in 0..m {
                            hu += h[i * m + j] * u[j];
                        }
                        lambda += (u[i].conj() * hu).re;
                    }
                    let mut outer = vec![Complex64::new(0.0, 0.0); m * m];
                    for i in 0..m {
                        for j in 0..m {
                            outer[i * m + j] = u[i] * u[j].conj();
                        }
                    }
                    let mut c = vec![0.0; self.dim];
                    matrix::upper_complex_to_coords(m, &outer, &mut c);
                    out.push((lambda, c));
                }
                out.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(out)
            }
            AlgebraKind::Spin { m } => {
                let t = x[0];
                let w = &x[1..];
                let len = crate::linalg::norm(w);
                let dir: Vec<f64> = if len > 0.0 {
                    w.iter().map(|v| v / len).collect()
                } else {
                    let mut d = vec![0.0; m - 1];
                    d[0] = 1.0;
                    d
                };
                let mut lo = vec![0.5; m];
                let mut hi = vec![0.5; m];
                for i in 1..m {
                    lo[i] = -0.5 * dir[i - 1];
                    hi[i] = 0.5 * dir[i - 1];
                }
                Ok(vec![(t - len, lo), (t + len, hi)])
            }
            AlgebraKind::DirectSum { .. } => {
                let mut out = Vec::with_capacity(self.rank);
                for (off, sub) in &self.summands {
                    for (lambda, c) in sub.frame_raw(&x[*off..*off + sub.dim])? {
                        let mut full = vec![0.0; self.dim];
                        full[*off..*off + sub.dim].copy_from_slice(&c);
                        out.push((lambda, full));
                    }
                }
                out.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(out)
            }
        }
    }

    fn eigenvalues_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.kind {
            AlgebraKind::SymReal { m } => Ok(jacobi_eigen(&matrix::sym_to_matrix(m, x), m)?.values),
            AlgebraKind::HermComplex { m } => {
                let h = matrix::herm_to_matrix(m, x);
                let doubled = jacobi_eigen(&real_embedding(m, &h), 2 * m)?.values;
                // each eigenvalue appears twice in the embedding
                Ok(doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
            }
            AlgebraKind::Spin { .. } => {
                let len = crate::linalg::norm(&x[1..]);
                Ok(vec![x[0] - len, x[0] + len])
            }
            AlgebraKind::DirectSum { .. } => {
                let mut out = Vec::with_capacity(self.rank);
                for (off, sub) in &self.summands {
                    out.extend(sub.eigenvalues_raw(&x[*off..*off + sub.dim])?);
                }
                out.sort_by(f64::total_cmp);
                Ok(out)
            }
        }
    }
}

/// `[[Re H, -Im H], [Im H, Re H]]`, row-major `2m x 2m`.
fn real_embedding(m: usize, h: &[Complex64]) -> Vec<f64> {
    let n = 2 * m;
    let mut e = vec![0.0; n * n];
    for i in 0..m {
        for j in 0..m {
            let z = h[i * m + j];
            e[i * n + j] = z.re;
            e[i * n + (m + j)] = -z.im;
            e[(m + i) * n + j] = z.im;
            e[(m + i) * n + (m + j)] = z.re;
        }
    }
    e
}

/// Orthonormal complex eigenvectors of a Hermitian matrix, ascending by
/// eigenvalue, recovered from the real symmetric embedding.
fn hermitian_eigenvectors(m: usize, h: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let eig = jacobi_eigen(&real_embedding(m, h), 2 * m)?;
    let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let as_complex = |v: &[f64]| -> Vec<Complex64> {
        (0..m).map(|i| Complex64::new(v[i], v[m + i])).collect()
    };

    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut start = 0;
    while start < 2 * m {
        let mut end = start + 1;
        while end < 2 * m && eig.values[end] - eig.values[end - 1] <= 1e-9 * scale {
            end += 1;
        }
        let size = end - start;
        if size % 2 != 0 {
            return Err(Error::Invariant(format!(
                "unpaired eigenvalue cluster of size {size} in Hermitian embedding"
            )));
        }
        // greedy: take the candidate with the largest residual against the
        // complex span accepted so far
        let mut candidates: Vec<Vec<Complex64>> =
            eig.vectors[start..end].iter().map(|v| as_complex(v)).collect();
        let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(size / 2);
        for _ in 0..size / 2 {
            let (best, res) = candidates
                .iter()
                .enumerate()
                .map(|(k, c)| (k, complex_norm(c)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty cluster");
            if res < 1e-6 {
                return Err(Error::Invariant(
                    "degenerate Hermitian eigenvector cluster".into(),
                ));
            }
            let u: Vec<Complex64> = candidates.swap_remove(best).iter().map(|z| z / res).collect();
            for c in candidates.iter_mut() {
                let proj: Complex64 = u.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                for (ci, ui) in c.iter_mut().zip(&u) {
                    *ci -= proj * ui;
                }
            }
            accepted.push(u);
        }
        out.extend(accepted);
        start = end;
    }
    Ok(out)
}

fn complex_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Element {
    /// Decomposes `self` over a Jordan frame of `rank` primitive idempotents.
    pub fn jordan_frame(&self) -> Result<JordanFrame> {
        let raw = self.algebra.frame_raw(&self.coords)?;
        let mut primitives = Vec::with_capacity(raw.len());
        let mut eigenvalues = Vec::with_capacity(raw.len());
        for (lambda, c) in raw {
            eigenvalues.push(lambda);
            primitives.push(Element {
                algebra: Arc::clone(&self.algebra),
                coords: c,
            });
        }
        Ok(JordanFrame {
            primitives,
            eigenvalues,
        })
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.algebra.eigenvalues_raw(&self.coords)
    }

    /// `(lambda_min, lambda_max)`.
    pub fn spectral_bounds(&self) -> Result<(f64, f64)> {
        let ev = self.eigenvalues()?;
        Ok((ev[0], ev[ev.len() - 1]))
    }

    /// Spectral decomposition with eigenvalues merged when consecutive ones
    /// differ by at most `group_tol` times the spectral radius.
    pub fn spectral_decompose(&self, group_tol: f64) -> Result<SpectralDecomposition> {
        self.jordan_frame()?.group(group_tol)
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        self.spectral_decompose(DEFAULT_GROUP_TOL)
    }

    pub fn membership(&self, tol: f64) -> Result<ConeMembership> {
        let (lo, hi) = self.spectral_bounds()?;
        Ok(ConeMembership::classify(lo, lo.abs().max(hi.abs()), tol))
    }

    /// `sum_i lambda_i^t c_i`.
    pub fn power(&self, t: f64) -> Result<Element> {
        self.jordan_frame()?.map(|lambda| {
            let integer = t.fract() == 0.0;
            if (integer && t < 0.0 && lambda == 0.0) || (!integer && lambda <= 0.0) {
                return Err(Error::PowerDomain {
                    exponent: t,
                    eigenvalue: lambda,
                });
            }
            Ok(if integer && t.abs() < i32::MAX as f64 {
                lambda.powi(t as i32)
            } else {
                lambda.powf(t)
            })
        })
    }

    pub fn sqrt(&self) -> Result<Element> {
        self.power(0.5)
    }

    pub fn inverse(&self) -> Result<Element> {
        self.power(-1.0)
    }

    /// Spectral logarithm; requires an interior point.
    pub fn log(&self) -> Result<Element> {
        self.jordan_frame()?.map(|lambda| {
            if lambda <= 0.0 {
                Err(Error::PowerDomain {
                    exponent: 0.0,
                    eigenvalue: lambda,
                })
            } else {
                Ok(lambda.ln())
            }
        })
    }
}

impl JordanFrame {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Applies `f` to each eigenvalue and recombines over the same frame.
    pub fn map(&self, f: impl Fn(f64) -> Result<f64>) -> Result<Element> {
        let mut out = Element::zeros(self.primitives[0].algebra());
        for (lambda, c) in self.eigenvalues.iter().zip(&self.primitives) {
            out.axpy(f(*lambda)?, c);
        }
        Ok(out)
    }

    pub fn reconstruct(&self) -> Element {
        self.map(Ok).expect("identity map cannot fail")
    }

    pub fn group(self, group_tol: f64) -> Result<SpectralDecomposition> {
        let scale = self.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let algebra = Arc::clone(self.primitives[0].algebra());
        let mut eigenvalues = Vec::new();
        let mut idempotents = Vec::new();
        let mut multiplicities = Vec::new();
        let mut i = 0;
        let r = self.rank();
        while i < r {
            let mut j = i + 1;
            while j < r && self.eigenvalues[j] - self.eigenvalues[j - 1] <= group_tol * scale {
                j += 1;
            }
            let mut c = Element::zeros(&algebra);
            for p in &self.primitives[i..j] {
                c.axpy(1.0, p);
            }
            let mean = self.eigenvalues[i..j].iter().sum::<f64>() / (j - i) as f64;
            eigenvalues.push(mean);
            idempotents.push(c);
            multiplicities.push(j - i);
            i = j;
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            idempotents,
            multiplicities,
        })
    }
}

impl SpectralDecomposition {
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn reconstruct(&self) -> Element {
        let mut out = Element::zeros(self.idempotents[0].algebra());
        for (lambda, c) in self.eigenvalues.iter().zip(&self.idempotents) {
            out.axpy(*lambda, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ejalg::AlgebraKind;

    fn alg(s: &str) -> Arc<Algebra> {
        Algebra::new(s.parse::<AlgebraKind>().unwrap()).unwrap()
    }

    #[test]
    fn diagonal_spectral_blocks() {
        let a = alg("sym-real:3");
        let x = Element::diagonal(&a, &[2.0, 2.0, 1.0]).unwrap();
        let s = x.spectral().unwrap();
        assert_eq!(s.multiplicities, vec![1, 2]);
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-15);
        let c0 = Element::diagonal(&a, &[0.0, 0.0, 1.0]).unwrap();
        let c1 = Element::diagonal(&a, &[1.0, 1.0, 0.0]).unwrap();
        assert!(s.idempotents[0].distance_to(&c0) < 1e-14);
        assert!(s.idempotents[1].distance_to(&c1) < 1e-14);
    }

    #[test]
    fn spin_closed_form() {
        let a = alg("spin:3");
        let x = Element::new(&a, vec![3.0, 1.0, 0.0]).unwrap();
        let f = x.jordan_frame().unwrap();
        assert_eq!(f.eigenvalues, vec![2.0, 4.0]);
        assert_eq!(f.primitives[0].coords(), &[0.5, -0.5, 0.0]);
        assert_eq!(f.primitives[1].coords(), &[0.5, 0.5, 0.0]);

        let y = Element::new(&a, vec![1.0, 3.0, 4.0]).unwrap();
        let s = y.spectral().unwrap();
        assert_eq!(s.eigenvalues, vec![-4.0, 6.0]);
        assert!(s.idempotents[1].distance_to(&Element::new(&a, vec![0.5, 0.3, 0.4]).unwrap()) < 1e-15);
    }

    #[test]
    fn hadamard_idempotents() {
        let a = alg("sym-real:2");
        let x = Element::from_symmetric(&a, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = x.spectral().unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15 && (s.eigenvalues[1] - 1.0).abs() < 1e-15);
        let lo = Element::from_symmetric(&a, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        let hi = Element::from_symmetric(&a, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(s.idempotents[0].distance_to(&lo) < 1e-14);
        assert!(s.idempotents[1].distance_to(&hi) < 1e-14);
    }

    #[test]
    fn unit_has_all_eigenvalues_one() {
        for s in ["sym-real:4", "herm-complex:3", "spin:5", "direct-sum(spin:3,sym-real:2)"] {
            let a = alg(s);
            let f = Element::unit(&a).jordan_frame().unwrap();
            assert_eq!(f.rank(), a.rank());
            assert!(f.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-14));
            let s = Element::unit(&a).spectral().unwrap();
            assert_eq!(s.multiplicities, vec![a.rank()]);
        }
    }

    #[test]
    fn hermitian_degenerate_spectrum_frame() {
        let a = alg("herm-complex:3");
        let x = Element::diagonal(&a, &[2.0, 2.0, 1.0]).unwrap();
        let f = x.jordan_frame().unwrap();
        assert_eq!(f.rank(), 3);
        assert!(f.reconstruct().distance_to(&x) < 1e-13);
        for (i, ci) in f.primitives.iter().enumerate() {
            assert!(ci.square().distance_to(ci) < 1e-13);
            for cj in &f.primitives[i + 1..] {
                assert!(ci.jordan(cj).unwrap().norm() < 1e-13);
            }
        }
    }

    #[test]
    fn powers() {
        let a = alg("sym-real:2");
        let x = Element::diagonal(&a, &[4.0, 1.0]).unwrap();
        let r = x.power(0.5).unwrap();
        assert!(r.distance_to(&Element::diagonal(&a, &[2.0, 1.0]).unwrap()) < 1e-15);
        let e = Element::unit(&a);
        assert!(e.power(-0.37).unwrap().distance_to(&e) < 1e-15);
        assert!(x.power(0.0).unwrap().distance_to(&e) < 1e-15);
        assert!(x.power(1.0).unwrap().distance_to(&x) < 1e-15);
        let back = x.power(-0.5).unwrap().quad(&x).unwrap();
        assert!(back.distance_to(&e) < 1e-14);

        let singular = Element::diagonal(&a, &[0.0, 1.0]).unwrap();
        assert!(matches!(singular.power(0.5), Err(Error::PowerDomain { .. })));
        assert!(singular.power(2.0).is_ok());
        assert!(singular.power(0.0).unwrap().distance_to(&e) < 1e-15);
    }

    #[test]
    fn membership_classes() {
        let a = alg("sym-real:2");
        let d = |v: [f64; 2]| Element::diagonal(&a, &v).unwrap();
        assert_eq!(d([1.0, 2.0]).membership(1e-12).unwrap(), ConeMembership::Interior);
        assert_eq!(d([0.0, 1.0]).membership(1e-12).unwrap(), ConeMembership::Boundary);
        assert_eq!(d([-1.0, 1.0]).membership(1e-12).unwrap(), ConeMembership::Outside);
    }
}
