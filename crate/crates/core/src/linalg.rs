//! Dense helpers on plain `f64` slices: the cyclic Jacobi eigensolver and
//! Gram-Schmidt orthonormalisation used by the algebra kernel.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
///
/// `values` are sorted ascending; `vectors[k]` is the unit eigenvector for
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations on a row-major `n x n` symmetric matrix.
///
/// Only the symmetric part of `a` is used.
pub fn jacobi_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    assert_eq!(a.len(), n * n, "matrix storage does not match n*n");
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let fro = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m, n);
        if off <= 1e-15 * fro || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // negligible against both diagonal entries
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&m, n);
        if off > 1e-12 * fro {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|k| v[k * n + j]).collect())
        .collect();
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Modified Gram-Schmidt with re-orthogonalisation. Vectors whose residual
/// falls below `drop_tol` times their original norm are discarded.
pub fn orthonormalize(vectors: &[Vec<f64>], drop_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let r = norm(&w);
        if r > drop_tol * original {
            w.iter_mut().for_each(|x| *x /= r);
            basis.push(w);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `span` in `R^dim`.
/// `span` must already be orthonormal.
pub fn orthogonal_complement(span: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut candidates: Vec<Vec<f64>> = span.to_vec();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        candidates.push(e);
    }
    let full = orthonormalize(&candidates, 1e-8);
    full.into_iter().skip(span.len()).take(dim - span.len()).collect()
}

/// Component of `v` orthogonal to the orthonormal family `span`.
pub fn reject_from(v: &[f64], span: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for b in span {
        let proj = dot(b, &w);
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi -= proj * bi;
        }
    }
    w
}
