//! Conversions between coordinates and dense matrices for the matrix
//! families.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;

pub(super) fn diag_index(m: usize, i: usize, complex: bool) -> usize {
    let per_off = if complex { 2 } else { 1 };
    // rows 0..i contribute 1 + per_off*(m - r - 1) coordinates each
    (0..i).map(|r| 1 + per_off * (m - r - 1)).sum()
}

pub(super) fn sym_to_matrix(m: usize, c: &[f64]) -> Vec<f64> {
    let mut a = vec![0.0; m * m];
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            if i == j {
                a[i * m + i] = c[k];
            } else {
                let v = c[k] / SQRT_2;
                a[i * m + j] = v;
                a[j * m + i] = v;
            }
            k += 1;
        }
    }
    a
}

/// Coordinates of the symmetric part of `z`.
pub(super) fn real_to_sym_coords(m: usize, z: &[f64], out: &mut [f64]) {
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            out[k] = if i == j {
                z[i * m + i]
            } else {
                (z[i * m + j] + z[j * m + i]) / SQRT_2
            };
            k += 1;
        }
    }
}

pub(super) fn upper_real_to_coords(m: usize, a: &[f64], out: &mut [f64]) {
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            out[k] = if i == j { a[i * m + i] } else { SQRT_2 * a[i * m + j] };
            k += 1;
        }
    }
}

pub(super) fn herm_to_matrix(m: usize, c: &[f64]) -> Vec<Complex64> {
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            if i == j {
                a[i * m + i] = Complex64::new(c[k], 0.0);
                k += 1;
            } else {
                let v = Complex64::new(c[k], c[k + 1]) / SQRT_2;
                a[i * m + j] = v;
                a[j * m + i] = v.conj();
                k += 2;
            }
        }
    }
    a
}

/// Coordinates of the Hermitian part of `z`.
pub(super) fn complex_to_herm_coords(m: usize, z: &[Complex64], out: &mut [f64]) {
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            if i == j {
                out[k] = z[i * m + i].re;
                k += 1;
            } else {
                let h = (z[i * m + j] + z[j * m + i].conj()) / SQRT_2;
                out[k] = h.re;
                out[k + 1] = h.im;
                k += 2;
            }
        }
    }
}

pub(super) fn upper_complex_to_coords(m: usize, a: &[Complex64], out: &mut [f64]) {
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            if i == j {
                out[k] = a[i * m + i].re;
                k += 1;
            } else {
                out[k] = SQRT_2 * a[i * m + j].re;
                out[k + 1] = SQRT_2 * a[i * m + j].im;
                k += 2;
            }
        }
    }
}

pub(super) fn mul_real(m: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i * m + j] += aik * b[k * m + j];
            }
        }
    }
    c
}

pub(super) fn mul_complex(m: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            for j in 0..m {
                c[i * m + j] += aik * b[k * m + j];
            }
        }
    }
    c
}
