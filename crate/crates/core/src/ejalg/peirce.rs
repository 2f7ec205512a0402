//! Peirce spaces `V(c, 0)`, `V(c, 1/2)`, `V(c, 1)` of an idempotent `c`,
//! computed as eigenspaces of the multiplication operator `L(c)`.

use serde::Serialize;

use super::{Element, IDEMPOTENT_TOL};
use crate::error::{Error, Result};
use crate::linalg::jacobi_eigen;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PeirceIndex {
    Zero,
    Half,
    One,
}

impl PeirceIndex {
    pub fn value(self) -> f64 {
        match self {
            PeirceIndex::Zero => 0.0,
            PeirceIndex::Half => 0.5,
            PeirceIndex::One => 1.0,
        }
    }

    /// Nearest Peirce eigenvalue, or `None` when further than 1/4 from all.
    fn snap(lambda: f64) -> Option<Self> {
        [PeirceIndex::Zero, PeirceIndex::Half, PeirceIndex::One]
            .into_iter()
            .find(|p| (lambda - p.value()).abs() <= 0.25)
    }
}

impl Element {
    /// `|c² - c|`.
    pub fn idempotent_residual(&self) -> f64 {
        (&self.square() - self).norm()
    }

    /// Orthonormal bases of the three Peirce spaces, indexed as
    /// `[V(c,0), V(c,1/2), V(c,1)]`.
    pub fn peirce_decomposition(&self) -> Result<[Vec<Element>; 3]> {
        let residual = self.idempotent_residual();
        if residual > IDEMPOTENT_TOL {
            return Err(Error::NotIdempotent { residual });
        }
        let n = self.algebra.dim;
        let eig = jacobi_eigen(&self.multiplication_matrix(), n)?;
        let mut spaces: [Vec<Element>; 3] = Default::default();
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            let idx = PeirceIndex::snap(*lambda).ok_or(Error::PeirceSpectrum(*lambda))?;
            let slot = match idx {
                PeirceIndex::Zero => 0,
                PeirceIndex::Half => 1,
                PeirceIndex::One => 2,
            };
            spaces[slot].push(Element::from_orthonormal_coords(&self.algebra, v)?);
        }
        Ok(spaces)
    }

    pub fn peirce_space(&self, index: PeirceIndex) -> Result<Vec<Element>> {
        let [zero, half, one] = self.peirce_decomposition()?;
        Ok(match index {
            PeirceIndex::Zero => zero,
            PeirceIndex::Half => half,
            PeirceIndex::One => one,
        })
    }

    /// Orthonormal basis of `V(c, 0) = ker L(c)`.
    pub fn peirce_zero_basis(&self) -> Result<Vec<Element>> {
        self.peirce_space(PeirceIndex::Zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ejalg::{Algebra, AlgebraKind};
    use std::sync::Arc;

    fn alg(s: &str) -> Arc<Algebra> {
        Algebra::new(s.parse::<AlgebraKind>().unwrap()).unwrap()
    }

    #[test]
    fn hermitian_corner_block() {
        let a = alg("herm-complex:3");
        let c = Element::diagonal(&a, &[1.0, 0.0, 0.0]).unwrap();
        let basis = c.peirce_zero_basis().unwrap();
        assert_eq!(basis.len(), 4);
        for b in &basis {
            let m = b.to_hermitian().unwrap();
            // zero first row and column
            for k in 0..3 {
                assert!(m[k].norm() < 1e-14 && m[3 * k].norm() < 1e-14);
            }
        }
        let [_, half, one] = c.peirce_decomposition().unwrap();
        assert_eq!((half.len(), one.len()), (4, 1));
    }

    #[test]
    fn unit_has_trivial_zero_space() {
        for s in ["sym-real:3", "spin:4", "direct-sum(spin:3,herm-complex:2)"] {
            let e = Element::unit(&alg(s));
            assert!(e.peirce_zero_basis().unwrap().is_empty());
        }
    }

    // brute force: kernel of L(c) assembled column by column from products
    // with coordinate vectors, solved by Gaussian elimination
    fn kernel_dimension_by_elimination(c: &Element) -> usize {
        let n = c.algebra().dim();
        let mut cols = Vec::new();
        for j in 0..n {
            let mut v = vec![0.0; n];
            v[j] = 1.0;
            let e = Element::new(c.algebra(), v).unwrap();
            cols.push(c.jordan(&e).unwrap().into_coords());
        }
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()));
            let Some(p) = pivot else { break };
            if m[p][col].abs() < 1e-10 {
                continue;
            }
            m.swap(rank, p);
            for r in 0..n {
                if r != rank {
                    let f = m[r][col] / m[rank][col];
                    for k in 0..n {
                        m[r][k] -= f * m[rank][k];
                    }
                }
            }
            rank += 1;
        }
        n - rank
    }

    #[test]
    fn spin_primitive_zero_space_is_complementary_idempotent() {
        for m in 3..=7 {
            let a = alg(&format!("spin:{m}"));
            let mut w = vec![0.0; m];
            w[0] = 0.5;
            w[1] = 0.3;
            w[2] = -0.4;
            let c = Element::new(&a, w).unwrap();
            assert!(c.idempotent_residual() < 1e-15);
            let basis = c.peirce_zero_basis().unwrap();
            assert_eq!(basis.len(), kernel_dimension_by_elimination(&c));
            assert_eq!(basis.len(), 1);
            let e_minus_c = &Element::unit(&a) - &c;
            let b = &basis[0];
            let cos = b.inner(&e_minus_c).unwrap() / (b.norm() * e_minus_c.norm());
            assert!((cos.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_idempotent() {
        let a = alg("sym-real:2");
        let x = Element::diagonal(&a, &[2.0, 0.0]).unwrap();
        assert!(matches!(x.peirce_zero_basis(), Err(Error::NotIdempotent { .. })));
    }
}
