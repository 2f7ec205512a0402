//! Thompson-metric geometry on symmetric cones.
//!
//! The crate computes Thompson distances, canonical and power geodesics and
//! midpoints, and the affine span and dimension of the set of Thompson
//! midpoints `M(x, y)` via Peirce decompositions. Independent numerical
//! oracles (perturbation tests, Monte-Carlo sampling, grid enumeration)
//! verify each prediction.
//!
//! ```
//! use conemid::conegeom::SymmetricCone;
//! use conemid::midspan::{MidpointSpan, MidspanOptions};
//! use conemid::oracle::{verify, SampleOptions};
//! use conemid::thompson::{canonical_midpoint, distance};
//! use conemid::{Algebra, AlgebraKind, Element};
//!
//! # fn main() -> conemid::Result<()> {
//! let alg = Algebra::new("herm-complex:3".parse::<AlgebraKind>()?)?;
//! let cone = SymmetricCone::new(alg.clone());
//! let x = Element::diagonal(&alg, &[4.0, 2.0, 1.0])?;
//! let y = Element::unit(&alg);
//!
//! let d = distance(&cone, &x, &y)?;
//! assert!((d - 4f64.ln()).abs() < 1e-14);
//! let m = canonical_midpoint(&cone, &x, &y)?;
//! assert!(m.distance_to(&Element::diagonal(&alg, &[2.0, 4.0 / 3.0, 1.0])?) < 1e-12);
//! let span = cone.midpoint_span(&x, &y, &MidspanOptions::default())?;
//! assert_eq!(span.dimension, 4);
//! let check = verify(&cone, &x, &y, &span, &SampleOptions::default())?;
//! assert!(check.passed());
//! # Ok(())
//! # }
//! ```

pub mod conegeom;
pub mod ejalg;
pub mod error;
pub mod linalg;
pub mod midspan;
pub mod oracle;
pub mod random;
pub mod selftest;
pub mod thompson;

pub use ejalg::{Algebra, AlgebraKind, ConeMembership, Element};
pub use error::{Error, Result};
