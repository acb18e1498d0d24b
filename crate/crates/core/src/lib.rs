//! Exact arithmetic for the tilting semigroup of finitely supported measures.
//!
//! The crate works with probability-generating functions as dense rational
//! polynomials. It provides the exponential tilt `p(x) -> p(g x) / p(g)`,
//! exact membership tests for the cones of non-negative-coefficient and
//! positive-on-(0, inf) polynomials, Pólya-type positivity certificates, an
//! exact simplex with Farkas certificates, separating witnesses between
//! cones, real factorization into irreducible shapes, and a verifier that
//! decides whether a finite multiplicative table is a tilt.

pub mod certificates;
pub mod endo;
pub mod factorization;
pub mod grid;
pub mod lp;
pub mod poly;
pub mod positivity;
pub mod rational;
pub mod separation;
pub mod tilting;

pub use certificates::{polya_exponent, verify_certificate, CertError, PolyaCertificate};
pub use endo::{
    approx_23, extend_map, homogeneity_residuals, interval_orbit, pi_conjugate, pi_inverse, quad_image,
    verify_is_tilting, EndoError, EndoTable, PhiTable, Violation,
};
pub use factorization::{enumerate_p_factorizations, factor_real, FactorError, FactorList, PFactorization};
pub use grid::{conv, to_grid, GridError, GridMeasure};
pub use lp::{lp_feasibility, LpInstance, LpOutcome};
pub use poly::{Poly, PolyError};
pub use positivity::{in_m, is_nonneg, positive_root_count, PositivityError, SturmChain};
pub use rational::Rational;
pub use separation::{in_cone, separate, separate_dense, SeparationError, SeparationWitness};
pub use tilting::{tilt, tilt_measure, TiltError};
