//! Exact nonnegative factorizations of rank-3 matrices and small extended
//! formulations of convex polygons.

pub mod error;
pub mod exact;
pub mod fixtures;
pub mod gen;
pub mod hepta;
pub mod monomial;
pub mod nmf;
pub mod polygon;
pub mod psi;
pub mod report;
pub mod section;
pub mod selftest;

pub use error::{Error, Result};
pub use exact::{Matrix, Scalar};
pub use nmf::{nn_factor, verify_nn_factorization, NNFactorization};
pub use polygon::{
    build_extension, polygon_from_points, verify_extension, ExtendedFormulation, Polygon2D,
};
pub use psi::PsiVector;
pub use report::VerificationReport;
