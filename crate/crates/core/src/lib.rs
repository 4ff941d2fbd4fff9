//! Koshliakov's generalization of the Abel–Plana summation formula.
//!
//! Eigenvalue nodes, kernels, Koshliakov zeta functions, a quadrature engine
//! with principal values, and two-sided verification of the summation
//! formulas and transformation identities built on them.

// guards are written `!(x > 0.0)` on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
pub mod eigen;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod quad;
pub mod report;
mod series;
pub mod special;
pub mod sumform;
pub mod testfns;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
