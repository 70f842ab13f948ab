//! Sedenion zero divisors through the determinant of left multiplication.
//!
//! The crate provides exact and floating-point Cayley–Dickson arithmetic,
//! multiplication operator matrices with exact determinants, the quartic
//! invariants `D1`, `D2` of a sedenion `v = v1 + v2 e8`, the coefficient fit of
//! `det M(v)` in those invariants, the cyclic slice model with marching
//! squares/cubes extraction, and discrete Levi–Civita transport of orthonormal
//! 2-frames in R^8.

pub mod cd_algebra;
pub mod coeff_solver;
pub mod error;
pub mod holonomy;
pub mod invariants;
pub mod isosurface;
pub mod manifest;
pub mod mult_operator;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod slice_model;

pub use cd_algebra::{cd_multiply, join, split, BasisTable, CdElement, OctonionPair};
pub use error::{Result, SedError};
pub use scalar::{Rational, Scalar};
