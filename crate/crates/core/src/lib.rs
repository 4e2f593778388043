//! Exact deformation quantization on cotangent bundles of charted base manifolds.
//!
//! The crate is layered: [`scalars`] (λ-series over Gaussian rationals),
//! [`poly`] (phase-space polynomials), [`geometry`] (connections, symmetric
//! tensors and the fiberwise operators), [`starcore`] (κ-ordered and magnetic
//! star products) and [`reps`] (representations on functions and local
//! sections).

// Tensor code indexes several arrays by the same coordinate index.
#![allow(clippy::needless_range_loop)]

pub mod exec;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod poly;
pub mod random;
pub mod report;
pub mod reps;
pub mod scalars;
pub mod starcore;
pub mod verify;
