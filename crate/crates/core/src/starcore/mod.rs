//! Star products on cotangent bundles: the standard-order representation,
//! the κ-ordered family, quantized fiber translations and magnetic products.
//!
//! Symbols are functions on `T*Q` polynomial in the momenta.  The chart
//! geometry supplies a torsion-free connection and a density; the products
//! are exact and truncated at a fixed order in λ.

mod context;
mod evolution;
mod form;
pub(crate) mod half;
mod products;
mod rep;
mod wkb;

pub use context::{Atlas, AtlasError, StarContext};
pub use evolution::{delta_coefficient, evolution_form, lambda_euler_check, nalpha_factor_check};
pub use form::FormalOneForm;
pub use half::{
    b_mu, bullet_star0, half_density_potential, half_density_rep, half_density_rep_frame,
    half_weyl_star,
};
pub use products::{homogeneity, kappa_bidiff_terms, star0_flat, star_kappa_flat};
pub use rep::{LaurentPolicy, StandardRep};
pub use wkb::{hamilton_jacobi_residual, wkb_evolver, WkbResult};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("no vector potential attached to chart `{chart}`")]
    PotentialMissing { chart: String },
    #[error("magnetic field must be of the form λ·B₁")]
    BNotFirstOrder,
    #[error("one-form is not closed")]
    NotClosed,
    #[error("magnetic field is not closed")]
    MagneticNotClosed,
    #[error("dA differs from B on chart `{chart}`")]
    PotentialMismatch { chart: String },
    #[error("order-zero part of {what} must be real")]
    NonRealLeadingOrder { what: &'static str },
    #[error("computation needs negative powers of λ but Laurent mode is disabled")]
    LaurentRequired,
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("potentials on `{a}` and `{b}` do not differ by a closed form")]
    OverlapNotClosed { a: String, b: String },
    #[error("operation needs exact polynomial symbols on a curved chart")]
    Unsupported,
    #[error("ordering parameter κ = {0} is outside [0, 1]")]
    KappaOutOfRange(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
