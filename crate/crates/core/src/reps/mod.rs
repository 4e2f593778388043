//! Representations of the magnetic products on functions, on local sections
//! of line bundles and on half-densities, together with intertwiners and the
//! adjointness and positivity checks behind the GNS picture.

mod bundle;
mod factor;
mod functional;
mod intertwiner;

pub use bundle::{LineBundleLocal, LocalSection, SectionLocal};
pub use factor::ds_gamma_factor_check;
pub use functional::{
    adjoint_defect, cauchy_schwarz_check, omega, positivity_check, Functional, PositivityReport,
    Quadrature,
};
pub use intertwiner::{AbChart, AbIntertwiner, AbVerdict, ResidueDecl};

use thiserror::Error;

use crate::field::PhaseField;
use crate::poly::PhaseSymbol;
use crate::starcore::{LaurentPolicy, StarContext, StarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("section violates the transition relation between `{a}` and `{b}`")]
    TransitionMismatch { a: String, b: String },
    #[error("overlap `{a}`/`{b}` has no transition phase")]
    MissingTransition { a: String, b: String },
    #[error("coupling (i/λ)A needs negative powers of λ but Laurent mode is disabled")]
    LaurentRequired,
    #[error("dS does not match A − A' on chart `{chart}`")]
    CochainMismatch { chart: String },
    #[error("functional returned a non-real value at order λ^{order}")]
    NonRealResult { order: i32 },
    #[error("numeric checks need a flat chart")]
    NeedsFlatChart,
    #[error(transparent)]
    Star(#[from] StarError),
}

/// `ρ^A_κ(f)u`, with `A` the potential attached to `ctx`.
///
/// For `A = λA₁ + …` this is the minimally coupled formula with slots
/// `D + (i/λ)A`; a nonzero `A₀` makes the coupling itself singular in λ,
/// which [`LaurentPolicy::Forbid`] rejects.
pub fn rep_a<F: PhaseField>(
    ctx: &StarContext,
    f: &PhaseSymbol,
    u: &F,
    policy: LaurentPolicy,
) -> Result<F, RepError> {
    if policy == LaurentPolicy::Forbid {
        if let Some(a) = ctx.potential() {
            if !a.a0().is_zero() {
                return Err(RepError::LaurentRequired);
            }
        }
    }
    Ok(ctx.rho_a(f).apply_field(u))
}
