//! Numeric κ-ordered quantization on flat periodic grids.
//!
//! Operators `Op_{ħ,κ}(a)` act on sampled functions through spectral
//! transforms; the module-level checks compare them with the exact
//! representations of the core crate evaluated at `λ = ħ`.

pub mod calculus;
pub mod compiled;
pub mod grid;
pub mod operator;
pub mod suites;
pub mod symbol;
pub mod table;
pub mod trace;

pub use calculus::{
    formal_vs_numeric, formal_vs_numeric_all, op_compose_defect, op_compose_defect_poly,
    ComposeDefect,
};
pub use grid::{Grid, GridFunction};
pub use operator::{op_quantize, op_quantize_poly, GridOperator};
pub use symbol::{n_op_apply, GridSymbol, SymbolFn};
pub use trace::{trace_defect, PhaseQuadrature};

use fiberstar::scalars::{Gauss, Rat};
use fiberstar::starcore::StarError;

#[derive(Debug, thiserror::Error)]
pub enum NumericError {
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("dense kernels are limited to {max} grid points, got {got}")]
    DenseTooLarge { max: usize, got: usize },
    #[error("the dense kernel needs a closed-form symbol")]
    MissingAnalytic,
    #[error("fiberwise quantization needs a flat dimension of 1 or 2, got {0}")]
    Dimension(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Star(#[from] StarError),
}

pub(crate) fn rat_f64(r: &Rat) -> f64 {
    Gauss::real(r.clone()).to_c64().0
}
