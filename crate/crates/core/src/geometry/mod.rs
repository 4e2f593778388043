//! Charted base geometry: a torsion-free connection, the one-form α_μ of a
//! volume density, symmetric tensor fields, and the fiberwise operators built
//! from them.

mod config;
mod linop;
mod ops;
mod tensors;

pub use config::{AtlasConfig, ChartConfig, ConfigError, OverlapConfig};
pub use linop::LinDiffOp;
pub use ops::{
    apply_f, curvature_trace, div_mu, j_inv, j_map, laplacian, laplacian_mu, sym_cov_deriv,
};
#[allow(unused_imports)]
pub(crate) use ops::{apply_f_poly, sym_cov_deriv_poly};
pub use tensors::{exterior_derivative, SymField, TwoForm, Variance};

use thiserror::Error;

use crate::poly::{Mono, PhaseSymbol, EXACT};
use crate::scalars::Gauss;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("Christoffel symbols are not symmetric: Γ^{l}_{{{j}{k}}} ≠ Γ^{l}_{{{k}{j}}}")]
    NotTorsionFree { l: usize, j: usize, k: usize },
    #[error("chart data must be real, λ-free polynomials ({what})")]
    NonRationalChartData { what: String },
    #[error("expected a {expected} tensor")]
    VarianceMismatch { expected: &'static str },
    #[error("divergence of a degree-zero field")]
    DegreeZero,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// One chart of the base manifold.
#[derive(Clone, Debug)]
pub struct BaseGeometry {
    id: String,
    dim: usize,
    gamma: Vec<PhaseSymbol>,
    alpha: Vec<PhaseSymbol>,
    /// `G_l(q, v) = Σ_{ij} Γ^l_{ij} v^i v^j`, with the fiber variables in the momentum slots.
    spray: Vec<PhaseSymbol>,
    /// `Σ_l p_l Γ^l_{jk}` for `j ≤ k`, doubled off the diagonal.
    lap_second: Vec<(usize, usize, PhaseSymbol)>,
    /// `Σ_j Γ^j_{jk}`.
    lap_first: Vec<PhaseSymbol>,
}

fn check_chart_poly(p: &PhaseSymbol, what: &str) -> Result<(), GeometryError> {
    let ok = p.is_real()
        && p.terms()
            .all(|(m, _)| m.lam_exp() == 0 && m.p_degree() == 0);
    if ok {
        Ok(())
    } else {
        Err(GeometryError::NonRationalChartData {
            what: what.to_string(),
        })
    }
}

impl BaseGeometry {
    /// Flat chart: Γ = 0, Lebesgue density.
    pub fn flat(dim: usize) -> Self {
        Self::new(
            "flat",
            dim,
            vec![PhaseSymbol::zero(dim, EXACT); dim * dim * dim],
            vec![PhaseSymbol::zero(dim, EXACT); dim],
        )
        .expect("flat chart is valid")
    }

    /// `gamma[(l*dim + j)*dim + k] = Γ^l_{jk}`.
    pub fn new(
        id: &str,
        dim: usize,
        gamma: Vec<PhaseSymbol>,
        alpha: Vec<PhaseSymbol>,
    ) -> Result<Self, GeometryError> {
        if gamma.len() != dim * dim * dim {
            return Err(GeometryError::DimensionMismatch(
                gamma.len(),
                dim * dim * dim,
            ));
        }
        if alpha.len() != dim {
            return Err(GeometryError::DimensionMismatch(alpha.len(), dim));
        }
        for l in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let g = &gamma[(l * dim + j) * dim + k];
                    check_chart_poly(g, "Christoffel symbol")?;
                    if *g != gamma[(l * dim + k) * dim + j] {
                        return Err(GeometryError::NotTorsionFree {
                            l: l + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        for a in &alpha {
            check_chart_poly(a, "α_μ")?;
        }
        let gamma: Vec<PhaseSymbol> = gamma
            .into_iter()
            .map(|g| g.with_dim(dim).with_order(EXACT))
            .collect();
        let alpha: Vec<PhaseSymbol> = alpha
            .into_iter()
            .map(|a| a.with_dim(dim).with_order(EXACT))
            .collect();
        let g = |l: usize, j: usize, k: usize| &gamma[(l * dim + j) * dim + k];
        let mut spray = Vec::new();
        for l in 0..dim {
            let mut s = PhaseSymbol::zero(dim, EXACT);
            for i in 0..dim {
                for j in 0..dim {
                    s = &s
                        + &(g(l, i, j)
                            * &PhaseSymbol::monomial(
                                dim,
                                Gauss::one(),
                                Mono::p(i).mul(Mono::p(j)),
                                EXACT,
                            ));
                }
            }
            spray.push(s);
        }
        let mut lap_second = Vec::new();
        for j in 0..dim {
            for k in j..dim {
                let mut s = PhaseSymbol::zero(dim, EXACT);
                for l in 0..dim {
                    s = &s + &(g(l, j, k) * &PhaseSymbol::p(dim, l));
                }
                if j != k {
                    s = s.scale(&Gauss::int(2));
                }
                if !s.is_zero() {
                    lap_second.push((j, k, s));
                }
            }
        }
        let lap_first = (0..dim)
            .map(|k| (0..dim).fold(PhaseSymbol::zero(dim, EXACT), |acc, j| &acc + g(j, j, k)))
            .collect();
        Ok(BaseGeometry {
            id: id.to_string(),
            dim,
            gamma,
            alpha,
            spray,
            lap_second,
            lap_first,
        })
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.to_string();
        self
    }

    /// Replaces α_μ.
    pub fn with_alpha(self, alpha: Vec<PhaseSymbol>) -> Result<Self, GeometryError> {
        let id = self.id.clone();
        Self::new(&id, self.dim, self.gamma, alpha)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^l_{jk}` (zero-based indices).
    pub fn christoffel(&self, l: usize, j: usize, k: usize) -> &PhaseSymbol {
        &self.gamma[(l * self.dim + j) * self.dim + k]
    }

    pub fn alpha(&self, j: usize) -> &PhaseSymbol {
        &self.alpha[j]
    }

    /// α_μ as a covariant one-form.
    pub fn alpha_form(&self) -> SymField {
        SymField::one_form(&self.alpha)
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().all(PhaseSymbol::is_zero)
    }

    pub fn is_unimodular(&self) -> bool {
        self.alpha.iter().all(PhaseSymbol::is_zero)
    }

    pub(crate) fn spray(&self, l: usize) -> &PhaseSymbol {
        &self.spray[l]
    }

    pub(crate) fn lap_second(&self) -> &[(usize, usize, PhaseSymbol)] {
        &self.lap_second
    }

    pub(crate) fn lap_first(&self, k: usize) -> &PhaseSymbol {
        &self.lap_first[k]
    }
}

/// Builder that fills symmetric Christoffel entries.
pub struct GeometryBuilder {
    id: String,
    dim: usize,
    gamma: Vec<PhaseSymbol>,
    alpha: Vec<PhaseSymbol>,
}

impl GeometryBuilder {
    pub fn new(dim: usize) -> Self {
        GeometryBuilder {
            id: "chart".into(),
            dim,
            gamma: vec![PhaseSymbol::zero(dim, EXACT); dim * dim * dim],
            alpha: vec![PhaseSymbol::zero(dim, EXACT); dim],
        }
    }

    pub fn id(mut self, id: &str) -> Self {
        self.id = id.into();
        self
    }

    /// Sets `Γ^l_{jk} = Γ^l_{kj}` (zero-based indices).
    pub fn christoffel(mut self, l: usize, j: usize, k: usize, value: PhaseSymbol) -> Self {
        let n = self.dim;
        self.gamma[(l * n + j) * n + k] = value.clone();
        self.gamma[(l * n + k) * n + j] = value;
        self
    }

    pub fn alpha(mut self, j: usize, value: PhaseSymbol) -> Self {
        self.alpha[j] = value;
        self
    }

    pub fn build(self) -> Result<BaseGeometry, GeometryError> {
        BaseGeometry::new(&self.id, self.dim, self.gamma, self.alpha)
    }
}
