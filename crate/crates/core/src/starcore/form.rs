use crate::geometry::{exterior_derivative, SymField, TwoForm};
use crate::poly::{Mono, PhaseSymbol, EXACT};
use crate::scalars::Gauss;

/// A one-form `A = Σ_j A_j(q, λ) dq^j` on the base, formal in λ.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalOneForm {
    comps: Vec<PhaseSymbol>,
}

impl FormalOneForm {
    /// Panics if a component depends on the momenta.
    pub fn new(comps: Vec<PhaseSymbol>) -> Self {
        assert!(
            comps.iter().all(|c| c.p_degree() == 0),
            "one-form components must be base functions"
        );
        let dim = comps.len();
        FormalOneForm {
            comps: comps.into_iter().map(|c| c.with_dim(dim)).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        FormalOneForm {
            comps: vec![PhaseSymbol::zero(dim, EXACT); dim],
        }
    }

    /// `du`.
    pub fn differential(u: &PhaseSymbol) -> Self {
        Self::new((0..u.dim()).map(|j| u.d_q(j)).collect())
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[PhaseSymbol] {
        &self.comps
    }

    pub fn component(&self, j: usize) -> &PhaseSymbol {
        &self.comps[j]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(PhaseSymbol::is_zero)
    }

    pub fn d(&self) -> TwoForm {
        exterior_derivative(&self.comps)
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    pub fn valuation(&self) -> Option<i32> {
        self.comps.iter().filter_map(PhaseSymbol::valuation).min()
    }

    pub fn lambda_coeff(&self, k: i32) -> Self {
        FormalOneForm {
            comps: self.comps.iter().map(|c| c.lambda_coeff(k)).collect(),
        }
    }

    /// The λ⁰ part `A₀`.
    pub fn a0(&self) -> Self {
        self.lambda_coeff(0)
    }

    pub fn is_real_at_order_zero(&self) -> bool {
        self.comps.iter().all(|c| c.lambda_coeff(0).is_real())
    }

    pub fn add(&self, o: &Self) -> Self {
        FormalOneForm {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FormalOneForm {
            comps: self
                .comps
                .iter()
                .zip(&o.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &PhaseSymbol) -> Self {
        FormalOneForm {
            comps: self.comps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn truncate(&self, order: i32) -> Self {
        FormalOneForm {
            comps: self.comps.iter().map(|a| a.truncate(order)).collect(),
        }
    }

    /// `(λ∂_λ − id) A`.
    pub fn euler_minus_id(&self) -> Self {
        FormalOneForm {
            comps: self.comps.iter().map(|a| &a.lambda_euler() - a).collect(),
        }
    }

    /// `A(X) = Σ A_j X^j`.
    pub fn eval(&self, x: &[PhaseSymbol]) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim(), EXACT);
        for (a, xj) in self.comps.iter().zip(x) {
            out = &out + &(a * xj);
        }
        out
    }

    /// Generating polynomial `Σ A_j v^j` (fiber variables in the momentum slots).
    pub fn generating_poly(&self) -> PhaseSymbol {
        let dim = self.dim();
        let mut out = PhaseSymbol::zero(dim, EXACT);
        for (j, a) in self.comps.iter().enumerate() {
            out = &out + &a.mul_term(&Gauss::one(), Mono::p(j));
        }
        out
    }

    /// `u` with `du = A` and `u(0) = 0`, for closed `A` (radial homotopy).
    pub fn primitive(&self) -> Option<PhaseSymbol> {
        if !self.is_closed() {
            return None;
        }
        let dim = self.dim();
        let mut u = PhaseSymbol::zero(dim, EXACT);
        for (j, a) in self.comps.iter().enumerate() {
            for (m, c) in a.terms() {
                let r = crate::scalars::rat(1, m.q_degree() as i64 + 1);
                u.add_term(m.mul(Mono::q(j)), &c.scale(&r));
            }
        }
        Some(u)
    }

    pub fn as_sym_field(&self) -> SymField {
        SymField::one_form(&self.comps)
    }

    /// Negated components: the momentum shift `p ↦ p + t·A` as substitution data.
    pub(crate) fn shift(&self, t: &Gauss) -> Vec<PhaseSymbol> {
        self.comps.iter().map(|a| a.scale(t)).collect()
    }
}
