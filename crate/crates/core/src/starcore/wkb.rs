//! WKB: conjugating a Hamiltonian by the Weyl-ordered evolution of a closed
//! real one-form and reading off the transport hierarchy.

use num_traits::One;

use super::evolution::{d_series, exp_f};
use super::{FormalOneForm, StarContext, StarError};
use crate::field::PhaseField;
use crate::geometry::LinDiffOp;
use crate::poly::{factorial, PhaseSymbol};
use crate::scalars::{rat, Gauss, Rat};

#[derive(Clone, Debug)]
pub struct WkbResult {
    /// `𝒜_W^{-1} H`.
    pub symbol: PhaseSymbol,
    /// `ρ_W(𝒜_W^{-1} H)`.
    pub operator: LinDiffOp,
    /// λ-coefficients of `operator`; entry `k` is the order-`k` transport operator.
    pub hierarchy: Vec<LinDiffOp>,
}

/// `𝒜_W^{-1} H` and its Weyl representation for a closed real `A₀`.
///
/// The Weyl evolution of `A₀` is `φ_1^* exp(−F_γ)` with
/// `γ = [sin(λD/2)/(λD/2) − id] A₀`, only even powers of `D` appearing.
pub fn wkb_evolver(
    ctx: &StarContext,
    a0: &FormalOneForm,
    h: &PhaseSymbol,
) -> Result<WkbResult, StarError> {
    if !a0.is_closed() {
        return Err(StarError::NotClosed);
    }
    if a0.valuation().is_some_and(|v| v != 0)
        || a0
            .components()
            .iter()
            .any(|c| c.max_lambda().unwrap_or(0) > 0 || !c.is_real())
    {
        return Err(StarError::NonRealLeadingOrder { what: "A₀" });
    }
    let order = ctx.order();
    // sin(x)/x − 1 = Σ_{j≥1} (−1)^j x^{2j}/(2j+1)!, x = λD/2
    let gamma = d_series(ctx.geometry(), &a0.generating_poly(), 0, order, |m| {
        if m == 0 || m % 2 == 1 {
            Gauss::zero()
        } else {
            let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
            Gauss::real(
                rat(sign, 1) * Rat::from_integer(1.into())
                    / (factorial(m + 1) * Rat::from_integer(2i64.pow(m).into())),
            )
        }
    });
    // 𝒜_W(−1) = φ_{−1}^* exp(+F_γ)
    let symbol = exp_f(&gamma, &Rat::one(), h, order).shift_momenta(&a0.shift(&Gauss::one()));
    let weyl = ctx.clone().with_kappa(rat(1, 2))?;
    let operator = weyl.rho_kappa(&symbol);
    let top = operator
        .terms()
        .values()
        .filter_map(|c| c.max_lambda())
        .max()
        .unwrap_or(0);
    let hierarchy = (0..=top.min(order))
        .map(|k| operator.lambda_coeff(k))
        .collect();
    Ok(WkbResult {
        symbol,
        operator,
        hierarchy,
    })
}

/// `H(q, A₀(q)) − E`, the order-zero residual of the eigenvalue problem.
pub fn hamilton_jacobi_residual(h: &PhaseSymbol, a0: &FormalOneForm, e: &Gauss) -> PhaseSymbol {
    let dim = h.dim();
    let shifted = h.shift_momenta(a0.components()).iota();
    &shifted - &PhaseSymbol::constant(dim, e.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;
    use crate::poly::{EXACT, MAX_DIM};

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    #[test]
    fn quadratic_hamiltonians_are_shifted() {
        let g = GeometryBuilder::new(1)
            .christoffel(0, 0, 0, s("q1", 1))
            .build()
            .unwrap();
        let ctx = StarContext::new(g);
        let a0 = FormalOneForm::differential(&s("q1^3", 1));
        let h = s("(1/2)*p1^2 + q1*p1 + q1^2", 1);
        let r = wkb_evolver(&ctx, &a0, &h).unwrap();
        assert_eq!(
            r.symbol,
            h.shift_momenta(a0.components()).truncate(ctx.order())
        );
    }

    #[test]
    fn zero_form_is_identity() {
        let ctx = StarContext::flat(2);
        let h = s("p1^3 + q2*p2", 2);
        let r = wkb_evolver(&ctx, &FormalOneForm::zero(2), &h).unwrap();
        assert_eq!(r.symbol, h.truncate(6));
    }

    #[test]
    fn agrees_with_weyl_evolution() {
        let g = GeometryBuilder::new(1)
            .christoffel(0, 0, 0, s("1 + q1", 1))
            .build()
            .unwrap();
        let ctx = StarContext::new(g).with_kappa(rat(1, 2)).unwrap();
        let a0 = FormalOneForm::differential(&s("q1^3 - q1", 1));
        let h = s("p1^4 + q1*p1^3", 1);
        let r = wkb_evolver(&ctx, &a0, &h).unwrap();
        assert_eq!(r.symbol, ctx.evolve(&a0, &-Rat::one(), &h));
        assert_ne!(r.symbol, h.shift_momenta(a0.components()).truncate(6));
    }

    #[test]
    fn leading_order_is_hamilton_jacobi() {
        let ctx = StarContext::flat(1);
        let a0 = FormalOneForm::new(vec![s("2", 1)]);
        let h = s("p1^2", 1);
        let r = wkb_evolver(&ctx, &a0, &h).unwrap();
        let e = Gauss::int(4);
        let lead = r.hierarchy[0].coeff(&[0; MAX_DIM]);
        assert_eq!(
            &lead - &PhaseSymbol::constant(1, e.clone()),
            hamilton_jacobi_residual(&h, &a0, &e)
        );
        assert!(hamilton_jacobi_residual(&h, &a0, &e).is_zero());
        // ρ_W((p + 2)²) = (−iλ∂)² − 4iλ∂ + 4
        assert_eq!(
            r.hierarchy[1],
            LinDiffOp::partial(1, 0, EXACT).scale(&s("-4*i", 1))
        );
    }

    #[test]
    fn rejects_non_closed() {
        let ctx = StarContext::flat(2);
        let a0 = FormalOneForm::new(vec![s("q2", 2), s("0", 2)]);
        assert!(matches!(
            wkb_evolver(&ctx, &a0, &s("p1", 2)),
            Err(StarError::NotClosed)
        ));
    }
}
