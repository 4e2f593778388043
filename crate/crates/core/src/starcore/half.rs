//! Half-densities: the standard-order representation on `|Λ|^{1/2}`, the
//! product it induces, its Weyl-ordered counterpart and the isomorphism
//! `ℬ_μ` from the ordinary Weyl product.

use std::sync::Arc;

use num_traits::One;

use super::evolution::{d_series, exp_f};
use super::{FormalOneForm, StandardRep, StarContext, StarError};
use crate::field::PhaseField;
use crate::geometry::LinDiffOp;
use crate::poly::{factorial, PhaseSymbol};
use crate::scalars::{rat, Gauss, Rat};

/// `A = −(iλ/2) α_μ`.
pub fn half_density_potential(ctx: &StarContext) -> FormalOneForm {
    let c = PhaseSymbol::lambda_pow(ctx.dim(), Gauss::imag(rat(-1, 2)), 1);
    FormalOneForm::new(
        (0..ctx.dim())
            .map(|j| ctx.geometry().alpha(j) * &c)
            .collect(),
    )
}

fn half_rep(ctx: &StarContext) -> StandardRep {
    StandardRep::new(
        Arc::new(ctx.geometry().clone()),
        Some(&half_density_potential(ctx)),
        ctx.order(),
    )
}

/// `ρ̂_0(f)` in the trivialization `ν = v μ^{1/2}`: the standard-order
/// representation coupled to `−(iλ/2) α_μ`.
pub fn half_density_rep(ctx: &StarContext, f: &PhaseSymbol) -> LinDiffOp {
    half_rep(ctx).rho(f)
}

/// `ρ̂_0(f)` computed in the coordinate frame `|dq|^{1/2}` (where `∇` acts
/// through `−½ tr Γ`) and then transported to the `μ^{1/2}` frame by
/// conjugation with `m^{1/2}`, `μ = m|dq|`.
///
/// Needs `d(α_μ + tr Γ) = 0`, i.e. α_μ must come from an actual density.
pub fn half_density_rep_frame(ctx: &StarContext, f: &PhaseSymbol) -> Result<LinDiffOp, StarError> {
    let g = ctx.geometry();
    let n = g.dim();
    let tr: Vec<PhaseSymbol> = (0..n)
        .map(|k| {
            (0..n).fold(PhaseSymbol::zero(n, f.order()), |acc, j| {
                &acc + g.christoffel(j, j, k)
            })
        })
        .collect();
    let dlogm = FormalOneForm::new((0..n).map(|j| g.alpha(j) + &tr[j]).collect());
    if !dlogm.is_closed() {
        return Err(StarError::NotClosed);
    }
    let c = PhaseSymbol::lambda_pow(n, Gauss::imag(rat(1, 2)), 1);
    let frame_potential = FormalOneForm::new(tr.iter().map(|t| t * &c).collect());
    let rep = StandardRep::new(Arc::new(g.clone()), Some(&frame_potential), ctx.order());
    let half: Vec<PhaseSymbol> = dlogm
        .components()
        .iter()
        .map(|x| x.scale(&Gauss::frac(1, 2)))
        .collect();
    Ok(rep
        .rho(f)
        .conjugate_by_exp(&half)
        .weight_truncate(ctx.order()))
}

/// `•_0`: the standard-order product represented by `ρ̂_0`.
pub fn bullet_star0(ctx: &StarContext, f: &PhaseSymbol, g: &PhaseSymbol) -> PhaseSymbol {
    half_rep(ctx).star(f, g)
}

pub(crate) fn n_half_unimodular<F: PhaseField>(ctx: &StarContext, f: &F, direction: i32) -> F {
    let c = Gauss::imag(-rat(direction.signum() as i64, 2));
    super::products::exp_laplacian(
        ctx.geometry(),
        &c,
        &Rat::from_integer(0.into()),
        f,
        ctx.order(),
    )
}

/// `f ★̂_W g = N_{1/2}(0)^{-1}(N_{1/2}(0) f •_0 N_{1/2}(0) g)`.
pub fn half_weyl_star(ctx: &StarContext, f: &PhaseSymbol, g: &PhaseSymbol) -> PhaseSymbol {
    let h = bullet_star0(
        ctx,
        &n_half_unimodular(ctx, f, 1),
        &n_half_unimodular(ctx, g, 1),
    );
    n_half_unimodular(ctx, &h, -1)
}

/// `ℬ_μ = exp(F_{[(cosh(iλD/2) − id)/D] α_μ})`, which equals
/// `𝒜_W^{-1} N_{1/2}(α_μ)^{-1} N_{1/2}(0)` and satisfies
/// `ℬ_μ(f ★̂_W g) = ℬ_μ f ★_W ℬ_μ g`.
pub fn b_mu<F: PhaseField>(ctx: &StarContext, f: &F) -> F {
    let alpha = ctx.geometry().alpha_form().into_poly();
    // (cosh(iλD/2) − 1)/D = Σ_{m≥1} (iλ/2)^{2m}/(2m)! D^{2m−1}
    let g = d_series(ctx.geometry(), &alpha, 1, ctx.order(), |k| {
        if k % 2 == 1 {
            Gauss::imag(rat(1, 2))
                .pow(k + 1)
                .scale(&(Rat::one() / factorial(k + 1)))
        } else {
            Gauss::zero()
        }
    });
    exp_f(&g, &Rat::one(), f, ctx.order())
}
