//! Products that only need derivatives: the flat standard-order formula,
//! the ordering operator `N_κ`, and the homogeneity derivation.

use crate::field::PhaseField;
use num_traits::One;

use crate::geometry::{laplacian, BaseGeometry};
use crate::poly::{multi_factorial, multi_indices, MultiIndex, PhaseSymbol};
use crate::scalars::{Gauss, Rat};

/// `f ★_0 g = Σ_β ((−iλ)^{|β|}/β!) ∂_p^β f · ∂_q^β g` on a flat chart.
pub fn star0_flat<F: PhaseField>(f: &F, g: &F, order: i32) -> F {
    let dim = f.dim();
    let base = f.valuation().unwrap_or(0) + g.valuation().unwrap_or(0);
    let mut out = f.times(g).truncate(order);
    let mut k = 1u32;
    while base + k as i32 <= order {
        let mut any = false;
        for beta in multi_indices(dim, k) {
            let df = f.dp_multi(&beta);
            if df.is_zero() {
                continue;
            }
            let dg = g.dq_multi(&beta);
            if dg.is_zero() {
                continue;
            }
            any = true;
            let c = Gauss::one()
                .mul_i_pow(3 * k as i32)
                .scale(&(Rat::one() / multi_factorial(&beta)));
            out = out.plus(&df.times(&dg).times_scalar(&c, k as i32).truncate(order));
        }
        if !any && f.p_degree_bound().is_some_and(|d| k > d) {
            break;
        }
        k += 1;
    }
    out
}

/// Terms `(β, γ, c)` of the order-`k` flat κ-ordered cochain
/// `C_k(f, g) = Σ c · ∂_p^β ∂_q^γ f · ∂_q^β ∂_p^γ g`, `|β| + |γ| = k`.
///
/// This is the closed form of `N_κ^{-1}(N_κ f ★_0 N_κ g)` with `α_μ = 0`:
/// `f ★_κ g = exp(−iλ[(1−κ) ∂_p^f ∂_q^g − κ ∂_q^f ∂_p^g]) (f ⊗ g)`.
pub fn kappa_bidiff_terms(dim: usize, kappa: &Rat, k: u32) -> Vec<(MultiIndex, MultiIndex, Gauss)> {
    let a = Gauss::imag(-(Rat::one() - kappa));
    let b = Gauss::imag(kappa.clone());
    let mut out = Vec::new();
    for j in 0..=k {
        let l = k - j;
        let c = &gauss_pow(&a, j) * &gauss_pow(&b, l);
        if c.is_zero() {
            continue;
        }
        for beta in multi_indices(dim, j) {
            for gamma in multi_indices(dim, l) {
                let w = Rat::one() / (multi_factorial(&beta) * multi_factorial(&gamma));
                out.push((beta, gamma, c.scale(&w)));
            }
        }
    }
    out
}

/// Flat `★_κ` with `α_μ = 0` via [`kappa_bidiff_terms`].
pub fn star_kappa_flat<F: PhaseField>(f: &F, g: &F, kappa: &Rat, order: i32) -> F {
    let base = f.valuation().unwrap_or(0) + g.valuation().unwrap_or(0);
    let mut out = f.times(g).truncate(order);
    for k in 1..=(order - base).max(0) as u32 {
        for (beta, gamma, c) in kappa_bidiff_terms(f.dim(), kappa, k) {
            let df = f.dp_multi(&beta).dq_multi(&gamma);
            if df.is_zero() {
                continue;
            }
            let dg = g.dq_multi(&beta).dp_multi(&gamma);
            if dg.is_zero() {
                continue;
            }
            out = out.plus(&df.times(&dg).times_scalar(&c, k as i32).truncate(order));
        }
    }
    out
}

fn gauss_pow(z: &Gauss, n: u32) -> Gauss {
    (0..n).fold(Gauss::one(), |acc, _| &acc * z)
}

/// `exp(c·λ·(Δ + t·F_{α_μ})) f` truncated at `order`.
pub(crate) fn exp_laplacian<F: PhaseField>(
    geom: &BaseGeometry,
    c: &Gauss,
    alpha_scale: &Rat,
    f: &F,
    order: i32,
) -> F {
    let mut out = f.truncate(order);
    if c.is_zero() {
        return out;
    }
    let alpha: Vec<PhaseSymbol> = (0..geom.dim())
        .map(|j| geom.alpha(j).scale_rat(alpha_scale))
        .collect();
    let mut term = out.clone();
    let mut k = 1u32;
    loop {
        let mut x = laplacian(geom, &term);
        for (j, a) in alpha.iter().enumerate() {
            if !a.is_zero() {
                x = x.plus(&term.dp(j).times_poly(a));
            }
        }
        term = x
            .times_scalar(&c.scale(&(Rat::one() / Rat::from_integer(k.into()))), 1)
            .truncate(order);
        if term.is_zero() {
            break;
        }
        out = out.plus(&term);
        k += 1;
    }
    out
}

/// `N_κ^{±1} f = exp(∓iκλΔ_μ) f`.
pub(crate) fn n_kappa<F: PhaseField>(
    geom: &BaseGeometry,
    kappa: &Rat,
    f: &F,
    direction: i32,
    order: i32,
) -> F {
    let c = Gauss::imag(-kappa.clone() * Rat::from_integer(direction.signum().into()));
    exp_laplacian(geom, &c, &Rat::one(), f, order)
}

/// `H = λ∂_λ + L_ξ`, with `L_ξ` the momentum-degree operator.
pub fn homogeneity(f: &PhaseSymbol) -> PhaseSymbol {
    &f.lambda_euler() + &f.momentum_euler()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::scalars::rat;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    #[test]
    fn flat_standard_order() {
        assert_eq!(
            star0_flat(&s("p1", 1), &s("q1", 1), 6),
            s("q1*p1 - i*l", 1).truncate(6)
        );
        assert_eq!(
            star0_flat(&s("q1", 1), &s("p1", 1), 6),
            s("q1*p1", 1).truncate(6)
        );
        assert_eq!(
            star0_flat(&s("p1^2", 1), &s("q1^2", 1), 6),
            s("q1^2*p1^2 - 4*i*l*q1*p1 - 2*l^2", 1).truncate(6)
        );
    }

    #[test]
    fn neumaier_operator() {
        let flat = BaseGeometry::flat(1);
        let half = rat(1, 2);
        assert_eq!(
            n_kappa(&flat, &half, &s("q1*p1", 1), 1, 6),
            s("q1*p1 - (1/2)*i*l", 1).truncate(6)
        );
        let f = s("q1^2*p1^3 + l*p1", 1);
        let back = n_kappa(&flat, &half, &n_kappa(&flat, &half, &f, 1, 6), -1, 6);
        assert_eq!(back, f.truncate(6));
        assert_eq!(
            n_kappa(&flat, &half, &s("q1^3", 1), 1, 6),
            s("q1^3", 1).truncate(6)
        );
    }

    #[test]
    fn closed_form_kappa_product() {
        use crate::random::SymbolGen;
        let flat = BaseGeometry::flat(2);
        let mut gen = SymbolGen::new(4, 2);
        for kappa in [rat(1, 4), rat(1, 2), rat(1, 1)] {
            for _ in 0..3 {
                let (f, g) = (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3));
                let h = star0_flat(
                    &n_kappa(&flat, &kappa, &f, 1, 6),
                    &n_kappa(&flat, &kappa, &g, 1, 6),
                    6,
                );
                assert_eq!(
                    star_kappa_flat(&f, &g, &kappa, 6),
                    n_kappa(&flat, &kappa, &h, -1, 6)
                );
            }
        }
    }

    #[test]
    fn homogeneity_examples() {
        assert_eq!(homogeneity(&s("p1^2", 1)), s("2*p1^2", 1));
        assert_eq!(homogeneity(&s("l*q1", 1)), s("l*q1", 1));
    }
}
