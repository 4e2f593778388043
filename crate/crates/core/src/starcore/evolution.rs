//! Quantized fiber translations: the derivation `δ_κ[A]`, the evolution
//! operators `𝒜_κ(t)`, and the factorization identities they satisfy.

use num_traits::One;

use super::products::exp_laplacian;
use super::FormalOneForm;
use crate::field::PhaseField;
use crate::geometry::{apply_f_poly, sym_cov_deriv_poly, BaseGeometry};
use crate::poly::{factorial, Mono, PhaseSymbol, EXACT};
use crate::scalars::{Gauss, Rat};

/// `[(iκ)^{m+1} − (−i(1−κ))^{m+1}] / (m+1)!`: the coefficient of
/// `λ^{m+1} D^m` in `(exp(iκλD) − exp(−i(1−κ)λD))/D`.
pub fn delta_coefficient(kappa: &Rat, m: u32) -> Gauss {
    let a = Gauss::imag(kappa.clone()).pow(m + 1);
    let b = Gauss::imag(-(Rat::one() - kappa)).pow(m + 1);
    (&a - &b).scale(&(Rat::one() / factorial(m + 1)))
}

/// `Σ_m c(m)·λ^{m+shift}·D^m γ` for `m = 0, 1, …` until the λ-order passes `order`.
pub(crate) fn d_series(
    geom: &BaseGeometry,
    gamma: &PhaseSymbol,
    shift: i32,
    order: i32,
    c: impl Fn(u32) -> Gauss,
) -> PhaseSymbol {
    let dim = geom.dim();
    let val = gamma.valuation().unwrap_or(0);
    let mut out = PhaseSymbol::zero(dim, EXACT);
    let mut cur = gamma.clone();
    let mut m = 0u32;
    while val + m as i32 + shift <= order && !cur.is_zero() {
        let k = c(m);
        if !k.is_zero() {
            out = &out + &cur.mul_term(&k, Mono::lam(m as i32 + shift));
        }
        cur = sym_cov_deriv_poly(geom, &cur, None).truncate(order - m as i32 - 1 - shift);
        m += 1;
    }
    out.truncate(order)
}

/// Generating polynomial of the symmetric form
/// `γ = [(exp(iκλD) − exp(−i(1−κ)λD))/(iλD)] A − A₀` driving `𝒜_κ(t)`.
pub fn evolution_form(
    geom: &BaseGeometry,
    kappa: &Rat,
    a: &FormalOneForm,
    order: i32,
) -> PhaseSymbol {
    let minus_i = Gauss::one().mul_i_pow(3);
    let series = d_series(geom, &a.generating_poly(), 0, order, |m| {
        &delta_coefficient(kappa, m) * &minus_i
    });
    &series - &a.a0().generating_poly()
}

/// `δ_κ[A] f = F_{[(exp(iκλD) − exp(−i(1−κ)λD))/D] A} f`.
pub(crate) fn delta<F: PhaseField>(
    geom: &BaseGeometry,
    kappa: &Rat,
    a: &FormalOneForm,
    f: &F,
    order: i32,
) -> F {
    let g = d_series(geom, &a.generating_poly(), 1, order, |m| {
        delta_coefficient(kappa, m)
    });
    apply_f_poly(&g, f).truncate(order)
}

/// `exp(s·F_γ) f` for a form with positive λ-valuation.
pub(crate) fn exp_f<F: PhaseField>(gamma: &PhaseSymbol, s: &Rat, f: &F, order: i32) -> F {
    let mut out = f.truncate(order);
    if gamma.is_zero() || s == &Rat::from_integer(0.into()) {
        return out;
    }
    assert!(
        gamma.valuation().unwrap_or(1) >= 1,
        "exp(F_γ) needs γ = O(λ)"
    );
    let mut term = out.clone();
    let mut k = 1u32;
    loop {
        term = apply_f_poly(gamma, &term)
            .times_scalar(&Gauss::real(s.clone() / Rat::from_integer(k.into())), 0)
            .truncate(order);
        if term.is_zero() {
            break;
        }
        out = out.plus(&term);
        k += 1;
    }
    out
}

/// `𝒜_κ(t) f = φ_t^*(exp(−t F_γ) f)` with `φ_t(ζ) = ζ − t A₀`.
pub(crate) fn evolve<F: PhaseField>(
    geom: &BaseGeometry,
    kappa: &Rat,
    a: &FormalOneForm,
    t: &Rat,
    f: &F,
    order: i32,
) -> F {
    let gamma = evolution_form(geom, kappa, a, order);
    let g = exp_f(&gamma, &-t.clone(), f, order);
    let a0 = a.a0();
    if a0.is_zero() {
        g
    } else {
        g.shift_momenta(&a0.shift(&Gauss::real(-t.clone())))
    }
}

/// Both sides of
/// `exp(−iκλ(Δ + tF_α)) = exp(t F_{[(exp(−iκλD) − id)/D] α}) exp(−iκλΔ)`,
/// applied to `f`.
pub fn nalpha_factor_check(
    geom: &BaseGeometry,
    kappa: &Rat,
    t: &Rat,
    f: &PhaseSymbol,
    order: i32,
) -> (PhaseSymbol, PhaseSymbol) {
    let c = Gauss::imag(-kappa.clone());
    let lhs = exp_laplacian(geom, &c, t, f, order);
    let alpha = geom.alpha_form().into_poly();
    // Σ_{m≥1} (−iκλ)^m/m! D^{m−1} α  =  Σ_{m'≥0} (−iκ)^{m'+1}/(m'+1)! λ^{m'+1} D^{m'} α
    let g = d_series(geom, &alpha, 1, order, |m| {
        c.pow(m + 1).scale(&(Rat::one() / factorial(m + 1)))
    });
    let flat_part = exp_laplacian(geom, &c, &Rat::from_integer(0.into()), f, order);
    let rhs = exp_f(&g, t, &flat_part, order);
    (lhs, rhs)
}

/// Both sides of `𝒜(t)∘H∘𝒜(−t) f = H f + t F_{[(exp(iκλD) − exp(−i(1−κ)λD))/(iλD)](λ∂_λ − id)A} f`.
pub fn lambda_euler_check(
    geom: &BaseGeometry,
    kappa: &Rat,
    a: &FormalOneForm,
    t: &Rat,
    f: &PhaseSymbol,
    order: i32,
) -> (PhaseSymbol, PhaseSymbol) {
    let h = super::homogeneity;
    let lhs = evolve(
        geom,
        kappa,
        a,
        t,
        &h(&evolve(geom, kappa, a, &-t.clone(), f, order)),
        order,
    );
    let minus_i = Gauss::one().mul_i_pow(3);
    let g = d_series(geom, &a.euler_minus_id().generating_poly(), 0, order, |m| {
        &delta_coefficient(kappa, m) * &minus_i
    });
    let rhs = (&h(f) + &apply_f_poly(&g, f).scale_rat(t)).truncate(order);
    (lhs.truncate(order), rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;
    use crate::scalars::rat;

    fn s(t: &str) -> PhaseSymbol {
        parse_symbol(t, 2).unwrap()
    }

    fn curved() -> BaseGeometry {
        GeometryBuilder::new(2)
            .christoffel(0, 0, 1, s("q2"))
            .christoffel(1, 1, 1, s("2"))
            .alpha(0, s("q2"))
            .alpha(1, s("1 + q1"))
            .build()
            .unwrap()
    }

    #[test]
    fn coefficients() {
        // m = 0: iκ + i(1−κ) = i
        assert_eq!(delta_coefficient(&rat(1, 3), 0), Gauss::i());
        // m = 1, κ = 1/2: [(i/2)² − (−i/2)²]/2 = 0
        assert!(delta_coefficient(&rat(1, 2), 1).is_zero());
    }

    #[test]
    fn minimal_coupling() {
        let g = curved();
        let a = FormalOneForm::new(vec![s("q1*q2 + l*q2^2"), s("3 + l*q1")]);
        for kappa in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let jx = s("q1*p1 + p2");
            let out = evolve(&g, &kappa, &a, &rat(2, 3), &jx, 6);
            let expect = &jx - &a.eval(&[s("q1"), s("1")]).scale_rat(&rat(2, 3));
            assert_eq!(out, expect.truncate(6));
            assert_eq!(
                evolve(&g, &kappa, &a, &rat(5, 1), &s("q1^2 + l*q2"), 6),
                s("q1^2 + l*q2").truncate(6)
            );
        }
    }

    #[test]
    fn delta_on_vector_fields() {
        let g = curved();
        let a = FormalOneForm::new(vec![s("q1*q2"), s("q2 + l")]);
        let out = delta(&g, &rat(1, 4), &a, &s("p1 + q2*p2"), 6);
        assert_eq!(
            out,
            a.eval(&[s("1"), s("q2")])
                .mul_term(&Gauss::i(), Mono::lam(1))
                .truncate(6)
        );
        assert!(delta(&g, &rat(1, 4), &a, &s("q1"), 6).is_zero());
    }

    #[test]
    fn nalpha_factorization() {
        let g = curved();
        let f = s("q1*p1^2*p2 + q2^2*p2^2 + p1");
        let (l, r) = nalpha_factor_check(&g, &rat(1, 2), &rat(1, 1), &f, 6);
        assert_eq!(l, r);
        let (l, r) = nalpha_factor_check(&g, &rat(1, 3), &rat(-2, 5), &f, 6);
        assert_eq!(l, r);
    }

    #[test]
    fn homogeneity_conjugation() {
        let g = curved();
        let a = FormalOneForm::new(vec![s("q2 + l*q1^2"), s("l^2*q2")]);
        let f = s("q1*p1^2 + l*p2 + q2*p1*p2");
        let (l, r) = lambda_euler_check(&g, &rat(1, 2), &a, &rat(1, 1), &f, 6);
        assert_eq!(l, r);
    }
}
