//! Randomized invariants on seeded symbols and chart geometries.

use fiberstar::field::PhaseField;
use fiberstar::geometry::{
    apply_f, div_mu, j_inv, j_map, laplacian_mu, sym_cov_deriv, BaseGeometry, GeometryBuilder,
    SymField, Variance,
};
use fiberstar::poly::{PhaseSymbol, EXACT};
use fiberstar::random::SymbolGen;
use fiberstar::scalars::{rat, Gauss, Rat};
use fiberstar::starcore::StarContext;
use proptest::prelude::*;

const ORDER: i32 = 3;

fn kappas() -> impl Strategy<Value = Rat> {
    prop::sample::select(vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1), rat(3, 4)])
}

fn curved(seed: u64, kappa: Rat) -> (StarContext, SymbolGen) {
    let mut gen = SymbolGen::new(seed, 2);
    let geom = gen.geometry(1, 3);
    let ctx = StarContext::new(geom)
        .with_kappa(kappa)
        .unwrap()
        .with_order(ORDER);
    (ctx, gen)
}

fn covariant(gen: &mut SymbolGen) -> SymField {
    SymField::from_poly(Variance::Covariant, gen.real_symbol(2, 2, 3))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn laplacian_intertwines_divergence(seed in any::<u64>()) {
        let mut gen = SymbolGen::new(seed, 2);
        let geom = gen.geometry(2, 4);
        // Every term carries at least one momentum so the divergence is defined.
        let t = j_inv(&(&gen.symbol(2, 2, 4) * &PhaseSymbol::p(2, 0)));
        let lhs = laplacian_mu(&geom, &j_map(&t).unwrap(), None);
        let rhs = j_map(&div_mu(&geom, &t, None).unwrap()).unwrap();
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn fiberwise_operators_compose_like_products(seed in any::<u64>()) {
        let mut gen = SymbolGen::new(seed, 2);
        let (a, b) = (covariant(&mut gen), covariant(&mut gen));
        let f = gen.symbol(4, 2, 5);
        let ab = apply_f(&a.vee(&b), &f);
        prop_assert_eq!(&ab, &apply_f(&a, &apply_f(&b, &f)));
        prop_assert_eq!(&ab, &apply_f(&b, &apply_f(&a, &f)));
    }

    #[test]
    fn symmetrized_derivative_is_a_derivation(seed in any::<u64>()) {
        let mut gen = SymbolGen::new(seed, 2);
        let geom = gen.geometry(2, 4);
        let (a, b) = (covariant(&mut gen), covariant(&mut gen));
        let lhs = sym_cov_deriv(&geom, &a.vee(&b), None).unwrap();
        let rhs = sym_cov_deriv(&geom, &a, None).unwrap().vee(&b).add(&a.vee(&sym_cov_deriv(&geom, &b, None).unwrap()));
        prop_assert_eq!(lhs.poly(), rhs.poly());
    }

    #[test]
    fn ordering_map_is_an_equivalence(seed in any::<u64>(), k in kappas()) {
        let (ctx, mut gen) = curved(seed, k);
        let (f, g) = (gen.symbol(2, 1, 3), gen.symbol(2, 1, 3));
        let lhs = ctx.n_kappa(&ctx.star(&f, &g).unwrap(), 1);
        let rhs = ctx.star0(&ctx.n_kappa(&f, 1), &ctx.n_kappa(&g, 1)).unwrap();
        prop_assert!(lhs.minus(&rhs).truncate(ORDER).is_zero());
        prop_assert!(ctx.n_kappa(&ctx.n_kappa(&f, 1), -1).minus(&f).truncate(ORDER).is_zero());
    }

    #[test]
    fn first_cochain_bracket(seed in any::<u64>(), k in kappas()) {
        let (ctx, mut gen) = curved(seed, k);
        let (f, g) = (gen.symbol(2, 2, 3), gen.symbol(2, 2, 3));
        let c = ctx.cochain(1, &f, &g).unwrap().minus(&ctx.cochain(1, &g, &f).unwrap());
        let i = PhaseSymbol::constant(2, Gauss::i());
        prop_assert_eq!(c, &i * &ctx.poisson_bracket(&f, &g));
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), k in kappas()) {
        let (ctx, mut gen) = curved(seed, k);
        let (f, g, h) = (gen.symbol(2, 1, 2), gen.symbol(2, 1, 2), gen.symbol(2, 1, 2));
        let l = ctx.star(&ctx.star(&f, &g).unwrap(), &h).unwrap();
        let r = ctx.star(&f, &ctx.star(&g, &h).unwrap()).unwrap();
        prop_assert!(l.minus(&r).truncate(ORDER).is_zero());
    }

    #[test]
    fn representation_is_multiplicative(seed in any::<u64>(), k in kappas()) {
        let (ctx, mut gen) = curved(seed, k);
        let (f, g) = (gen.symbol(2, 2, 3), gen.symbol(2, 2, 3));
        let lhs = ctx.rho_kappa(&ctx.star(&f, &g).unwrap());
        let rhs = ctx.rho_kappa(&f).compose_weighted(&ctx.rho_kappa(&g), ORDER);
        prop_assert!(lhs.sub(&rhs).truncate(ORDER).is_zero());
    }

    #[test]
    fn exact_potentials_act_by_automorphisms(seed in any::<u64>(), k in kappas()) {
        let (ctx, mut gen) = curved(seed, k);
        let a = gen.exact_form(1, 2);
        let (f, g) = (gen.symbol(2, 1, 3), gen.symbol(2, 1, 3));
        let t = rat(1, 1);
        let lhs = ctx.evolve(&a, &t, &ctx.star(&f, &g).unwrap());
        let rhs = ctx.star(&ctx.evolve(&a, &t, &f), &ctx.evolve(&a, &t, &g)).unwrap();
        prop_assert!(lhs.minus(&rhs).truncate(ORDER).is_zero());
    }
}

/// Random Christoffel symbols with `α_k = ∂_k u − Γ^j_{jk}`, so the density
/// is parallel up to the exact factor `e^u`.
fn compatible(gen: &mut SymbolGen) -> BaseGeometry {
    let g = gen.geometry(1, 3);
    let u = gen.base(2, 2);
    let mut b = GeometryBuilder::new(2).id("compatible");
    for l in 0..2 {
        for j in 0..2 {
            for k in j..2 {
                b = b.christoffel(l, j, k, g.christoffel(l, j, k).clone());
            }
        }
    }
    for k in 0..2 {
        let tr = (0..2).fold(PhaseSymbol::zero(2, EXACT), |acc, j| {
            &acc + g.christoffel(j, j, k)
        });
        b = b.alpha(k, &u.d_q(k) - &tr);
    }
    b.build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn half_ordering_conjugates_to_the_opposite_product(seed in any::<u64>()) {
        let mut gen = SymbolGen::new(seed, 2);
        let ctx = StarContext::new(compatible(&mut gen)).with_kappa(rat(1, 2)).unwrap().with_order(ORDER);
        let (f, g) = (gen.symbol(2, 1, 3), gen.symbol(2, 1, 3));
        let lhs = ctx.star(&f, &g).unwrap().conj();
        let rhs = ctx.star(&g.conj(), &f.conj()).unwrap();
        prop_assert!(lhs.minus(&rhs).truncate(ORDER).is_zero());
    }
}
