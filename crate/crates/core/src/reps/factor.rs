//! The factorization `exp(cD + tγ) = exp(t·[(exp(cD) − id)/(cD)]γ) exp(cD)`
//! on symmetric covariant tensor fields.

use crate::geometry::{sym_cov_deriv_poly, BaseGeometry};
use crate::poly::{factorial, PhaseSymbol};
use crate::scalars::Rat;
use crate::starcore::FormalOneForm;

fn keep_degree(p: &PhaseSymbol, max: u32) -> PhaseSymbol {
    PhaseSymbol::from_terms(
        p.dim(),
        p.order(),
        p.terms()
            .filter(|(m, _)| m.p_degree() <= max)
            .map(|(m, c)| (m, c.clone())),
    )
}

/// `exp(X)T` for an operator raising the symmetric degree, kept to degree `max`.
fn exp_raising(x: impl Fn(&PhaseSymbol) -> PhaseSymbol, t: &PhaseSymbol, max: u32) -> PhaseSymbol {
    let mut out = keep_degree(t, max);
    let mut term = out.clone();
    for k in 1..=max {
        term = keep_degree(&x(&term), max)
            .scale_rat(&(Rat::from_integer(1.into()) / Rat::from_integer(k.into())));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    out
}

/// Both sides of the factorization applied to `tensor` (a generating
/// polynomial in the fiber slots), up to symmetric degree `max_degree`.
/// `c` is any λ-scalar, `γ` a one-form acting by `∨`.
pub fn ds_gamma_factor_check(
    geom: &BaseGeometry,
    c: &PhaseSymbol,
    t: &Rat,
    gamma: &FormalOneForm,
    tensor: &PhaseSymbol,
    max_degree: u32,
) -> (PhaseSymbol, PhaseSymbol) {
    assert!(
        c.is_base() && (0..c.dim()).all(|j| c.d_q(j).is_zero()),
        "c must be a constant λ-series"
    );
    let g = gamma.generating_poly();
    let cd = |x: &PhaseSymbol| &sym_cov_deriv_poly(geom, x, None) * c;
    let lhs = exp_raising(|x| &cd(x) + &(&g * x).scale_rat(t), tensor, max_degree);
    // [(exp(cD) − id)/(cD)]γ = Σ_m (cD)^m γ/(m+1)!
    let mut series = PhaseSymbol::zero(g.dim(), g.order());
    let mut term = g.clone();
    for m in 0..max_degree {
        series = &series + &term.scale_rat(&(Rat::from_integer(1.into()) / factorial(m + 1)));
        term = keep_degree(&cd(&term), max_degree);
    }
    let series = series.scale_rat(t);
    let inner = exp_raising(cd, tensor, max_degree);
    let rhs = exp_raising(|x| &series * x, &inner, max_degree);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;
    use crate::random::SymbolGen;
    use crate::scalars::rat;

    #[test]
    fn factorization_on_random_data() {
        let s = |t: &str| parse_symbol(t, 2).unwrap();
        let g = GeometryBuilder::new(2)
            .christoffel(0, 0, 1, s("q2"))
            .christoffel(1, 1, 1, s("q1 - 2"))
            .build()
            .unwrap();
        let mut gen = SymbolGen::new(41, 2);
        for c in [s("-i*l"), s("3/2")] {
            let gamma = gen.one_form(2, 2);
            let tensor = gen.symbol(1, 2, 3);
            let (l, r) = ds_gamma_factor_check(&g, &c, &rat(2, 3), &gamma, &tensor, 4);
            assert_eq!(l, r);
            assert!(!l.is_zero());
        }
    }
}
