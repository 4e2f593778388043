//! `J`, the symmetrized covariant derivative, the divergence, fiberwise
//! operators and the Laplacians.

use std::collections::BTreeMap;

use super::tensors::multi_to_tuple;
use super::{BaseGeometry, GeometryError, SymField, TwoForm, Variance};
use crate::field::PhaseField;
use crate::poly::{Mono, PhaseSymbol};
use crate::scalars::Gauss;

/// `J`: contravariant symmetric tensors to momentum polynomials.
pub fn j_map(t: &SymField) -> Result<PhaseSymbol, GeometryError> {
    if t.variance != Variance::Contravariant {
        return Err(GeometryError::VarianceMismatch {
            expected: "contravariant",
        });
    }
    Ok(t.poly().clone())
}

/// Inverse of [`j_map`].
pub fn j_inv(p: &PhaseSymbol) -> SymField {
    SymField::from_poly(Variance::Contravariant, p.clone())
}

/// Symmetrized covariant derivative `D`, optionally twisted by a connection
/// one-form `θ` (so `∇_X` acts as `X + θ(X)`).  No `1/(k+1)!` normalization.
///
/// On generating polynomials this is
/// `Σ_i v^i ∂_{q^i} γ̃ − Σ_l G_l(q, v) ∂_{v^l} γ̃ + θ̃ γ̃`
/// with the geodesic spray `G_l = Γ^l_{ij} v^i v^j`.
pub fn sym_cov_deriv(
    geom: &BaseGeometry,
    g: &SymField,
    theta: Option<&[PhaseSymbol]>,
) -> Result<SymField, GeometryError> {
    if g.variance != Variance::Covariant {
        return Err(GeometryError::VarianceMismatch {
            expected: "covariant",
        });
    }
    Ok(SymField::from_poly(
        Variance::Covariant,
        sym_cov_deriv_poly(geom, g.poly(), theta),
    ))
}

pub(crate) fn sym_cov_deriv_poly(
    geom: &BaseGeometry,
    g: &PhaseSymbol,
    theta: Option<&[PhaseSymbol]>,
) -> PhaseSymbol {
    let dim = geom.dim();
    let mut out = PhaseSymbol::zero(dim, g.order());
    for i in 0..dim {
        let dq = g.d_q(i);
        if !dq.is_zero() {
            out = &out + &dq.mul_term(&Gauss::one(), Mono::p(i));
        }
        let dv = g.d_p(i);
        if !dv.is_zero() && !geom.spray(i).is_zero() {
            out = &out - &(geom.spray(i) * &dv);
        }
        if let Some(th) = theta {
            if !th[i].is_zero() {
                out = &out + &(&th[i] * &g.mul_term(&Gauss::one(), Mono::p(i)));
            }
        }
    }
    out
}

fn sorted_component<'a>(
    comps: &'a BTreeMap<Vec<usize>, PhaseSymbol>,
    idx: &[usize],
) -> Option<&'a PhaseSymbol> {
    let mut k = idx.to_vec();
    k.sort_unstable();
    comps.get(&k)
}

/// Divergence `div_μ` (twisted by `θ` when given), computed componentwise:
/// `(div X)^{J} = ∇_a X^{aJ} + (α_a + θ_a) X^{aJ}`.
pub fn div_mu(
    geom: &BaseGeometry,
    x: &SymField,
    theta: Option<&[PhaseSymbol]>,
) -> Result<SymField, GeometryError> {
    if x.variance != Variance::Contravariant {
        return Err(GeometryError::VarianceMismatch {
            expected: "contravariant",
        });
    }
    if x.degree() == 0 {
        return Err(GeometryError::DegreeZero);
    }
    let dim = geom.dim();
    let comps = x.components();
    let zero = PhaseSymbol::zero(dim, x.poly().order());
    let mut out: BTreeMap<Vec<usize>, PhaseSymbol> = BTreeMap::new();
    for k in 1..=x.degree() {
        for beta in crate::poly::multi_indices(dim, k - 1) {
            let rest = multi_to_tuple(&beta);
            let mut acc = zero.clone();
            for a in 0..dim {
                let mut full = vec![a];
                full.extend_from_slice(&rest);
                if let Some(c) = sorted_component(&comps, &full) {
                    acc = &acc + &c.d_q(a);
                    let w = geom.alpha(a)
                        + &theta.map(|t| t[a].clone()).unwrap_or_else(|| zero.clone());
                    acc = &acc + &(&w * c);
                }
                for b in 0..dim {
                    // Γ^a_{ab} X^{b rest}
                    let mut fb = vec![b];
                    fb.extend_from_slice(&rest);
                    if let Some(c) = sorted_component(&comps, &fb) {
                        acc = &acc + &(geom.christoffel(a, a, b) * c);
                    }
                    // Σ_s Γ^{rest_s}_{ab} X^{a, rest with slot s replaced by b}
                    for s in 0..rest.len() {
                        let g = geom.christoffel(rest[s], a, b);
                        if g.is_zero() {
                            continue;
                        }
                        let mut idx = vec![a];
                        for (t, r) in rest.iter().enumerate() {
                            idx.push(if t == s { b } else { *r });
                        }
                        if let Some(c) = sorted_component(&comps, &idx) {
                            acc = &acc + &(g * c);
                        }
                    }
                }
            }
            if !acc.is_zero() {
                out.insert(rest, acc);
            }
        }
    }
    Ok(SymField::from_components(Variance::Contravariant, dim, &out).truncate(x.poly().order()))
}

/// Fiberwise operator `F_γ f = Σ_β c_β(q) ∂_p^β f` where `γ̃ = Σ c_β v^β`.
pub fn apply_f<F: PhaseField>(g: &SymField, f: &F) -> F {
    apply_f_poly(g.poly(), f)
}

pub(crate) fn apply_f_poly<F: PhaseField>(g: &PhaseSymbol, f: &F) -> F {
    let mut out = f.zero_like();
    for (beta, c) in g.p_coeffs() {
        let d = f.dp_multi(&beta);
        if d.is_zero() {
            continue;
        }
        out = out.plus(&d.times_poly(&c));
    }
    out
}

/// `Δ f = Σ ∂²f/∂q^k∂p_k + Σ p_l Γ^l_{jk} ∂²f/∂p_j∂p_k + Σ Γ^j_{jk} ∂f/∂p_k`.
pub fn laplacian<F: PhaseField>(geom: &BaseGeometry, f: &F) -> F {
    let dim = geom.dim();
    let mut out = f.zero_like();
    for k in 0..dim {
        let dpk = f.dp(k);
        if dpk.is_zero() {
            continue;
        }
        out = out.plus(&dpk.dq(k));
        let lf = geom.lap_first(k);
        if !lf.is_zero() {
            out = out.plus(&dpk.times_poly(lf));
        }
        for (j, kk, c) in geom.lap_second() {
            if *kk == k {
                out = out.plus(&dpk.dp(*j).times_poly(c));
            }
        }
    }
    out
}

/// `Δ_μ = Δ + F_{α_μ}`, plus `F_θ` for a twisting one-form.
pub fn laplacian_mu<F: PhaseField>(geom: &BaseGeometry, f: &F, theta: Option<&[PhaseSymbol]>) -> F {
    let mut out = laplacian(geom, f);
    for k in 0..geom.dim() {
        let mut w = geom.alpha(k).clone();
        if let Some(t) = theta {
            w = &w + &t[k];
        }
        if !w.is_zero() {
            out = out.plus(&f.dp(k).times_poly(&w));
        }
    }
    out
}

/// `tr R = −dα_μ`.
pub fn curvature_trace(geom: &BaseGeometry) -> TwoForm {
    super::exterior_derivative(
        &(0..geom.dim())
            .map(|j| geom.alpha(j).clone())
            .collect::<Vec<_>>(),
    )
    .neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    #[test]
    fn j_of_vectors() {
        let d = SymField::vector_field(&[PhaseSymbol::one(1)]);
        assert_eq!(j_map(&d).unwrap(), s("p1", 1));
        assert_eq!(j_map(&d.vee(&d)).unwrap(), s("p1^2", 1));
        assert!(j_map(&SymField::one_form(&[PhaseSymbol::one(1)])).is_err());
    }

    #[test]
    fn d_of_function_is_differential() {
        let geom = GeometryBuilder::new(2)
            .christoffel(0, 0, 1, s("q2", 2))
            .build()
            .unwrap();
        let u = s("q1^2*q2", 2);
        let du = sym_cov_deriv(&geom, &SymField::function(Variance::Covariant, &u), None).unwrap();
        assert_eq!(du.component(&[0]), s("2*q1*q2", 2));
        assert_eq!(du.component(&[1]), s("q1^2", 2));
    }

    #[test]
    fn d_of_dq_with_constant_christoffel() {
        let geom = GeometryBuilder::new(1)
            .christoffel(0, 0, 0, s("5", 1))
            .build()
            .unwrap();
        let dq = SymField::one_form(&[PhaseSymbol::one(1)]);
        let d = sym_cov_deriv(&geom, &dq, None).unwrap();
        assert_eq!(d.component(&[0, 0]), s("-10", 1));
        assert_eq!(
            d.evaluate(&[vec![PhaseSymbol::one(1)], vec![PhaseSymbol::one(1)]]),
            s("-10", 1)
        );
    }

    #[test]
    fn divergence_examples() {
        let flat = BaseGeometry::flat(1);
        let d = SymField::vector_field(&[PhaseSymbol::one(1)]);
        assert!(div_mu(&flat, &d, None).unwrap().is_zero());
        let g = flat.with_alpha(vec![s("3", 1)]).unwrap();
        assert_eq!(div_mu(&g, &d, None).unwrap().poly(), &s("3", 1));
        assert_eq!(
            div_mu(&g, &SymField::zero(Variance::Contravariant, 1), None),
            Err(GeometryError::DegreeZero)
        );
    }

    #[test]
    fn fiberwise_examples() {
        let dq = SymField::one_form(&[PhaseSymbol::one(1)]);
        assert_eq!(apply_f(&dq, &s("p1^2", 1)), s("2*p1", 1));
        assert_eq!(apply_f(&dq.vee(&dq), &s("p1^2", 1)), s("2", 1));
        assert!(apply_f(&dq, &s("q1^3", 1)).is_zero());
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(laplacian(&BaseGeometry::flat(1), &s("q1*p1", 1)), s("1", 1));
        let g = GeometryBuilder::new(1)
            .christoffel(0, 0, 0, s("q1", 1))
            .build()
            .unwrap();
        assert_eq!(laplacian(&g, &s("p1^2", 1)), s("4*q1*p1", 1));
    }

    #[test]
    fn curvature_trace_examples() {
        let g = BaseGeometry::flat(2)
            .with_alpha(vec![s("0", 2), s("q1", 2)])
            .unwrap();
        assert_eq!(curvature_trace(&g).get(0, 1), s("-1", 2));
        let g = BaseGeometry::flat(2)
            .with_alpha(vec![s("2*q1*q2", 2), s("q1^2", 2)])
            .unwrap();
        assert!(curvature_trace(&g).is_zero());
    }
}
