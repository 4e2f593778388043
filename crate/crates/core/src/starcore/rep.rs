//! The standard-order representation by differential operators and its
//! inversion on polynomial symbols.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use super::FormalOneForm;
use crate::geometry::{sym_cov_deriv_poly, BaseGeometry, LinDiffOp};
use crate::poly::{
    factorial, multi_degree, multi_factorial, Mono, MultiIndex, PhaseSymbol, EXACT, MAX_DIM,
};
use crate::scalars::Gauss;

/// Whether intermediate negative powers of λ are acceptable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LaurentPolicy {
    #[default]
    Auto,
    Forbid,
}

/// Coefficients of `S^l u` for the step `S = −iλD + Ã∨`, keyed by the
/// derivative `∂^α u` they multiply.  Each value is a generating polynomial
/// in `q`, `v` (momentum slots) and λ, homogeneous of degree `l` in `v`.
type Jet = BTreeMap<MultiIndex, PhaseSymbol>;

/// `ρ^A_0`: the standard-order representation minimally coupled to a
/// potential `A` (or plain `ρ_0` when `A = 0`).
///
/// `ρ^A_0(f)u = Σ_l (1/l!) Σ_{j₁…j_l} ι*(∂^l f/∂p_{j₁}⋯∂p_{j_l}) (1/l!)⟨∂_{j₁}⊗⋯⊗∂_{j_l}, (−iλD + A∨)^l u⟩`.
///
/// Jets and the images of momentum monomials are cached; everything is kept
/// to weight `max_weight`, which equals the λ-order of the symbols involved.
pub struct StandardRep {
    geom: Arc<BaseGeometry>,
    potential: Option<PhaseSymbol>,
    max_weight: i32,
    jets: RwLock<Vec<Arc<Jet>>>,
    monos: RwLock<HashMap<MultiIndex, Arc<LinDiffOp>>>,
}

impl std::fmt::Debug for StandardRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StandardRep")
            .field("chart", &self.geom.id())
            .field("max_weight", &self.max_weight)
            .finish()
    }
}

fn weight_trim(p: &PhaseSymbol, deriv: u32, max: i32) -> PhaseSymbol {
    PhaseSymbol::from_terms(
        p.dim(),
        EXACT,
        p.terms()
            .filter(|(m, _)| m.lam_exp() - deriv as i32 <= max)
            .map(|(m, c)| (m, c.clone())),
    )
}

impl StandardRep {
    /// Panics if the potential has negative powers of λ.
    pub fn new(
        geom: Arc<BaseGeometry>,
        potential: Option<&FormalOneForm>,
        max_weight: i32,
    ) -> Self {
        let potential = potential.filter(|a| !a.is_zero()).map(|a| {
            assert!(
                a.valuation().unwrap_or(0) >= 0,
                "potential must be a power series in λ"
            );
            a.generating_poly()
        });
        let dim = geom.dim();
        let mut j0 = Jet::new();
        j0.insert([0; MAX_DIM], PhaseSymbol::one(dim));
        StandardRep {
            geom,
            potential,
            max_weight,
            jets: RwLock::new(vec![Arc::new(j0)]),
            monos: RwLock::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.geom.dim()
    }

    pub fn max_weight(&self) -> i32 {
        self.max_weight
    }

    pub fn geometry(&self) -> &BaseGeometry {
        &self.geom
    }

    fn step(&self, jet: &Jet) -> Jet {
        let dim = self.dim();
        let mil = Gauss::one().mul_i_pow(3);
        let mut out = Jet::new();
        let mut push = |a: MultiIndex, p: PhaseSymbol| {
            if p.is_zero() {
                return;
            }
            let e = out
                .entry(a)
                .or_insert_with(|| PhaseSymbol::zero(dim, EXACT));
            *e = &*e + &p;
        };
        for (a, p) in jet {
            let mut same = sym_cov_deriv_poly(&self.geom, p, None).mul_term(&mil, Mono::lam(1));
            if let Some(at) = &self.potential {
                same = &same + &(at * p);
            }
            push(*a, same);
            for i in 0..dim {
                let mut b = *a;
                b[i] += 1;
                push(b, p.mul_term(&mil, Mono::lam(1).mul(Mono::p(i))));
            }
        }
        out.into_iter()
            .map(|(a, p)| {
                let t = weight_trim(&p, multi_degree(&a), self.max_weight);
                (a, t)
            })
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    fn jet(&self, l: usize) -> Arc<Jet> {
        if let Some(j) = self.jets.read().unwrap().get(l) {
            return j.clone();
        }
        let mut w = self.jets.write().unwrap();
        while w.len() <= l {
            let next = self.step(w.last().unwrap());
            w.push(Arc::new(next));
        }
        w[l].clone()
    }

    /// Image of the momentum monomial `p^β`.
    pub fn rho_mono(&self, beta: &MultiIndex) -> Arc<LinDiffOp> {
        if let Some(op) = self.monos.read().unwrap().get(beta) {
            return op.clone();
        }
        let m = multi_degree(beta);
        let jet = self.jet(m as usize);
        let w = Gauss::real(multi_factorial(beta) / factorial(m));
        let mut op = LinDiffOp::zero(self.dim(), EXACT);
        for (a, p) in jet.iter() {
            let c = p.p_coeff(beta);
            if !c.is_zero() {
                op = op.with_term(*a, c.scale(&w));
            }
        }
        let op = Arc::new(op);
        self.monos.write().unwrap().insert(*beta, op.clone());
        op
    }

    /// `ρ(f)` as a differential operator, to weight `max_weight`.
    pub fn rho(&self, f: &PhaseSymbol) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim(), EXACT);
        for (beta, c) in f.p_coeffs() {
            let c = c.with_order(EXACT);
            out = out.add(&self.rho_mono(&beta).scale(&c));
        }
        out.weight_truncate(self.max_weight)
    }

    /// Inverse of [`rho`](Self::rho) on its image: peels off the highest
    /// derivative order, whose coefficient is `h·(−iλ)^m` for the symbol
    /// term `h·p^α`.
    pub fn sigma(&self, op: &LinDiffOp) -> PhaseSymbol {
        let dim = self.dim();
        let mut rest = op.weight_truncate(self.max_weight);
        let mut f = PhaseSymbol::zero(dim, EXACT);
        while !rest.is_zero() {
            let m = rest.diff_order();
            // 1/(−i)^m = i^m
            let scale = Gauss::one().mul_i_pow(m as i32);
            let top: Vec<(MultiIndex, PhaseSymbol)> = rest
                .terms()
                .iter()
                .filter(|(a, _)| multi_degree(a) == m)
                .map(|(a, c)| (*a, c.clone()))
                .collect();
            for (a, c) in top {
                let h = c.shift_lambda(-(m as i32)).scale(&scale);
                f = &f
                    + &(&h
                        * &PhaseSymbol::monomial(dim, Gauss::one(), Mono::new(0, &[], &a), EXACT));
                rest = rest
                    .sub(&self.rho_mono(&a).scale(&h))
                    .weight_truncate(self.max_weight);
            }
        }
        f.truncate(self.max_weight)
    }

    /// The product induced by this representation:
    /// `σ(ρ(f) ∘ ρ(g))`.
    pub fn star(&self, f: &PhaseSymbol, g: &PhaseSymbol) -> PhaseSymbol {
        let n = self.max_weight.min(f.order()).min(g.order());
        let op = self.rho(f).compose_weighted(&self.rho(g), n);
        self.sigma(&op).truncate(n)
    }
}
