//! Linear differential operators on chart functions with coefficients
//! polynomial in `q` and formal in `λ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::field::PhaseField;
use crate::poly::{multi_degree, MultiIndex, PhaseSymbol, EXACT, MAX_DIM};
use crate::scalars::{Gauss, Rat};

/// `L = Σ_α c_α(q, λ) ∂_q^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinDiffOp {
    dim: usize,
    order: i32,
    terms: BTreeMap<MultiIndex, PhaseSymbol>,
}

fn binom_multi(a: &MultiIndex, g: &MultiIndex) -> Rat {
    let mut r = BigInt::one();
    for j in 0..MAX_DIM {
        r *= num_integer::binomial(BigInt::from(a[j]), BigInt::from(g[j]));
    }
    Rat::from_integer(r)
}

/// All `γ ≤ α` componentwise.
fn sub_indices(a: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![[0u8; MAX_DIM]];
    for j in 0..MAX_DIM {
        let mut next = Vec::new();
        for g in &out {
            for e in 0..=a[j] {
                let mut h = *g;
                h[j] = e;
                next.push(h);
            }
        }
        out = next;
    }
    out
}

impl LinDiffOp {
    pub fn zero(dim: usize, order: i32) -> Self {
        LinDiffOp {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize, order: i32) -> Self {
        Self::multiplication(&PhaseSymbol::one(dim).with_order(order))
    }

    /// Multiplication by a function of `q` (and λ).
    pub fn multiplication(c: &PhaseSymbol) -> Self {
        Self::zero(c.dim(), c.order()).with_term([0; MAX_DIM], c.clone())
    }

    /// `∂/∂q^j`.
    pub fn partial(dim: usize, j: usize, order: i32) -> Self {
        let mut a = [0u8; MAX_DIM];
        a[j] = 1;
        Self::zero(dim, order).with_term(a, PhaseSymbol::one(dim).with_order(order))
    }

    /// Adds `c ∂^α`.
    pub fn with_term(mut self, alpha: MultiIndex, c: PhaseSymbol) -> Self {
        assert!(
            c.p_degree() == 0,
            "operator coefficients must not depend on momenta"
        );
        let cur = self
            .terms
            .remove(&alpha)
            .unwrap_or_else(|| PhaseSymbol::zero(self.dim, EXACT));
        let s = (&cur + &c).truncate(self.order);
        if !s.is_zero() {
            self.terms.insert(alpha, s);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, PhaseSymbol> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> PhaseSymbol {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| PhaseSymbol::zero(self.dim, self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order.
    pub fn diff_order(&self) -> u32 {
        self.terms.keys().map(multi_degree).max().unwrap_or(0)
    }

    pub fn add(&self, o: &LinDiffOp) -> LinDiffOp {
        let mut out = LinDiffOp {
            dim: self.dim,
            order: self.order.min(o.order),
            terms: BTreeMap::new(),
        };
        for (a, c) in self.terms.iter().chain(o.terms.iter()) {
            out = out.with_term(*a, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LinDiffOp {
        LinDiffOp {
            dim: self.dim,
            order: self.order,
            terms: self.terms.iter().map(|(a, c)| (*a, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &LinDiffOp) -> LinDiffOp {
        self.add(&o.neg())
    }

    /// Left multiplication by a function.
    pub fn scale(&self, c: &PhaseSymbol) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim, self.order.min(c.order()));
        for (a, t) in &self.terms {
            out = out.with_term(*a, t * c);
        }
        out
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &LinDiffOp) -> LinDiffOp {
        let order = self.order.min(o.order);
        let mut out = LinDiffOp::zero(self.dim, order);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                for g in sub_indices(a) {
                    let d = cb.d_q_multi(&g);
                    if d.is_zero() {
                        continue;
                    }
                    let mut idx = *b;
                    for j in 0..MAX_DIM {
                        idx[j] += a[j] - g[j];
                    }
                    let c = (ca * &d).scale_rat(&binom_multi(a, &g)).truncate(order);
                    out = out.with_term(idx, c);
                }
            }
        }
        out
    }

    /// Drops every term `λ^l ∂^α` with `l − |α| > max`.
    ///
    /// Operators in the image of the standard-order representation only
    /// contain terms of nonnegative weight, and the weight of a term equals
    /// the λ-order of the symbol it comes from, so this is the natural
    /// truncation for them.
    pub fn weight_truncate(&self, max: i32) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim, self.order);
        for (a, c) in &self.terms {
            let keep = PhaseSymbol::from_terms(
                self.dim,
                c.order(),
                c.terms()
                    .filter(|(m, _)| m.lam_exp() - multi_degree(a) as i32 <= max)
                    .map(|(m, v)| (m, v.clone())),
            );
            if !keep.is_zero() {
                out.terms.insert(*a, keep);
            }
        }
        out
    }

    /// `self ∘ o` keeping only terms of weight at most `max`; assumes both
    /// factors have nonnegative weight.
    pub fn compose_weighted(&self, o: &LinDiffOp, max: i32) -> LinDiffOp {
        let mut acc: BTreeMap<MultiIndex, PhaseSymbol> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let wa = ca.valuation().unwrap_or(0) - multi_degree(a) as i32;
            for (b, cb) in &o.terms {
                let wb = cb.valuation().unwrap_or(0) - multi_degree(b) as i32;
                if wa + wb > max {
                    continue;
                }
                for g in sub_indices(a) {
                    let d = cb.d_q_multi(&g);
                    if d.is_zero() {
                        continue;
                    }
                    let mut idx = *b;
                    for j in 0..MAX_DIM {
                        idx[j] += a[j] - g[j];
                    }
                    let c = (ca * &d).scale_rat(&binom_multi(a, &g));
                    let e = acc
                        .entry(idx)
                        .or_insert_with(|| PhaseSymbol::zero(self.dim, EXACT));
                    *e = &*e + &c;
                }
            }
        }
        let out = LinDiffOp {
            dim: self.dim,
            order: EXACT,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        };
        out.weight_truncate(max)
    }

    /// Smallest weight `l − |α|` over all terms.
    pub fn min_weight(&self) -> Option<i32> {
        self.terms
            .iter()
            .filter_map(|(a, c)| c.valuation().map(|v| v - multi_degree(a) as i32))
            .min()
    }

    pub fn apply(&self, u: &PhaseSymbol) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim, self.order.min(u.order()));
        for (a, c) in &self.terms {
            out = &out + &(c * &u.d_q_multi(a));
        }
        out.truncate(self.order.min(u.order()))
    }

    /// Applies the operator to any phase-space field with `q`-derivatives.
    pub fn apply_field<F: PhaseField>(&self, u: &F) -> F {
        let mut out = u.zero_like();
        for (a, c) in &self.terms {
            out = out.plus(&u.dq_multi(a).times_poly(c));
        }
        out.truncate(self.order)
    }

    pub fn truncate(&self, order: i32) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim, order.min(self.order));
        for (a, c) in &self.terms {
            out = out.with_term(*a, c.clone());
        }
        out
    }

    pub fn with_order(&self, order: i32) -> LinDiffOp {
        LinDiffOp {
            dim: self.dim,
            order,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (*a, c.clone().with_order(order)))
                .collect(),
        }
    }

    /// Coefficient of `λ^k`.
    pub fn lambda_coeff(&self, k: i32) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim, EXACT);
        for (a, c) in &self.terms {
            out = out.with_term(*a, c.lambda_coeff(k));
        }
        out
    }

    /// `e^{−φ} ∘ L ∘ e^{φ}` for a function `φ(q)` whose derivatives are
    /// polynomial: every `∂_j` becomes `∂_j + ∂_j φ`.
    pub fn conjugate_by_exp(&self, dphi: &[PhaseSymbol]) -> LinDiffOp {
        let order = self.order;
        let shifted: Vec<LinDiffOp> = (0..self.dim)
            .map(|j| {
                LinDiffOp::partial(self.dim, j, order).add(&LinDiffOp::multiplication(
                    &dphi[j].clone().with_order(order),
                ))
            })
            .collect();
        let mut out = LinDiffOp::zero(self.dim, order);
        for (a, c) in &self.terms {
            let mut t = LinDiffOp::multiplication(&c.clone().with_order(order));
            for j in 0..self.dim {
                for _ in 0..a[j] {
                    t = t.compose(&shifted[j]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Formal adjoint with respect to Lebesgue measure: `Σ (−∂)^α ∘ c̄_α`.
    pub fn formal_adjoint(&self) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim, self.order);
        for (a, c) in &self.terms {
            let mut t = LinDiffOp::identity(self.dim, self.order);
            for j in 0..self.dim {
                for _ in 0..a[j] {
                    t = t.compose(&LinDiffOp::partial(self.dim, j, self.order));
                }
            }
            let sign = if multi_degree(a).is_multiple_of(2) {
                Gauss::one()
            } else {
                -Gauss::one()
            };
            out = out.add(
                &t.compose(&LinDiffOp::multiplication(&c.conj()))
                    .scale(&PhaseSymbol::constant(self.dim, sign)),
            );
        }
        out
    }
}

impl fmt::Display for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest derivative order first
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| multi_degree(b).cmp(&multi_degree(a)).then(b.cmp(a)));
        for a in keys {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = &self.terms[a];
            let mut d = String::new();
            for j in 0..self.dim {
                match a[j] {
                    0 => {}
                    1 => d.push_str(&format!("*d{}", j + 1)),
                    e => d.push_str(&format!("*d{}^{}", j + 1, e)),
                }
            }
            if multi_degree(a) == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}){d}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;

    fn s(t: &str) -> PhaseSymbol {
        parse_symbol(t, 2).unwrap()
    }

    #[test]
    fn identity_has_one_term() {
        let id = LinDiffOp::identity(2, EXACT);
        assert_eq!(id.terms().len(), 1);
        assert_eq!(id.apply(&s("q1^2*q2")), s("q1^2*q2"));
    }

    #[test]
    fn commutator_of_d_and_q() {
        let d = LinDiffOp::partial(2, 0, EXACT);
        let q = LinDiffOp::multiplication(&s("q1"));
        let c = d.compose(&q).sub(&q.compose(&d));
        assert_eq!(c, LinDiffOp::identity(2, EXACT));
    }

    #[test]
    fn composition_matches_application() {
        let a = LinDiffOp::partial(2, 0, EXACT)
            .scale(&s("q2^2"))
            .add(&LinDiffOp::multiplication(&s("l*q1")));
        let b = LinDiffOp::partial(2, 1, EXACT)
            .compose(&LinDiffOp::partial(2, 0, EXACT))
            .scale(&s("q1"));
        let u = s("q1^3*q2^2 + q2");
        assert_eq!(a.compose(&b).apply(&u), a.apply(&b.apply(&u)));
    }

    #[test]
    fn conjugation_by_exponential() {
        // e^{-q1} d1 e^{q1} = d1 + 1
        let d = LinDiffOp::partial(2, 0, EXACT);
        let c = d.conjugate_by_exp(&[s("1"), s("0")]);
        assert_eq!(c, d.add(&LinDiffOp::identity(2, EXACT)));
    }

    #[test]
    fn adjoint_of_derivative() {
        let d = LinDiffOp::partial(2, 0, EXACT).scale(&s("i*q1"));
        // (i q1 d1)^* = -d1 ∘ (-i q1) = i q1 d1 + i
        let expect = d.add(&LinDiffOp::multiplication(&s("i")));
        assert_eq!(d.formal_adjoint(), expect);
    }
}
