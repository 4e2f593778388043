//! Symmetric tensor fields and two-forms with polynomial components.

use std::collections::BTreeMap;

use crate::poly::{multi_factorial, Mono, MultiIndex, PhaseSymbol, EXACT, MAX_DIM};
use crate::scalars::Gauss;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A symmetric tensor field stored through its generating polynomial
/// `T̃(q, v) = (1/k!) Σ T_{j₁…j_k}(q) v^{j₁}⋯v^{j_k}`, one degree at a time
/// or as a finite sum of degrees.  The fiber variables `v` occupy the momentum
/// slots of [`PhaseSymbol`].
///
/// With this normalization the unnormalized symmetric product
/// `X∨Y = X⊗Y + Y⊗X` becomes polynomial multiplication, and for contravariant
/// fields the generating polynomial is literally `J(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymField {
    pub variance: Variance,
    poly: PhaseSymbol,
}

impl SymField {
    pub fn from_poly(variance: Variance, poly: PhaseSymbol) -> Self {
        SymField { variance, poly }
    }

    pub fn zero(variance: Variance, dim: usize) -> Self {
        SymField {
            variance,
            poly: PhaseSymbol::zero(dim, EXACT),
        }
    }

    /// Degree-zero field (a function).
    pub fn function(variance: Variance, u: &PhaseSymbol) -> Self {
        SymField {
            variance,
            poly: u.clone(),
        }
    }

    /// Covariant one-form `Σ a_j dq^j`.
    pub fn one_form(a: &[PhaseSymbol]) -> Self {
        let dim = a.first().map(|x| x.dim()).unwrap_or(0);
        let mut poly = PhaseSymbol::zero(dim, EXACT);
        for (j, c) in a.iter().enumerate() {
            poly = &poly + &(c * &PhaseSymbol::p(dim, j));
        }
        SymField {
            variance: Variance::Covariant,
            poly,
        }
    }

    /// Contravariant vector field `Σ X^j ∂_j`.
    pub fn vector_field(x: &[PhaseSymbol]) -> Self {
        SymField {
            variance: Variance::Contravariant,
            ..Self::one_form(x)
        }
    }

    /// Builds a field from components `T_{j₁…j_k}` keyed by nondecreasing
    /// (zero-based) index tuples.
    pub fn from_components(
        variance: Variance,
        dim: usize,
        comps: &BTreeMap<Vec<usize>, PhaseSymbol>,
    ) -> Self {
        let mut poly = PhaseSymbol::zero(dim, EXACT);
        for (idx, c) in comps {
            let beta = tuple_to_multi(idx);
            let w = Gauss::real(multi_factorial(&beta)).inv().expect("nonzero");
            poly = &poly + &(c * &PhaseSymbol::monomial(dim, w, Mono::new(0, &[], &beta), EXACT));
        }
        SymField { variance, poly }
    }

    pub fn poly(&self) -> &PhaseSymbol {
        &self.poly
    }

    pub fn into_poly(self) -> PhaseSymbol {
        self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// Highest symmetric degree present.
    pub fn degree(&self) -> u32 {
        self.poly.p_degree()
    }

    /// Component `T_{j₁…j_k}` for a nondecreasing index tuple.
    pub fn component(&self, idx: &[usize]) -> PhaseSymbol {
        let beta = tuple_to_multi(idx);
        self.poly.p_coeff(&beta).scale_rat(&multi_factorial(&beta))
    }

    /// All nonzero components keyed by nondecreasing index tuples.
    pub fn components(&self) -> BTreeMap<Vec<usize>, PhaseSymbol> {
        self.poly
            .p_coeffs()
            .into_iter()
            .map(|(beta, c)| (multi_to_tuple(&beta), c.scale_rat(&multi_factorial(&beta))))
            .collect()
    }

    /// Symmetric product `∨`.
    pub fn vee(&self, o: &SymField) -> SymField {
        assert_eq!(self.variance, o.variance, "variance mismatch in ∨");
        SymField {
            variance: self.variance,
            poly: &self.poly * &o.poly,
        }
    }

    pub fn add(&self, o: &SymField) -> SymField {
        assert_eq!(self.variance, o.variance, "variance mismatch in +");
        SymField {
            variance: self.variance,
            poly: &self.poly + &o.poly,
        }
    }

    pub fn scale(&self, c: &PhaseSymbol) -> SymField {
        SymField {
            variance: self.variance,
            poly: &self.poly * c,
        }
    }

    /// Part of symmetric degree `k`.
    pub fn homogeneous(&self, k: u32) -> SymField {
        SymField {
            variance: self.variance,
            poly: self.poly.p_homogeneous(k),
        }
    }

    pub fn truncate(&self, order: i32) -> SymField {
        SymField {
            variance: self.variance,
            poly: self.poly.truncate(order),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Evaluates a covariant field on vector fields given by component arrays.
    pub fn evaluate(&self, vectors: &[Vec<PhaseSymbol>]) -> PhaseSymbol {
        // T(X₁,…,X_k) = ∂^k T̃(Σ t_i X_i)/∂t₁⋯∂t_k, computed by polarization of the generating polynomial.
        let k = vectors.len() as u32;
        let dim = self.dim();
        let part = self.poly.p_homogeneous(k);
        let mut out = PhaseSymbol::zero(dim, part.order());
        for (beta, c) in part.p_coeffs() {
            let idx = multi_to_tuple(&beta);
            // Σ over assignments of the k slots to the multiset idx
            let mut acc = PhaseSymbol::zero(dim, EXACT);
            permutations_of_multiset(&idx, &mut |perm| {
                let mut t = PhaseSymbol::one(dim);
                for (slot, j) in perm.iter().enumerate() {
                    t = &t * &vectors[slot][*j];
                }
                acc = &acc + &t;
            });
            out = &out + &(&c.scale_rat(&multi_factorial(&beta)) * &acc);
        }
        out
    }
}

fn permutations_of_multiset(idx: &[usize], f: &mut dyn FnMut(&[usize])) {
    let mut items = idx.to_vec();
    items.sort();
    let mut used = vec![false; items.len()];
    let mut cur = Vec::with_capacity(items.len());
    fn rec(items: &[usize], used: &mut [bool], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == items.len() {
            f(cur);
            return;
        }
        for i in 0..items.len() {
            if used[i] || (i > 0 && items[i] == items[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(items[i]);
            rec(items, used, cur, f);
            cur.pop();
            used[i] = false;
        }
    }
    rec(&items, &mut used, &mut cur, f);
}

pub(crate) fn tuple_to_multi(idx: &[usize]) -> MultiIndex {
    let mut b = [0u8; MAX_DIM];
    for j in idx {
        b[*j] += 1;
    }
    b
}

pub(crate) fn multi_to_tuple(beta: &MultiIndex) -> Vec<usize> {
    let mut out = Vec::new();
    for (j, e) in beta.iter().enumerate() {
        for _ in 0..*e {
            out.push(j);
        }
    }
    out
}

/// A two-form `Σ_{i<j} B_{ij} dq^i ∧ dq^j` with polynomial coefficients (λ allowed).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    dim: usize,
    comps: BTreeMap<(usize, usize), PhaseSymbol>,
}

impl TwoForm {
    pub fn zero(dim: usize) -> Self {
        TwoForm {
            dim,
            comps: BTreeMap::new(),
        }
    }

    /// Sets `B_{ij}` for `i < j` (so `B_{ji} = −B_{ij}`).
    pub fn with(mut self, i: usize, j: usize, value: PhaseSymbol) -> Self {
        assert!(i != j);
        let (a, b, v) = if i < j { (i, j, value) } else { (j, i, -value) };
        if v.is_zero() {
            self.comps.remove(&(a, b));
        } else {
            self.comps.insert((a, b), v);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `B_{ij}` for any pair.
    pub fn get(&self, i: usize, j: usize) -> PhaseSymbol {
        if i == j {
            return PhaseSymbol::zero(self.dim, EXACT);
        }
        if i < j {
            self.comps
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| PhaseSymbol::zero(self.dim, EXACT))
        } else {
            -self.get(j, i)
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&(usize, usize), &PhaseSymbol)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(PhaseSymbol::is_zero)
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        let mut out = self.clone();
        for ((i, j), v) in &o.comps {
            let cur = out.get(*i, *j);
            out = out.with(*i, *j, &cur + v);
        }
        out
    }

    pub fn neg(&self) -> TwoForm {
        TwoForm {
            dim: self.dim,
            comps: self.comps.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &PhaseSymbol) -> TwoForm {
        let mut out = TwoForm::zero(self.dim);
        for ((i, j), v) in &self.comps {
            out = out.with(*i, *j, v * c);
        }
        out
    }

    /// `dB = 0`, checked on every triple `i < j < k`.
    pub fn is_closed(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s =
                        &(&self.get(j, k).d_q(i) - &self.get(i, k).d_q(j)) + &self.get(i, j).d_q(k);
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Coefficient of `λ^k`.
    pub fn lambda_coeff(&self, k: i32) -> TwoForm {
        let mut out = TwoForm::zero(self.dim);
        for ((i, j), v) in &self.comps {
            out = out.with(*i, *j, v.lambda_coeff(k));
        }
        out
    }

    /// Lowest λ-exponent present.
    pub fn valuation(&self) -> Option<i32> {
        self.comps.values().filter_map(|v| v.valuation()).min()
    }
}

/// `d(Σ a_j dq^j)`.
pub fn exterior_derivative(a: &[PhaseSymbol]) -> TwoForm {
    let dim = a.len();
    let mut out = TwoForm::zero(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            out = out.with(i, j, &a[j].d_q(i) - &a[i].d_q(j));
        }
    }
    out
}
