//! Polynomials in chart coordinates q, momenta p and λ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::mono::{Mono, MAX_DIM};
use crate::scalars::{rat_int, Gauss, LambdaScalar, Rat, ScalarMode};

/// Truncation order used for polynomials that are known exactly.
pub const EXACT: i32 = 1 << 20;

/// Exponents of a momentum (or derivative) multi-index.
pub type MultiIndex = [u8; MAX_DIM];

/// A phase-space function polynomial in `q`, `p` and λ.
///
/// Terms with λ-exponent above `order` are unknown and are not stored.  Base
/// functions (no momentum dependence) and operator coefficients use the same
/// type; so do symmetric tensors through their generating polynomials, with the
/// momentum slots standing for the fiber variables.
#[derive(Clone, PartialEq, Eq)]
pub struct PhaseSymbol {
    dim: usize,
    order: i32,
    terms: BTreeMap<Mono, Gauss>,
}

pub fn factorial(n: u32) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, k| acc * rat_int(k))
}

pub fn multi_factorial(b: &MultiIndex) -> Rat {
    b.iter()
        .fold(Rat::one(), |acc, e| acc * factorial(*e as u32))
}

pub fn multi_degree(b: &MultiIndex) -> u32 {
    b.iter().map(|e| *e as u32).sum()
}

impl PhaseSymbol {
    pub fn zero(dim: usize, order: i32) -> Self {
        assert!(dim <= MAX_DIM, "chart dimension {dim} exceeds {MAX_DIM}");
        PhaseSymbol {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(dim: usize, c: Gauss, m: Mono, order: i32) -> Self {
        Self::from_terms(dim, order, std::iter::once((m, c)))
    }

    pub fn constant(dim: usize, c: Gauss) -> Self {
        Self::monomial(dim, c, Mono::ONE, EXACT)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Gauss::one())
    }

    pub fn q(dim: usize, j: usize) -> Self {
        assert!(j < dim);
        Self::monomial(dim, Gauss::one(), Mono::q(j), EXACT)
    }

    pub fn p(dim: usize, j: usize) -> Self {
        assert!(j < dim);
        Self::monomial(dim, Gauss::one(), Mono::p(j), EXACT)
    }

    pub fn lambda(dim: usize) -> Self {
        Self::monomial(dim, Gauss::one(), Mono::lam(1), EXACT)
    }

    /// `c λ^k` as a symbol.
    pub fn lambda_pow(dim: usize, c: Gauss, k: i32) -> Self {
        Self::monomial(dim, c, Mono::lam(k), EXACT)
    }

    pub fn from_scalar(dim: usize, s: &LambdaScalar) -> Self {
        Self::from_terms(
            dim,
            s.order(),
            s.terms().map(|(k, c)| (Mono::lam(k), c.clone())),
        )
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Gauss)>>(
        dim: usize,
        order: i32,
        it: I,
    ) -> Self {
        let mut s = Self::zero(dim, order);
        for (m, c) in it {
            s.add_term(m, &c);
        }
        s
    }

    /// Adds `c·m` in place, dropping terms beyond the truncation order.
    pub fn add_term(&mut self, m: Mono, c: &Gauss) {
        if m.lam_exp() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &Gauss)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Gauss {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Lowers the truncation order, discarding terms above it.
    pub fn truncate(&self, order: i32) -> Self {
        if order >= self.order && self.terms.keys().all(|m| m.lam_exp() <= order) {
            return self.clone();
        }
        let order = order.min(self.order);
        Self::from_terms(
            self.dim,
            order,
            self.terms()
                .filter(|(m, _)| m.lam_exp() <= order)
                .map(|(m, c)| (m, c.clone())),
        )
    }

    /// Declares the polynomial known to the given order (it may only be raised
    /// for data that is exact, e.g. chart data).
    pub fn with_order(mut self, order: i32) -> Self {
        self.terms.retain(|m, _| m.lam_exp() <= order);
        self.order = order;
        self
    }

    /// Reinterprets the polynomial in a chart of another dimension; variables
    /// beyond the new dimension must not occur.
    pub fn with_dim(mut self, dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        for m in self.terms.keys() {
            for j in dim..MAX_DIM {
                assert!(
                    m.q_exp(j) == 0 && m.p_exp(j) == 0,
                    "variable index exceeds target dimension"
                );
            }
        }
        self.dim = dim;
        self
    }

    /// Lowest λ-exponent present.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.lam_exp()).min()
    }

    pub fn max_lambda(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.lam_exp()).max()
    }

    fn low(&self) -> i32 {
        self.valuation().unwrap_or(0)
    }

    pub fn scale(&self, c: &Gauss) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.order);
        }
        PhaseSymbol {
            dim: self.dim,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&Gauss::real(r.clone()))
    }

    /// Multiplies by `c·m`; the truncation order follows the λ-shift.
    pub fn mul_term(&self, c: &Gauss, m: Mono) -> Self {
        let order = self.order.saturating_add(m.lam_exp());
        Self::from_terms(
            self.dim,
            order,
            self.terms().map(|(t, x)| (t.mul(m), x * c)),
        )
    }

    /// Multiplies by `λ^k`.
    pub fn shift_lambda(&self, k: i32) -> Self {
        self.mul_term(&Gauss::one(), Mono::lam(k))
    }

    pub fn conj(&self) -> Self {
        PhaseSymbol {
            dim: self.dim,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Gauss::is_real)
    }

    pub fn d_q(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        for (m, c) in self.terms() {
            let e = m.q_exp(j);
            if e > 0 {
                out.add_term(m.with_q(j, e - 1), &c.scale(&rat_int(e as i64)));
            }
        }
        out
    }

    pub fn d_p(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        for (m, c) in self.terms() {
            let e = m.p_exp(j);
            if e > 0 {
                out.add_term(m.with_p(j, e - 1), &c.scale(&rat_int(e as i64)));
            }
        }
        out
    }

    /// `∂^β/∂p^β`.
    pub fn d_p_multi(&self, beta: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        'terms: for (m, c) in self.terms() {
            let mut mm = m;
            let mut factor = Rat::one();
            for j in 0..self.dim {
                let e = m.p_exp(j);
                let b = beta[j];
                if e < b {
                    continue 'terms;
                }
                for t in 0..b {
                    factor *= rat_int((e - t) as i64);
                }
                mm = mm.with_p(j, e - b);
            }
            out.add_term(mm, &c.scale(&factor));
        }
        out
    }

    /// `∂^α/∂q^α`.
    pub fn d_q_multi(&self, alpha: &MultiIndex) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        'terms: for (m, c) in self.terms() {
            let mut mm = m;
            let mut factor = Rat::one();
            for j in 0..self.dim {
                let e = m.q_exp(j);
                let a = alpha[j];
                if e < a {
                    continue 'terms;
                }
                for t in 0..a {
                    factor *= rat_int((e - t) as i64);
                }
                mm = mm.with_q(j, e - a);
            }
            out.add_term(mm, &c.scale(&factor));
        }
        out
    }

    /// `λ ∂/∂λ`.
    pub fn lambda_euler(&self) -> Self {
        Self::from_terms(
            self.dim,
            self.order,
            self.terms()
                .map(|(m, c)| (m, c.scale(&rat_int(m.lam_exp() as i64)))),
        )
    }

    /// Multiplies every term by its momentum degree (the Liouville derivative).
    pub fn momentum_euler(&self) -> Self {
        Self::from_terms(
            self.dim,
            self.order,
            self.terms()
                .map(|(m, c)| (m, c.scale(&rat_int(m.p_degree() as i64)))),
        )
    }

    /// Coefficient of `λ^k` as a λ-free polynomial.
    pub fn lambda_coeff(&self, k: i32) -> Self {
        Self::from_terms(
            self.dim,
            EXACT,
            self.terms()
                .filter(|(m, _)| m.lam_exp() == k)
                .map(|(m, c)| (m.without_lam(), c.clone())),
        )
    }

    /// Splits by λ-exponent.
    pub fn lambda_parts(&self) -> BTreeMap<i32, PhaseSymbol> {
        let mut out: BTreeMap<i32, PhaseSymbol> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.lam_exp())
                .or_insert_with(|| Self::zero(self.dim, EXACT))
                .add_term(m.without_lam(), c);
        }
        out
    }

    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p_degree()).max().unwrap_or(0)
    }

    pub fn min_p_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p_degree()).min().unwrap_or(0)
    }

    pub fn q_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.q_degree()).max().unwrap_or(0)
    }

    pub fn is_base(&self) -> bool {
        self.terms.keys().all(|m| m.p_degree() == 0)
    }

    /// The part homogeneous of momentum degree `k`.
    pub fn p_homogeneous(&self, k: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.order,
            self.terms()
                .filter(|(m, _)| m.p_degree() == k)
                .map(|(m, c)| (m, c.clone())),
        )
    }

    /// Coefficient of `p^β` as a base polynomial.
    pub fn p_coeff(&self, beta: &MultiIndex) -> Self {
        let target = Mono::new(0, &[], beta);
        Self::from_terms(
            self.dim,
            self.order,
            self.terms()
                .filter(|(m, _)| m.p_part() == target)
                .map(|(m, c)| (m.base_part(), c.clone())),
        )
    }

    /// All momentum coefficients `β ↦ f_β(q, λ)`.
    pub fn p_coeffs(&self) -> BTreeMap<MultiIndex, PhaseSymbol> {
        let mut out: BTreeMap<MultiIndex, PhaseSymbol> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.p_exps())
                .or_insert_with(|| Self::zero(self.dim, self.order))
                .add_term(m.base_part(), c);
        }
        out
    }

    /// Restriction to the zero section, `ι*f`.
    pub fn iota(&self) -> Self {
        self.p_coeff(&[0; MAX_DIM])
    }

    /// Constant in q and p: returns the λ-series.
    pub fn to_scalar(&self) -> Option<LambdaScalar> {
        let mut terms = Vec::new();
        for (m, c) in self.terms() {
            if m.p_degree() != 0 || m.q_degree() != 0 {
                return None;
            }
            terms.push((m.lam_exp(), c.clone()));
        }
        let laurent = terms.iter().any(|(k, _)| *k < 0);
        let mode = if laurent {
            ScalarMode::Laurent {
                lower: self.valuation().unwrap_or(0),
            }
        } else {
            ScalarMode::PowerSeries
        };
        let order = if self.is_exact() {
            crate::scalars::DEFAULT_ORDER.max(self.max_lambda().unwrap_or(0))
        } else {
            self.order
        };
        Some(LambdaScalar::from_map(terms, order, mode))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Gauss) -> Gauss) -> Self {
        Self::from_terms(self.dim, self.order, self.terms().map(|(m, c)| (m, f(c))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim).with_order(self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes polynomials for the variables.  `None` leaves a variable
    /// unchanged.
    pub fn substitute(
        &self,
        q_subs: &[Option<PhaseSymbol>],
        p_subs: &[Option<PhaseSymbol>],
    ) -> Self {
        let mut q_pows: Vec<Vec<PhaseSymbol>> = Vec::new();
        let mut p_pows: Vec<Vec<PhaseSymbol>> = Vec::new();
        let dq = self.q_degree_per_var();
        let dp = self.p_degree_per_var();
        for j in 0..self.dim {
            q_pows.push(powers(
                q_subs.get(j).and_then(|s| s.clone()),
                || Self::q(self.dim, j),
                dq[j],
            ));
            p_pows.push(powers(
                p_subs.get(j).and_then(|s| s.clone()),
                || Self::p(self.dim, j),
                dp[j],
            ));
        }
        let mut out = Self::zero(self.dim, self.order);
        for (m, c) in self.terms() {
            let mut t = Self::monomial(self.dim, c.clone(), Mono::lam(m.lam_exp()), EXACT);
            for j in 0..self.dim {
                let qe = m.q_exp(j) as usize;
                let pe = m.p_exp(j) as usize;
                if qe > 0 {
                    t = &t * &q_pows[j][qe];
                }
                if pe > 0 {
                    t = &t * &p_pows[j][pe];
                }
            }
            out = &out + &t;
        }
        out.truncate(self.order)
    }

    fn q_degree_per_var(&self) -> [u8; MAX_DIM] {
        let mut d = [0u8; MAX_DIM];
        for m in self.terms.keys() {
            for (j, dj) in d.iter_mut().enumerate() {
                *dj = (*dj).max(m.q_exp(j));
            }
        }
        d
    }

    fn p_degree_per_var(&self) -> [u8; MAX_DIM] {
        let mut d = [0u8; MAX_DIM];
        for m in self.terms.keys() {
            for (j, dj) in d.iter_mut().enumerate() {
                *dj = (*dj).max(m.p_exp(j));
            }
        }
        d
    }

    /// Numerical value at a point; λ is replaced by `lam`.
    pub fn eval(&self, q: &[f64], p: &[f64], lam: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, c) in self.terms() {
            let mut w = lam.powi(m.lam_exp());
            for j in 0..self.dim {
                w *= q.get(j).copied().unwrap_or(0.0).powi(m.q_exp(j) as i32);
                w *= p.get(j).copied().unwrap_or(0.0).powi(m.p_exp(j) as i32);
            }
            let (a, b) = c.to_c64();
            re += a * w;
            im += b * w;
        }
        (re, im)
    }

    /// Checks equality up to the smaller truncation order.
    pub fn agrees_with(&self, o: &PhaseSymbol) -> bool {
        let n = self.order.min(o.order);
        (self - o).truncate(n).is_zero()
    }

    fn merge_order_mul(&self, o: &Self) -> i32 {
        let a = self.order.saturating_add(o.low());
        let b = o.order.saturating_add(self.low());
        a.min(b).min(EXACT)
    }
}

fn powers(sub: Option<PhaseSymbol>, var: impl Fn() -> PhaseSymbol, max: u8) -> Vec<PhaseSymbol> {
    let base = sub.unwrap_or_else(var);
    let mut out = vec![PhaseSymbol::one(base.dim())];
    for k in 1..=max as usize {
        let next = &out[k - 1] * &base;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a PhaseSymbol> for &'a PhaseSymbol {
    type Output = PhaseSymbol;
    fn add(self, o: &PhaseSymbol) -> PhaseSymbol {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let order = self.order.min(o.order);
        let (big, small) = if self.terms.len() >= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut out = big.clone().with_order(order);
        for (m, c) in small.terms() {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a> Sub<&'a PhaseSymbol> for &'a PhaseSymbol {
    type Output = PhaseSymbol;
    fn sub(self, o: &PhaseSymbol) -> PhaseSymbol {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let order = self.order.min(o.order);
        let mut out = self.clone().with_order(order);
        for (m, c) in o.terms() {
            out.add_term(m, &-c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a PhaseSymbol> for &'a PhaseSymbol {
    type Output = PhaseSymbol;
    fn mul(self, o: &PhaseSymbol) -> PhaseSymbol {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let order = self.merge_order_mul(o);
        let mut acc: BTreeMap<Mono, Gauss> = BTreeMap::new();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                let m = a.mul(b);
                if m.lam_exp() > order {
                    continue;
                }
                let prod = x * y;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &prod;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        PhaseSymbol {
            dim: self.dim,
            order,
            terms: acc,
        }
    }
}

impl Add for PhaseSymbol {
    type Output = PhaseSymbol;
    fn add(self, o: PhaseSymbol) -> PhaseSymbol {
        &self + &o
    }
}

impl Sub for PhaseSymbol {
    type Output = PhaseSymbol;
    fn sub(self, o: PhaseSymbol) -> PhaseSymbol {
        &self - &o
    }
}

impl Mul for PhaseSymbol {
    type Output = PhaseSymbol;
    fn mul(self, o: PhaseSymbol) -> PhaseSymbol {
        &self * &o
    }
}

impl Neg for PhaseSymbol {
    type Output = PhaseSymbol;
    fn neg(self) -> PhaseSymbol {
        PhaseSymbol {
            dim: self.dim,
            order: self.order,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Zero for PhaseSymbol {
    fn zero() -> Self {
        PhaseSymbol::zero(MAX_DIM, EXACT)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Printing order: λ-exponent, then momentum degree, then total q-degree,
/// then the exponent tuples.
fn print_key(
    m: Mono,
) -> (
    i32,
    u32,
    [std::cmp::Reverse<u8>; MAX_DIM],
    u32,
    [std::cmp::Reverse<u8>; MAX_DIM],
) {
    let r = |a: [u8; MAX_DIM]| a.map(std::cmp::Reverse);
    (
        m.lam_exp(),
        m.p_degree(),
        r(m.p_exps()),
        m.q_degree(),
        r(m.q_exps()),
    )
}

impl fmt::Display for PhaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(Mono, &Gauss)> = self.terms().collect();
        items.sort_by_key(|(m, _)| print_key(*m));
        for (i, (m, c)) in items.into_iter().enumerate() {
            let (neg, mag) = c.sign_split();
            let mono = m.render(self.dim);
            let body = if mono.is_empty() {
                mag.standalone()
            } else {
                format!("{}{}", mag.coeff_prefix(), mono)
            };
            match (i == 0, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PhaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "PhaseSymbol[n={}]({})", self.dim, self)
        } else {
            write!(f, "PhaseSymbol[n={}, N={}]({})", self.dim, self.order, self)
        }
    }
}
