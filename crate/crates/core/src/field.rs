//! Phase-space function representations the fiberwise operators act on.
//!
//! Everything that only needs derivatives, products and multiplication by
//! polynomials is written against [`PhaseField`].  Two representations exist:
//! exact polynomials ([`PhaseSymbol`]) and Gaussian-windowed functions
//! ([`WindowedSymbol`], sums of `P·exp(−Q)` with polynomial `P`, `Q`), which
//! are compactly concentrated and can be sampled for quadrature.

use crate::poly::{MultiIndex, PhaseSymbol, EXACT};

pub trait PhaseField: Clone + Send + Sync + Sized {
    fn dim(&self) -> usize;
    fn order(&self) -> i32;
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// Multiplication by a polynomial in q, p and λ.
    fn times_poly(&self, c: &PhaseSymbol) -> Self;
    fn dq(&self, j: usize) -> Self;
    fn dp(&self, j: usize) -> Self;
    fn conj(&self) -> Self;
    fn truncate(&self, order: i32) -> Self;
    /// Lowest λ-exponent present.
    fn valuation(&self) -> Option<i32>;
    /// Embeds a polynomial in this representation.
    fn lift(&self, c: &PhaseSymbol) -> Self;
    /// Coefficient of `λ^k` (λ-free).
    fn lambda_coeff(&self, k: i32) -> Self;

    /// Upper bound on the momentum degree, when there is one.
    fn p_degree_bound(&self) -> Option<u32> {
        None
    }

    /// `f(q, p + shift(q))`.
    fn shift_momenta(&self, shift: &[PhaseSymbol]) -> Self;

    fn dp_multi(&self, beta: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (j, e) in beta.iter().enumerate() {
            for _ in 0..*e {
                out = out.dp(j);
            }
        }
        out
    }

    fn dq_multi(&self, alpha: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (j, e) in alpha.iter().enumerate() {
            for _ in 0..*e {
                out = out.dq(j);
            }
        }
        out
    }

    /// `f ★_0 g` on a curved chart; only exact polynomial symbols support it.
    fn star0_curved(
        rep: &crate::starcore::StandardRep,
        f: &Self,
        g: &Self,
    ) -> Result<Self, crate::starcore::StarError> {
        let _ = (rep, f, g);
        Err(crate::starcore::StarError::Unsupported)
    }

    /// Multiplies by `λ^k` times a constant.
    fn times_scalar(&self, c: &crate::scalars::Gauss, k: i32) -> Self {
        self.times_poly(&PhaseSymbol::lambda_pow(self.dim(), c.clone(), k))
    }
}

impl PhaseField for PhaseSymbol {
    fn dim(&self) -> usize {
        PhaseSymbol::dim(self)
    }
    fn order(&self) -> i32 {
        PhaseSymbol::order(self)
    }
    fn zero_like(&self) -> Self {
        PhaseSymbol::zero(self.dim(), PhaseSymbol::order(self))
    }
    fn is_zero(&self) -> bool {
        PhaseSymbol::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn times_poly(&self, c: &PhaseSymbol) -> Self {
        self * c
    }
    fn dq(&self, j: usize) -> Self {
        self.d_q(j)
    }
    fn dp(&self, j: usize) -> Self {
        self.d_p(j)
    }
    fn dp_multi(&self, beta: &MultiIndex) -> Self {
        self.d_p_multi(beta)
    }
    fn dq_multi(&self, alpha: &MultiIndex) -> Self {
        self.d_q_multi(alpha)
    }
    fn conj(&self) -> Self {
        PhaseSymbol::conj(self)
    }
    fn truncate(&self, order: i32) -> Self {
        PhaseSymbol::truncate(self, order)
    }
    fn valuation(&self) -> Option<i32> {
        PhaseSymbol::valuation(self)
    }
    fn lift(&self, c: &PhaseSymbol) -> Self {
        c.clone()
    }
    fn lambda_coeff(&self, k: i32) -> Self {
        PhaseSymbol::lambda_coeff(self, k)
    }
    fn p_degree_bound(&self) -> Option<u32> {
        Some(self.p_degree())
    }
    fn star0_curved(
        rep: &crate::starcore::StandardRep,
        f: &Self,
        g: &Self,
    ) -> Result<Self, crate::starcore::StarError> {
        Ok(rep.star(f, g))
    }
    fn shift_momenta(&self, shift: &[PhaseSymbol]) -> Self {
        let dim = PhaseSymbol::dim(self);
        let subs: Vec<Option<PhaseSymbol>> = (0..dim)
            .map(|j| Some(&PhaseSymbol::p(dim, j) + &shift[j]))
            .collect();
        self.substitute(&[], &subs)
    }
}

/// `Σ_i P_i(q, p, λ) · exp(−Q_i(q, p))`.
///
/// The exponents `Q_i` are λ-free polynomials; parts with equal exponent are
/// merged.  Derivatives stay in the class, so every fiberwise operator and
/// every flat star product acts exactly on it.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSymbol {
    dim: usize,
    order: i32,
    parts: Vec<(PhaseSymbol, PhaseSymbol)>,
}

impl WindowedSymbol {
    pub fn zero(dim: usize, order: i32) -> Self {
        WindowedSymbol {
            dim,
            order,
            parts: Vec::new(),
        }
    }

    /// `amplitude · exp(−exponent)`.
    pub fn new(amplitude: PhaseSymbol, exponent: PhaseSymbol, order: i32) -> Self {
        assert!(
            exponent.valuation().unwrap_or(0) == 0 && exponent.max_lambda().unwrap_or(0) == 0,
            "window exponent must be λ-free"
        );
        let mut w = WindowedSymbol::zero(amplitude.dim(), order);
        w.push(amplitude.truncate(order), exponent.with_order(EXACT));
        w
    }

    pub fn parts(&self) -> &[(PhaseSymbol, PhaseSymbol)] {
        &self.parts
    }

    fn push(&mut self, amp: PhaseSymbol, exp: PhaseSymbol) {
        if amp.is_zero() {
            return;
        }
        if let Some(slot) = self.parts.iter_mut().find(|(_, e)| *e == exp) {
            slot.0 = &slot.0 + &amp;
        } else {
            self.parts.push((amp, exp));
        }
        self.parts.retain(|(a, _)| !a.is_zero());
    }

    fn map_amp(&self, f: impl Fn(&PhaseSymbol, &PhaseSymbol) -> PhaseSymbol) -> Self {
        let mut out = WindowedSymbol::zero(self.dim, self.order);
        for (a, e) in &self.parts {
            out.push(f(a, e).truncate(self.order), e.clone());
        }
        out
    }

    /// Value at a point with λ replaced by `lam`.
    pub fn eval(&self, q: &[f64], p: &[f64], lam: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (a, e) in &self.parts {
            let (ar, ai) = a.eval(q, p, lam);
            let (er, ei) = e.eval(q, p, 0.0);
            let mag = (-er).exp();
            let (c, s) = ((-ei).cos() * mag, (-ei).sin() * mag);
            re += ar * c - ai * s;
            im += ar * s + ai * c;
        }
        (re, im)
    }

    /// Restriction to the zero section.
    pub fn iota(&self) -> Self {
        let mut out = WindowedSymbol::zero(self.dim, self.order);
        for (a, e) in &self.parts {
            out.push(a.iota(), e.iota());
        }
        out
    }

    /// Substitutes `p ↦ p + shift(q)`; the window stays polynomial.
    pub fn shift_momenta(&self, shift: &[PhaseSymbol]) -> Self {
        let subs: Vec<Option<PhaseSymbol>> = (0..self.dim)
            .map(|j| Some(&PhaseSymbol::p(self.dim, j) + &shift[j]))
            .collect();
        let mut out = WindowedSymbol::zero(self.dim, self.order);
        for (a, e) in &self.parts {
            out.push(
                a.substitute(&[], &subs),
                e.substitute(&[], &subs).with_order(EXACT),
            );
        }
        out
    }
}

impl PhaseField for WindowedSymbol {
    fn dim(&self) -> usize {
        self.dim
    }
    fn order(&self) -> i32 {
        self.order
    }
    fn zero_like(&self) -> Self {
        WindowedSymbol::zero(self.dim, self.order)
    }
    fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.order = self.order.min(o.order);
        for (a, e) in &o.parts {
            out.push(a.clone(), e.clone());
        }
        out.truncate(out.order)
    }
    fn minus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.order = self.order.min(o.order);
        for (a, e) in &o.parts {
            out.push(-a.clone(), e.clone());
        }
        out.truncate(out.order)
    }
    fn times(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut out = WindowedSymbol::zero(self.dim, order);
        for (a, e) in &self.parts {
            for (b, f) in &o.parts {
                out.push((a * b).truncate(order), e + f);
            }
        }
        out
    }
    fn times_poly(&self, c: &PhaseSymbol) -> Self {
        self.map_amp(|a, _| a * c)
    }
    fn dq(&self, j: usize) -> Self {
        self.map_amp(|a, e| &a.d_q(j) - &(a * &e.d_q(j)))
    }
    fn dp(&self, j: usize) -> Self {
        self.map_amp(|a, e| &a.d_p(j) - &(a * &e.d_p(j)))
    }
    fn conj(&self) -> Self {
        let mut out = WindowedSymbol::zero(self.dim, self.order);
        for (a, e) in &self.parts {
            out.push(a.conj(), e.conj());
        }
        out
    }
    fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let mut out = WindowedSymbol::zero(self.dim, order);
        for (a, e) in &self.parts {
            out.push(a.truncate(order), e.clone());
        }
        out
    }
    fn valuation(&self) -> Option<i32> {
        self.parts.iter().filter_map(|(a, _)| a.valuation()).min()
    }
    fn lift(&self, c: &PhaseSymbol) -> Self {
        let mut out = WindowedSymbol::zero(self.dim, self.order);
        out.push(c.truncate(self.order), PhaseSymbol::zero(self.dim, EXACT));
        out
    }
    fn lambda_coeff(&self, k: i32) -> Self {
        let mut out = WindowedSymbol::zero(self.dim, EXACT);
        for (a, e) in &self.parts {
            out.push(a.lambda_coeff(k), e.clone());
        }
        out
    }
    fn shift_momenta(&self, shift: &[PhaseSymbol]) -> Self {
        WindowedSymbol::shift_momenta(self, shift)
    }
}
