//! Floating-point evaluators for exact symbols.

use fiberstar::field::WindowedSymbol;
use fiberstar::poly::{PhaseSymbol, MAX_DIM};
use num_complex::Complex64 as C64;

/// Polynomial in `(q, p)` with complex `f64` coefficients.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    terms: Vec<([u8; MAX_DIM], [u8; MAX_DIM], C64)>,
}

impl Poly {
    /// `s` with `λ` replaced by `lam`.
    pub fn at_lambda(s: &PhaseSymbol, lam: f64) -> Self {
        let mut out: Vec<([u8; MAX_DIM], [u8; MAX_DIM], C64)> = Vec::new();
        for (m, c) in s.terms() {
            let (re, im) = c.to_c64();
            let w = C64::new(re, im) * lam.powi(m.lam_exp());
            let key = (m.q_exps(), m.p_exps());
            match out.iter_mut().find(|t| (t.0, t.1) == key) {
                Some(t) => t.2 += w,
                None => out.push((key.0, key.1, w)),
            }
        }
        Poly { terms: out }
    }

    /// Coefficient of `λ^k`.
    pub fn coeff(s: &PhaseSymbol, k: i32) -> Self {
        Poly::at_lambda(&s.lambda_coeff(k), 1.0)
    }

    pub fn scaled(mut self, w: f64) -> Self {
        self.terms.iter_mut().for_each(|t| t.2 *= w);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes `q = values`, leaving a polynomial in `p` alone.
    pub fn fix_q(&self, values: &[f64]) -> Poly {
        let mut out: Vec<([u8; MAX_DIM], [u8; MAX_DIM], C64)> = Vec::new();
        for (eq, ep, c) in &self.terms {
            let w: f64 = values
                .iter()
                .zip(eq)
                .map(|(x, e)| x.powi(*e as i32))
                .product();
            match out.iter_mut().find(|t| t.1 == *ep) {
                Some(t) => t.2 += c * w,
                None => out.push(([0; MAX_DIM], *ep, c * w)),
            }
        }
        Poly { terms: out }
    }

    pub fn eval(&self, q: &[f64], p: &[f64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (eq, ep, c) in &self.terms {
            let mut w = 1.0;
            for (j, x) in q.iter().enumerate() {
                if eq[j] > 0 {
                    w *= x.powi(eq[j] as i32);
                }
            }
            for (j, x) in p.iter().enumerate() {
                if ep[j] > 0 {
                    w *= x.powi(ep[j] as i32);
                }
            }
            acc += c * w;
        }
        acc
    }
}

/// `Σ P_j e^{−Q_j}` with every amplitude split by λ-power.
#[derive(Clone, Debug)]
pub struct Windowed {
    lo: i32,
    parts: Vec<(Vec<Poly>, Poly)>,
}

impl Windowed {
    /// Amplitude coefficients of `λ^lo ..= λ^hi`.
    pub fn by_order(w: &WindowedSymbol, lo: i32, hi: i32) -> Self {
        let parts = w
            .parts()
            .iter()
            .map(|(a, e)| {
                (
                    (lo..=hi).map(|k| Poly::coeff(a, k)).collect(),
                    Poly::at_lambda(e, 0.0),
                )
            })
            .collect();
        Windowed { lo, parts }
    }

    /// The whole amplitude with `λ = lam`, as a single order.
    pub fn at_lambda(w: &WindowedSymbol, lam: f64) -> Self {
        let parts = w
            .parts()
            .iter()
            .map(|(a, e)| (vec![Poly::at_lambda(a, lam)], Poly::at_lambda(e, 0.0)))
            .collect();
        Windowed { lo: 0, parts }
    }

    /// Every part with `q = values` substituted.
    pub fn fix_q(&self, values: &[f64]) -> Windowed {
        let parts = self
            .parts
            .iter()
            .map(|(amps, e)| {
                (
                    amps.iter().map(|a| a.fix_q(values)).collect(),
                    e.fix_q(values),
                )
            })
            .collect();
        Windowed { lo: self.lo, parts }
    }

    pub fn lowest(&self) -> i32 {
        self.lo
    }

    /// Adds the value of every order at `(q, p)` into `acc`.
    pub fn accumulate(&self, q: &[f64], p: &[f64], acc: &mut [C64]) {
        for (amps, e) in &self.parts {
            let z = e.eval(q, p);
            let mag = (-z.re).exp();
            if mag == 0.0 {
                continue;
            }
            let win = C64::from_polar(mag, -z.im);
            for (a, slot) in amps.iter().zip(acc.iter_mut()) {
                if !a.is_zero() {
                    *slot += a.eval(q, p) * win;
                }
            }
        }
    }

    pub fn eval(&self, q: &[f64], p: &[f64]) -> C64 {
        let mut acc = [C64::new(0.0, 0.0)];
        self.accumulate(q, p, &mut acc);
        acc[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiberstar::expr::parse_symbol;

    #[test]
    fn matches_exact_evaluation() {
        let s = parse_symbol("(1/2)*q1^2*p2 + i*l*q2 - 3*l^2*p1^3", 2).unwrap();
        let (q, p, lam) = ([0.3, -1.2], [0.7, 2.0], 0.1);
        let (re, im) = s.eval(&q, &p, lam);
        let z = Poly::at_lambda(&s, lam).eval(&q, &p);
        assert!((z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14);
        let w = WindowedSymbol::new(
            s.clone(),
            parse_symbol("q1^2 + p1^2 + q2^2 + p2^2", 2).unwrap(),
            6,
        );
        let (re, im) = w.eval(&q, &p, lam);
        let z = Windowed::at_lambda(&w, lam).eval(&q, &p);
        assert!((z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14);
        let by = Windowed::by_order(&w, 0, 2);
        let mut acc = [C64::new(0.0, 0.0); 3];
        by.accumulate(&q, &p, &mut acc);
        let total = acc[0] + acc[1] * lam + acc[2] * lam * lam;
        assert!((total.re - re).abs() < 1e-14 && (total.im - im).abs() < 1e-14);
        let z = Windowed::at_lambda(&w, lam).fix_q(&q).eval(&[0.0, 0.0], &p);
        assert!((z.re - re).abs() < 1e-13 && (z.im - im).abs() < 1e-13);
    }
}
