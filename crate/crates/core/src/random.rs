//! Seeded generators for symbols, one-forms and chart geometries.
//!
//! Everything is driven by a ChaCha stream so a seed fixes every report
//! byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::WindowedSymbol;
use crate::geometry::{BaseGeometry, GeometryBuilder};
use crate::poly::{Mono, PhaseSymbol, EXACT, MAX_DIM};
use crate::scalars::{rat, Gauss, Rat};
use crate::starcore::FormalOneForm;

pub struct SymbolGen {
    rng: ChaCha8Rng,
    dim: usize,
}

impl SymbolGen {
    pub fn new(seed: u64, dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        SymbolGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Small nonzero rational `a/b` with `|a| ≤ 3`, `b ∈ {1, 2, 3}`.
    pub fn rational(&mut self) -> Rat {
        let mut a = 0;
        while a == 0 {
            a = self.rng.gen_range(-3..=3);
        }
        rat(a, self.rng.gen_range(1..=3))
    }

    fn gauss(&mut self, real: bool) -> Gauss {
        if real || self.rng.gen_bool(0.5) {
            Gauss::real(self.rational())
        } else {
            Gauss::new(self.rational(), self.rational())
        }
    }

    fn exps(&mut self, total: u32) -> [u8; MAX_DIM] {
        let mut e = [0u8; MAX_DIM];
        let k = self.rng.gen_range(0..=total);
        for _ in 0..k {
            let j = self.rng.gen_range(0..self.dim);
            e[j] += 1;
        }
        e
    }

    fn build(&mut self, p_deg: u32, q_deg: u32, terms: usize, real: bool) -> PhaseSymbol {
        let mut s = PhaseSymbol::zero(self.dim, EXACT);
        for _ in 0..terms {
            let q = self.exps(q_deg);
            let p = self.exps(p_deg);
            let c = self.gauss(real);
            s.add_term(Mono::new(0, &q, &p), &c);
        }
        s
    }

    /// λ-free symbol with complex coefficients.
    pub fn symbol(&mut self, p_deg: u32, q_deg: u32, terms: usize) -> PhaseSymbol {
        self.build(p_deg, q_deg, terms, false)
    }

    /// λ-free symbol with real coefficients.
    pub fn real_symbol(&mut self, p_deg: u32, q_deg: u32, terms: usize) -> PhaseSymbol {
        self.build(p_deg, q_deg, terms, true)
    }

    /// Real polynomial in `q` only.
    pub fn base(&mut self, q_deg: u32, terms: usize) -> PhaseSymbol {
        self.build(0, q_deg, terms, true)
    }

    /// Real one-form with polynomial components of degree ≤ `q_deg`.
    pub fn one_form(&mut self, q_deg: u32, terms: usize) -> FormalOneForm {
        FormalOneForm::new((0..self.dim).map(|_| self.base(q_deg, terms)).collect())
    }

    /// `du` for a random real base polynomial `u`.
    pub fn exact_form(&mut self, q_deg: u32, terms: usize) -> FormalOneForm {
        let u = self.base(q_deg + 1, terms);
        FormalOneForm::differential(&u)
    }

    /// `P·exp(−Σ(q_j² + p_j²) − c q¹p₁)` with a random complex `P` and
    /// `|c| ≤ 1`, so the window stays positive definite.
    pub fn windowed(&mut self, p_deg: u32, q_deg: u32, terms: usize, order: i32) -> WindowedSymbol {
        let amp = self.symbol(p_deg, q_deg, terms);
        let c = self.rational() / rat(3, 1);
        let mut e = PhaseSymbol::zero(self.dim, EXACT);
        for j in 0..self.dim {
            e = &e + &(&PhaseSymbol::q(self.dim, j).pow(2) + &PhaseSymbol::p(self.dim, j).pow(2));
        }
        e.add_term(Mono::new(0, &unit(0), &unit(0)), &Gauss::real(c));
        WindowedSymbol::new(amp, e, order)
    }

    /// Torsion-free chart with polynomial Christoffel symbols and α_μ.
    pub fn geometry(&mut self, q_deg: u32, entries: usize) -> BaseGeometry {
        let n = self.dim;
        let mut b = GeometryBuilder::new(n).id("random");
        for _ in 0..entries {
            let l = self.rng.gen_range(0..n);
            let j = self.rng.gen_range(0..n);
            let k = self.rng.gen_range(0..n);
            let v = self.base(q_deg, 2);
            b = b.christoffel(l, j, k, v);
        }
        for j in 0..n {
            let v = self.base(q_deg, 1);
            b = b.alpha(j, v);
        }
        b.build().expect("symmetric real data")
    }
}

fn unit(j: usize) -> [u8; MAX_DIM] {
    let mut e = [0u8; MAX_DIM];
    e[j] = 1;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = SymbolGen::new(7, 2).symbol(3, 2, 4);
        let b = SymbolGen::new(7, 2).symbol(3, 2, 4);
        assert_eq!(a, b);
        assert!(a.p_degree() <= 3 && a.q_degree() <= 2);
        let g = SymbolGen::new(3, 2).geometry(1, 3);
        assert_eq!(g.dim(), 2);
    }
}
