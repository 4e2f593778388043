//! Packed monomials `λ^k q^a p^b` in at most three chart dimensions.

use std::fmt;

pub const MAX_DIM: usize = 3;

const LAM_SHIFT: u32 = 56;
const LAM_OFFSET: i32 = 64;
const HIGH_BITS: u64 = 0x8080_8080_8080_8000;

/// A monomial packed into one word.  From the most significant byte down the
/// fields are: λ-exponent (offset by 64), p₁, p₂, p₃, q¹, q², q³.  The packed
/// order therefore sorts by λ-exponent first, then by momenta.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(u64);

#[inline]
fn p_shift(j: usize) -> u32 {
    48 - 8 * j as u32
}

#[inline]
fn q_shift(j: usize) -> u32 {
    24 - 8 * j as u32
}

impl Mono {
    pub const ONE: Mono = Mono((LAM_OFFSET as u64) << LAM_SHIFT);

    pub fn new(lam: i32, q: &[u8], p: &[u8]) -> Mono {
        let mut m = Mono::ONE.with_lam(lam);
        for (j, e) in q.iter().enumerate() {
            m = m.with_q(j, *e);
        }
        for (j, e) in p.iter().enumerate() {
            m = m.with_p(j, *e);
        }
        m
    }

    pub fn lam(k: i32) -> Mono {
        Mono::ONE.with_lam(k)
    }

    pub fn q(j: usize) -> Mono {
        Mono::ONE.with_q(j, 1)
    }

    pub fn p(j: usize) -> Mono {
        Mono::ONE.with_p(j, 1)
    }

    #[inline]
    pub fn lam_exp(self) -> i32 {
        (self.0 >> LAM_SHIFT) as i32 - LAM_OFFSET
    }

    #[inline]
    pub fn q_exp(self, j: usize) -> u8 {
        (self.0 >> q_shift(j)) as u8
    }

    #[inline]
    pub fn p_exp(self, j: usize) -> u8 {
        (self.0 >> p_shift(j)) as u8
    }

    pub fn with_lam(self, k: i32) -> Mono {
        let s = k + LAM_OFFSET;
        assert!((0..=255).contains(&s), "λ-exponent {k} out of range");
        Mono((self.0 & !(0xff << LAM_SHIFT)) | ((s as u64) << LAM_SHIFT))
    }

    pub fn with_q(self, j: usize, e: u8) -> Mono {
        Mono((self.0 & !(0xff << q_shift(j))) | ((e as u64) << q_shift(j)))
    }

    pub fn with_p(self, j: usize, e: u8) -> Mono {
        Mono((self.0 & !(0xff << p_shift(j))) | ((e as u64) << p_shift(j)))
    }

    pub fn p_degree(self) -> u32 {
        (0..MAX_DIM).map(|j| self.p_exp(j) as u32).sum()
    }

    pub fn q_degree(self) -> u32 {
        (0..MAX_DIM).map(|j| self.q_exp(j) as u32).sum()
    }

    /// The monomial with every momentum exponent cleared.
    pub fn base_part(self) -> Mono {
        Mono(self.0 & !0x00ff_ffff_0000_0000)
    }

    /// Only the momentum exponents (λ⁰, no q).
    pub fn p_part(self) -> Mono {
        Mono((self.0 & 0x00ff_ffff_0000_0000) | Mono::ONE.0)
    }

    pub fn without_lam(self) -> Mono {
        self.with_lam(0)
    }

    pub fn p_exps(self) -> [u8; MAX_DIM] {
        [self.p_exp(0), self.p_exp(1), self.p_exp(2)]
    }

    pub fn q_exps(self) -> [u8; MAX_DIM] {
        [self.q_exp(0), self.q_exp(1), self.q_exp(2)]
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Mono) -> Mono {
        if (self.0 | o.0) & HIGH_BITS == 0 {
            let lam_sum = (self.0 >> LAM_SHIFT) + (o.0 >> LAM_SHIFT);
            if (LAM_OFFSET as u64..LAM_OFFSET as u64 + 128).contains(&lam_sum) {
                return Mono(self.0 + o.0 - Mono::ONE.0);
            }
        }
        self.mul_slow(o)
    }

    fn mul_slow(self, o: Mono) -> Mono {
        let mut m = Mono::ONE.with_lam(self.lam_exp() + o.lam_exp());
        for j in 0..MAX_DIM {
            let q = self.q_exp(j) as u32 + o.q_exp(j) as u32;
            let p = self.p_exp(j) as u32 + o.p_exp(j) as u32;
            assert!(q < 256 && p < 256, "monomial exponent overflow");
            m = m.with_q(j, q as u8).with_p(j, p as u8);
        }
        m
    }

    /// `self / o` when `o` divides `self` in the q,p exponents (λ may go negative).
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, o: Mono) -> Option<Mono> {
        let mut m = Mono::ONE.with_lam(self.lam_exp() - o.lam_exp());
        for j in 0..MAX_DIM {
            m = m
                .with_q(j, self.q_exp(j).checked_sub(o.q_exp(j))?)
                .with_p(j, self.p_exp(j).checked_sub(o.p_exp(j))?);
        }
        Some(m)
    }

    /// Writes the monomial as `q1^2*p1*l^3`; empty for the unit monomial.
    pub fn render(self, dim: usize) -> String {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        };
        for j in 0..dim {
            push(format!("q{}", j + 1), self.q_exp(j) as u32);
        }
        for j in 0..dim {
            push(format!("p{}", j + 1), self.p_exp(j) as u32);
        }
        let k = self.lam_exp();
        if k != 0 {
            if k == 1 {
                parts.push("l".into());
            } else {
                parts.push(format!("l^{k}"));
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.render(MAX_DIM);
        write!(f, "Mono({})", if r.is_empty() { "1" } else { &r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        let m = Mono::new(-3, &[1, 0, 7], &[2, 5, 0]);
        assert_eq!(m.lam_exp(), -3);
        assert_eq!(m.q_exps(), [1, 0, 7]);
        assert_eq!(m.p_exps(), [2, 5, 0]);
        assert_eq!(m.p_degree(), 7);
        assert_eq!(m.base_part(), Mono::new(-3, &[1, 0, 7], &[]));
        assert_eq!(m.p_part(), Mono::new(0, &[], &[2, 5, 0]));
    }

    #[test]
    fn multiply_and_divide() {
        let a = Mono::new(2, &[1, 2], &[0, 1]);
        let b = Mono::new(-1, &[3, 0], &[4, 0]);
        let c = a.mul(b);
        assert_eq!(c, Mono::new(1, &[4, 2], &[4, 1]));
        assert_eq!(c.div(b), Some(a));
        assert_eq!(a.div(b), None);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn exponent_overflow_is_caught() {
        let big = Mono::new(0, &[200], &[]);
        let _ = big.mul(big);
    }
}
