//! Gaussian rationals `a + b*i` with arbitrary-precision parts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Build an exact rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with an optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gauss {
    pub re: Rat,
    pub im: Rat,
}

impl Gauss {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Gauss {
            re,
            im: Rat::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Gauss::real(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Gauss::real(rat(n, d))
    }

    pub fn i() -> Self {
        Gauss {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    /// `r * i` for a real rational `r`.
    pub fn imag(im: Rat) -> Self {
        Gauss {
            re: Rat::zero(),
            im,
        }
    }

    pub fn zero() -> Self {
        Gauss::default()
    }

    pub fn one() -> Self {
        Gauss::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gauss {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Gauss {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    /// Multiplies by `i^k`.
    pub fn mul_i_pow(&self, k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Gauss {
                re: -self.im.clone(),
                im: self.re.clone(),
            },
            2 => -self.clone(),
            _ => Gauss {
                re: self.im.clone(),
                im: -self.re.clone(),
            },
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Gauss::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `true` when the number is `±1` or `±i`, so a printed coefficient can be elided.
    fn is_unit_like(&self) -> bool {
        (self.im.is_zero() && self.re.abs().is_one())
            || (self.re.is_zero() && self.im.abs().is_one())
    }

    /// Splits off a leading sign for printing sums: returns `(negative, magnitude)`
    /// when the number is purely real or purely imaginary.
    pub(crate) fn sign_split(&self) -> (bool, Gauss) {
        if (self.im.is_zero() && self.re.is_negative())
            || (self.re.is_zero() && self.im.is_negative())
        {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    /// Text used as the multiplier in front of a monomial, e.g. `3*`, `(1/2)*i*`, `(1 + i)*`.
    /// Empty for `1`.  Assumes the sign was already split off.
    pub(crate) fn coeff_prefix(&self) -> String {
        if self.is_one() {
            return String::new();
        }
        if self.is_unit_like() {
            return "i*".to_string();
        }
        if self.im.is_zero() {
            return format!("{}*", wrap(&self.re));
        }
        if self.re.is_zero() {
            return format!("{}*i*", wrap(&self.im));
        }
        format!("({})*", self)
    }

    /// Text for a standalone term (constant monomial).
    pub(crate) fn standalone(&self) -> String {
        if self.im.is_zero() {
            return fmt_rat(&self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return "i".into();
            }
            return format!("{}*i", wrap(&self.im));
        }
        format!("({})", self)
    }
}

fn wrap(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({})", fmt_rat(r))
    }
}

impl fmt::Display for Gauss {
    /// `p/q + r/s*i` form; a zero part is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rat(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_txt)
            } else {
                write!(f, "{}", im_txt)
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{} {} {}", fmt_rat(&self.re), sign, im_txt)
        }
    }
}

impl<'a> Add<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::real(&self.re * &o.re);
        }
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Add for Gauss {
    type Output = Gauss;
    fn add(self, o: Gauss) -> Gauss {
        &self + &o
    }
}

impl Sub for Gauss {
    type Output = Gauss;
    fn sub(self, o: Gauss) -> Gauss {
        &self - &o
    }
}

impl Mul for Gauss {
    type Output = Gauss;
    fn mul(self, o: Gauss) -> Gauss {
        &self * &o
    }
}

impl AddAssign<&Gauss> for Gauss {
    fn add_assign(&mut self, o: &Gauss) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Gauss> for Gauss {
    fn sub_assign(&mut self, o: &Gauss) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl From<i64> for Gauss {
    fn from(n: i64) -> Self {
        Gauss::int(n)
    }
}

impl From<Rat> for Gauss {
    fn from(r: Rat) -> Self {
        Gauss::real(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(Gauss::frac(1, 2).to_string(), "1/2");
        assert_eq!(Gauss::new(rat(1, 2), rat(-3, 4)).to_string(), "1/2 - 3/4*i");
        assert_eq!(Gauss::i().to_string(), "i");
        assert_eq!((-Gauss::i()).to_string(), "-i");
    }

    #[test]
    fn i_powers() {
        let z = Gauss::new(rat_int(2), rat_int(3));
        for k in -5..6 {
            let mut w = z.clone();
            let step = if k >= 0 { Gauss::i() } else { -Gauss::i() };
            for _ in 0..k.abs() {
                w = &w * &step;
            }
            assert_eq!(z.mul_i_pow(k), w);
        }
    }

    #[test]
    fn inverse() {
        let z = Gauss::new(rat(1, 3), rat_int(-2));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(Gauss::zero().inv().is_none());
    }
}
