//! Truncated formal power and Laurent series in λ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::gauss::{Gauss, Rat};
use super::ScalarError;

pub const DEFAULT_ORDER: i32 = 6;
pub const DEFAULT_LAURENT_BOUND: i32 = -2;

/// Whether negative λ-exponents may appear.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    PowerSeries,
    Laurent { lower: i32 },
}

impl ScalarMode {
    pub fn lower(self) -> i32 {
        match self {
            ScalarMode::PowerSeries => 0,
            ScalarMode::Laurent { lower } => lower,
        }
    }

    pub fn is_laurent(self) -> bool {
        matches!(self, ScalarMode::Laurent { .. })
    }
}

/// `Σ_{ℓ ≤ k ≤ N} c_k λ^k` with exact Gaussian-rational coefficients.
///
/// Coefficients above the truncation order are unknown and never stored;
/// zero coefficients are never stored either.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaScalar {
    coeffs: BTreeMap<i32, Gauss>,
    order: i32,
    mode: ScalarMode,
}

impl LambdaScalar {
    pub fn zero(order: i32) -> Self {
        LambdaScalar {
            coeffs: BTreeMap::new(),
            order,
            mode: ScalarMode::PowerSeries,
        }
    }

    pub fn constant(c: Gauss, order: i32) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(order: i32) -> Self {
        Self::constant(Gauss::one(), order)
    }

    /// `λ` itself.
    pub fn lambda(order: i32) -> Self {
        Self::monomial(Gauss::one(), 1, order)
    }

    /// `c λ^k`; switches to Laurent mode for negative `k`.
    pub fn monomial(c: Gauss, k: i32, order: i32) -> Self {
        let mode = if k < 0 {
            ScalarMode::Laurent {
                lower: k.min(DEFAULT_LAURENT_BOUND),
            }
        } else {
            ScalarMode::PowerSeries
        };
        Self::from_map(std::iter::once((k, c)), order, mode)
    }

    pub fn from_map<I: IntoIterator<Item = (i32, Gauss)>>(
        terms: I,
        order: i32,
        mode: ScalarMode,
    ) -> Self {
        let mut coeffs: BTreeMap<i32, Gauss> = BTreeMap::new();
        for (k, c) in terms {
            if k > order {
                continue;
            }
            let e = coeffs.entry(k).or_default();
            *e += &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        LambdaScalar {
            coeffs,
            order,
            mode,
        }
    }

    /// Builds a real scalar from floating-point coefficients (exact binary expansion).
    pub fn from_f64(values: &[f64], order: i32) -> Self {
        let terms = values
            .iter()
            .enumerate()
            .filter_map(|(k, v)| BigRational::from_float(*v).map(|r| (k as i32, Gauss::real(r))));
        Self::from_map(terms, order, ScalarMode::PowerSeries)
    }

    pub fn with_mode(mut self, mode: ScalarMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn coeff(&self, k: i32) -> Gauss {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Gauss)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    fn low(&self) -> i32 {
        self.valuation().unwrap_or(self.mode.lower())
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        LambdaScalar {
            coeffs: self
                .coeffs
                .range(..=order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            order,
            mode: self.mode,
        }
    }

    fn join_mode(a: ScalarMode, b: ScalarMode) -> Result<ScalarMode, ScalarError> {
        match (a, b) {
            (ScalarMode::PowerSeries, ScalarMode::PowerSeries) => Ok(ScalarMode::PowerSeries),
            (ScalarMode::Laurent { lower: x }, ScalarMode::Laurent { lower: y }) => {
                Ok(ScalarMode::Laurent { lower: x.min(y) })
            }
            _ => Err(ScalarError::ModeMismatch),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        let mode = Self::join_mode(self.mode, o.mode)?;
        let order = self.order.min(o.order);
        let terms = self.terms().chain(o.terms()).map(|(k, c)| (k, c.clone()));
        Ok(Self::from_map(terms, order, mode))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        let mode = match Self::join_mode(self.mode, o.mode)? {
            ScalarMode::Laurent { .. } => ScalarMode::Laurent {
                lower: self.mode.lower() + o.mode.lower(),
            },
            m => m,
        };
        let order = (self.order.saturating_add(o.low())).min(o.order.saturating_add(self.low()));
        let mut terms = Vec::new();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                if a + b <= order {
                    terms.push((a + b, x * y));
                }
            }
        }
        Ok(Self::from_map(terms, order, mode))
    }

    pub fn conjugate(&self) -> Self {
        LambdaScalar {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.conj())).collect(),
            order: self.order,
            mode: self.mode,
        }
    }

    pub fn scale(&self, c: &Gauss) -> Self {
        Self::from_map(self.terms().map(|(k, x)| (k, x * c)), self.order, self.mode)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(Gauss::is_real)
    }

    /// Ordered-ring positivity: the lowest nonzero coefficient is a positive real.
    pub fn is_positive(&self) -> Result<bool, ScalarError> {
        if !self.is_real() {
            return Err(ScalarError::NonRealScalar);
        }
        match self.coeffs.values().next() {
            None => Err(ScalarError::ZeroScalar),
            Some(c) => Ok(c.re.is_positive()),
        }
    }

    /// `a ≥ 0` in the ordered ring: zero or positive.
    pub fn is_nonnegative(&self) -> Result<bool, ScalarError> {
        match self.is_positive() {
            Err(ScalarError::ZeroScalar) => Ok(true),
            r => r,
        }
    }

    pub fn invert(&self) -> Result<Self, ScalarError> {
        let r = self.valuation().ok_or(ScalarError::NotInvertible)?;
        if r != 0 && !self.mode.is_laurent() {
            return Err(ScalarError::NotInvertible);
        }
        let lead_inv = self.coeff(r).inv().ok_or(ScalarError::NotInvertible)?;
        // a = c λ^r (1 + x) with x of positive valuation, known up to order N - r
        let unit_order = self.order - r;
        let x: BTreeMap<i32, Gauss> = self
            .terms()
            .filter(|(k, _)| *k > r)
            .map(|(k, c)| (k - r, c * &lead_inv))
            .collect();
        // (1 + x)^{-1} = Σ (-x)^m
        let mut inv: BTreeMap<i32, Gauss> = BTreeMap::new();
        inv.insert(0, Gauss::one());
        let mut power: BTreeMap<i32, Gauss> = inv.clone();
        for _ in 0..unit_order.max(0) {
            let mut next: BTreeMap<i32, Gauss> = BTreeMap::new();
            for (a, u) in &power {
                for (b, v) in &x {
                    if a + b <= unit_order {
                        let e = next.entry(a + b).or_default();
                        *e -= &(u * v);
                    }
                }
            }
            next.retain(|_, c| !c.is_zero());
            if next.is_empty() {
                break;
            }
            for (k, c) in &next {
                *inv.entry(*k).or_default() += c;
            }
            power = next;
        }
        let order = unit_order - r;
        let mode = if -r < 0 {
            ScalarMode::Laurent {
                lower: (-r).min(self.mode.lower()),
            }
        } else {
            self.mode
        };
        Ok(Self::from_map(
            inv.into_iter().map(|(k, c)| (k - r, &c * &lead_inv)),
            order,
            mode,
        ))
    }

    /// Evaluates at a numeric λ (used when substituting λ = ħ).
    pub fn eval_f64(&self, lambda: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.terms() {
            let (a, b) = c.to_c64();
            let w = lambda.powi(k);
            re += a * w;
            im += b * w;
        }
        (re, im)
    }

    pub fn is_exactly(&self, c: i64) -> bool {
        if c == 0 {
            return self.is_zero();
        }
        self.coeffs.len() == 1 && self.coeff(0) == Gauss::int(c)
    }

    pub fn rational_coeff(&self, k: i32) -> Rat {
        self.coeff(k).re
    }
}

impl fmt::Display for LambdaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let (neg, mag) = c.sign_split();
            let body = match k {
                0 => mag.standalone(),
                1 => format!("{}l", mag.coeff_prefix()),
                _ => format!("{}l^{}", mag.coeff_prefix(), k),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{}", body)?,
                (true, false) => write!(f, "{}", body)?,
                (false, true) => write!(f, " - {}", body)?,
                (false, false) => write!(f, " + {}", body)?,
            }
            first = false;
        }
        Ok(())
    }
}

fn unwrap_op(r: Result<LambdaScalar, ScalarError>) -> LambdaScalar {
    r.unwrap_or_else(|e| panic!("λ-scalar arithmetic: {e}"))
}

impl<'a> Add<&'a LambdaScalar> for &'a LambdaScalar {
    type Output = LambdaScalar;
    /// Panics when mixing power-series and Laurent scalars; use `checked_add` to handle that case.
    fn add(self, o: &LambdaScalar) -> LambdaScalar {
        unwrap_op(self.checked_add(o))
    }
}

impl<'a> Sub<&'a LambdaScalar> for &'a LambdaScalar {
    type Output = LambdaScalar;
    fn sub(self, o: &LambdaScalar) -> LambdaScalar {
        unwrap_op(self.checked_add(&-o.clone()))
    }
}

impl<'a> Mul<&'a LambdaScalar> for &'a LambdaScalar {
    type Output = LambdaScalar;
    fn mul(self, o: &LambdaScalar) -> LambdaScalar {
        unwrap_op(self.checked_mul(o))
    }
}

impl Neg for LambdaScalar {
    type Output = LambdaScalar;
    fn neg(self) -> LambdaScalar {
        LambdaScalar {
            coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect(),
            order: self.order,
            mode: self.mode,
        }
    }
}

impl Zero for LambdaScalar {
    fn zero() -> Self {
        LambdaScalar::zero(DEFAULT_ORDER)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Add for LambdaScalar {
    type Output = LambdaScalar;
    fn add(self, o: LambdaScalar) -> LambdaScalar {
        &self + &o
    }
}
