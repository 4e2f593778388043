//! Exact coefficient arithmetic.
//!
//! [`Gauss`] is a Gaussian rational, [`LambdaScalar`] a truncated series in λ
//! over it.  λ is treated as a real parameter, so conjugation acts only on the
//! coefficients.

mod gauss;
mod lambda;

pub use gauss::{fmt_rat, parse_rat, rat, rat_int, Gauss, Rat};
pub use lambda::{LambdaScalar, ScalarMode, DEFAULT_LAURENT_BOUND, DEFAULT_ORDER};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalar has a nonzero imaginary part")]
    NonRealScalar,
    #[error("scalar is zero; positivity is undefined")]
    ZeroScalar,
    #[error("scalar is not invertible")]
    NotInvertible,
    #[error("cannot mix power-series and Laurent scalars")]
    ModeMismatch,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ls(terms: &[(i32, i64)]) -> LambdaScalar {
        LambdaScalar::from_map(
            terms.iter().map(|(k, c)| (*k, Gauss::int(*c))),
            6,
            ScalarMode::PowerSeries,
        )
    }

    #[test]
    fn difference_of_squares() {
        let a = ls(&[(0, 1), (1, 1)]);
        let b = ls(&[(0, 1), (1, -1)]);
        assert_eq!(&a * &b, ls(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn conjugate_fixes_lambda() {
        let z = LambdaScalar::monomial(Gauss::i(), 1, 6);
        assert_eq!(z.conjugate(), LambdaScalar::monomial(-Gauss::i(), 1, 6));
    }

    #[test]
    fn laurent_inverse_of_lambda() {
        let l = LambdaScalar::lambda(6).with_mode(ScalarMode::Laurent { lower: -2 });
        let inv = l.invert().unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        let one = &inv * &l;
        assert!(one.is_exactly(1));
    }

    #[test]
    fn power_series_lambda_not_invertible() {
        assert_eq!(
            LambdaScalar::lambda(6).invert(),
            Err(ScalarError::NotInvertible)
        );
        assert_eq!(
            LambdaScalar::zero(6).invert(),
            Err(ScalarError::NotInvertible)
        );
    }

    #[test]
    fn geometric_series() {
        let inv = ls(&[(0, 1), (1, 1)]).invert().unwrap();
        assert_eq!(
            inv,
            ls(&[(0, 1), (1, -1), (2, 1), (3, -1), (4, 1), (5, -1), (6, 1)])
        );
        assert_eq!(
            ls(&[(0, 2)]).invert().unwrap(),
            LambdaScalar::constant(Gauss::frac(1, 2), 6)
        );
    }

    #[test]
    fn positivity_examples() {
        assert_eq!(ls(&[(2, 1), (3, -5)]).is_positive(), Ok(true));
        assert_eq!(ls(&[(0, -3), (1, 1)]).is_positive(), Ok(false));
        let z = LambdaScalar::from_map(
            [(0, Gauss::int(2)), (1, Gauss::i())],
            6,
            ScalarMode::PowerSeries,
        );
        let zz = &z.conjugate() * &z;
        assert_eq!(zz, ls(&[(0, 4), (2, 1)]));
        assert_eq!(zz.is_positive(), Ok(true));
        assert_eq!(
            LambdaScalar::zero(6).is_positive(),
            Err(ScalarError::ZeroScalar)
        );
        assert_eq!(
            LambdaScalar::constant(Gauss::i(), 6).is_positive(),
            Err(ScalarError::NonRealScalar)
        );
    }

    #[test]
    fn mixing_modes_is_an_error() {
        let a = LambdaScalar::one(6);
        let b = LambdaScalar::monomial(Gauss::one(), -1, 6);
        assert_eq!(a.checked_add(&b), Err(ScalarError::ModeMismatch));
    }

    #[test]
    fn product_order_uses_valuations() {
        let a = LambdaScalar::monomial(Gauss::one(), 2, 6);
        let b = LambdaScalar::monomial(Gauss::one(), 1, 4);
        // a known through λ^6 with valuation 2, b through λ^4 with valuation 1
        assert_eq!((&a * &b).order(), 6);
    }

    #[test]
    fn display() {
        let a = LambdaScalar::from_map(
            [
                (0, Gauss::int(1)),
                (1, Gauss::frac(-1, 2)),
                (2, Gauss::new(rat(1, 3), rat_int(2))),
            ],
            6,
            ScalarMode::PowerSeries,
        );
        assert_eq!(a.to_string(), "1 - (1/2)*l + (1/3 + 2*i)*l^2");
    }

    fn arb_real() -> impl Strategy<Value = LambdaScalar> {
        prop::collection::vec((0i32..=6, -5i64..=5), 1..5).prop_map(|v| {
            LambdaScalar::from_map(
                v.into_iter().map(|(k, c)| (k, Gauss::int(c))),
                6,
                ScalarMode::PowerSeries,
            )
        })
    }

    fn arb_complex() -> impl Strategy<Value = LambdaScalar> {
        prop::collection::vec((0i32..=6, -5i64..=5, -5i64..=5), 1..5).prop_map(|v| {
            LambdaScalar::from_map(
                v.into_iter()
                    .map(|(k, a, b)| (k, Gauss::new(rat_int(a), rat_int(b)))),
                6,
                ScalarMode::PowerSeries,
            )
        })
    }

    proptest! {
        #[test]
        fn positives_closed(a in arb_real(), b in arb_real()) {
            prop_assume!(a.is_positive() == Ok(true) && b.is_positive() == Ok(true));
            prop_assert_eq!((&a + &b).is_positive(), Ok(true));
            prop_assert_eq!((&a * &b).is_positive(), Ok(true));
        }

        #[test]
        fn trichotomy(a in arb_real()) {
            prop_assume!(!a.is_zero());
            let p = a.is_positive().unwrap();
            let n = (-a.clone()).is_positive().unwrap();
            prop_assert!(p ^ n);
        }

        #[test]
        fn norm_is_nonnegative(z in arb_complex()) {
            let zz = &z.conjugate() * &z;
            prop_assert!(zz.is_real());
            if z.is_zero() {
                prop_assert!(zz.is_zero());
            } else {
                prop_assert_eq!(zz.is_positive(), Ok(true));
            }
        }

        #[test]
        fn truncation_consistent(a in arb_complex(), b in arb_complex(), m in 0i32..6) {
            let full = (&a * &b).truncate(m);
            let low = &a.truncate(m) * &b.truncate(m);
            prop_assert_eq!(full.truncate(m), low.truncate(m));
        }

        #[test]
        fn inverse_roundtrip(a in arb_complex()) {
            prop_assume!(a.valuation() == Some(0));
            let inv = a.invert().unwrap();
            prop_assert!((&a * &inv).is_exactly(1));
        }
    }
}
