//! Exact polynomials in `λ`, `q` and `p`.

mod mono;
mod symbol;

pub use mono::{Mono, MAX_DIM};
pub use symbol::{factorial, multi_degree, multi_factorial, MultiIndex, PhaseSymbol, EXACT};

/// All multi-indices in `dim` variables with total degree exactly `k`.
pub fn multi_indices(dim: usize, k: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_DIM];
    fn rec(dim: usize, j: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if j + 1 == dim {
            cur[j] = left as u8;
            out.push(*cur);
            cur[j] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[j] = e as u8;
            rec(dim, j + 1, left - e, cur, out);
        }
        cur[j] = 0;
    }
    if dim == 0 {
        if k == 0 {
            out.push(cur);
        }
        return out;
    }
    rec(dim, 0, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::scalars::Gauss;
    use proptest::prelude::*;

    pub(crate) fn arb_symbol(dim: usize) -> impl Strategy<Value = PhaseSymbol> {
        prop::collection::vec(
            (
                0i32..3,
                prop::array::uniform3(0u8..3),
                prop::array::uniform3(0u8..3),
                -4i64..5,
                -3i64..4,
            ),
            0..6,
        )
        .prop_map(move |terms| {
            PhaseSymbol::from_terms(
                dim,
                EXACT,
                terms.into_iter().map(|(k, mut q, mut p, a, b)| {
                    for j in dim..MAX_DIM {
                        q[j] = 0;
                        p[j] = 0;
                    }
                    (
                        Mono::new(k, &q, &p),
                        Gauss::new(crate::scalars::rat_int(a), crate::scalars::rat(b, 2)),
                    )
                }),
            )
        })
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(1, 5), vec![[5, 0, 0]]);
    }

    #[test]
    fn derivatives() {
        let f = parse_symbol("q1^2*p1^3 + q2*p2", 2).unwrap();
        assert_eq!(f.d_p(0), parse_symbol("3*q1^2*p1^2", 2).unwrap());
        assert_eq!(f.d_q(1), parse_symbol("p2", 2).unwrap());
        assert_eq!(
            f.d_p_multi(&[2, 0, 0]),
            parse_symbol("6*q1^2*p1", 2).unwrap()
        );
        assert_eq!(f.iota(), PhaseSymbol::zero(2, EXACT));
        assert_eq!(f.p_coeff(&[3, 0, 0]), parse_symbol("q1^2", 2).unwrap());
    }

    #[test]
    fn truncated_product_order() {
        let f = parse_symbol("1 + l", 1).unwrap().truncate(3);
        let g = parse_symbol("l", 1).unwrap();
        let h = &f * &g;
        assert_eq!(h.order(), 4);
        assert_eq!(h, parse_symbol("l + l^2", 1).unwrap().truncate(4));
    }

    #[test]
    fn substitution() {
        let f = parse_symbol("p1^2 + q1*p1", 1).unwrap();
        let shifted = f.substitute(&[None], &[Some(parse_symbol("p1 - 2*q1", 1).unwrap())]);
        assert_eq!(
            shifted,
            parse_symbol("(p1 - 2*q1)^2 + q1*(p1 - 2*q1)", 1).unwrap()
        );
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_symbol(2), b in arb_symbol(2), c in arb_symbol(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&a - &b) + &b).agrees_with(&a));
        }

        #[test]
        fn print_parse_roundtrip(a in arb_symbol(2)) {
            let printed = a.to_string();
            prop_assert_eq!(parse_symbol(&printed, 2).unwrap(), a);
        }

        #[test]
        fn leibniz(a in arb_symbol(2), b in arb_symbol(2)) {
            for j in 0..2 {
                prop_assert_eq!((&a * &b).d_p(j), &(&a.d_p(j) * &b) + &(&a * &b.d_p(j)));
                prop_assert_eq!((&a * &b).d_q(j), &(&a.d_q(j) * &b) + &(&a * &b.d_q(j)));
            }
        }
    }
}
