//! Intertwiners between vector-potential representations of the same
//! magnetic product, and the Aharonov-Bohm obstruction.

use super::RepError;
use crate::geometry::LinDiffOp;
use crate::poly::PhaseSymbol;
use crate::scalars::{fmt_rat, Gauss, Rat};
use crate::starcore::{FormalOneForm, StarContext};

/// Local integrating function `S^j` with `dS^j = A − A'` on chart `id`.
#[derive(Clone, Debug)]
pub struct AbChart {
    pub id: String,
    pub s: PhaseSymbol,
}

/// Declared value of `(S^a − S^b)/(2πλ)` on an overlap, on top of the
/// polynomial difference of the local functions.
#[derive(Clone, Debug)]
pub struct ResidueDecl {
    pub a: String,
    pub b: String,
    pub winding: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbVerdict {
    Intertwinable,
    /// The local intertwiners `e^{(i/λ)S^j}` do not glue: the residue on
    /// the overlap is not an integer.
    NonIntertwinable {
        a: String,
        b: String,
        residue: String,
    },
}

/// `U = e^{(i/λ)S^j}` chart by chart, intertwining `ρ^A_κ` and `ρ^{A'}_κ`.
#[derive(Clone, Debug)]
pub struct AbIntertwiner {
    rep_a: StarContext,
    rep_b: StarContext,
    charts: Vec<AbChart>,
}

impl AbIntertwiner {
    /// `base` fixes geometry, κ and order; `A` and `A'` must have the same
    /// differential and `dS^j = A − A'` on every chart.
    pub fn new(
        base: &StarContext,
        a: FormalOneForm,
        a_prime: FormalOneForm,
        charts: Vec<AbChart>,
    ) -> Result<Self, RepError> {
        let diff = a.sub(&a_prime);
        if !diff.is_closed() {
            return Err(RepError::CochainMismatch { chart: "*".into() });
        }
        for c in &charts {
            if FormalOneForm::differential(&c.s) != diff {
                return Err(RepError::CochainMismatch {
                    chart: c.id.clone(),
                });
            }
        }
        let rep_a = base.clone().with_potential(a)?;
        let rep_b = base.clone().with_potential(a_prime)?;
        Ok(AbIntertwiner {
            rep_a,
            rep_b,
            charts,
        })
    }

    pub fn charts(&self) -> &[AbChart] {
        &self.charts
    }

    fn chart(&self, id: &str) -> Option<&AbChart> {
        self.charts.iter().find(|c| c.id == id)
    }

    /// `U^{-1} ρ^{A'}_κ(f) U` on chart `id`.
    pub fn conjugated(&self, id: &str, f: &PhaseSymbol) -> Option<LinDiffOp> {
        let c = self.chart(id)?;
        let n = self.rep_a.dim();
        let coupling: Vec<PhaseSymbol> = (0..n)
            .map(|j| c.s.d_q(j).shift_lambda(-1).scale(&Gauss::i()))
            .collect();
        Some(
            self.rep_b
                .rho_a(f)
                .conjugate_by_exp(&coupling)
                .truncate(self.rep_a.order()),
        )
    }

    /// `U^{-1} ρ^{A'}_κ(f) U − ρ^A_κ(f)` on chart `id`.
    pub fn residual(&self, id: &str, f: &PhaseSymbol) -> Option<LinDiffOp> {
        Some(self.conjugated(id, f)?.sub(&self.rep_a.rho_a(f)))
    }

    /// Whether the local intertwiners glue to a global one.
    ///
    /// On an overlap `S^a − S^b` is constant; a nonzero rational constant
    /// can never be a multiple of `2πλ`, and the declared winding must be
    /// an integer.
    pub fn verdict(&self, residues: &[ResidueDecl]) -> Result<AbVerdict, RepError> {
        for r in residues {
            let (ca, cb) = match (self.chart(&r.a), self.chart(&r.b)) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    return Err(RepError::CochainMismatch {
                        chart: format!("{}/{}", r.a, r.b),
                    })
                }
            };
            let diff = &ca.s - &cb.s;
            if !diff.is_base() || (0..diff.dim()).any(|j| !diff.d_q(j).is_zero()) {
                return Err(RepError::CochainMismatch {
                    chart: format!("{}/{}", r.a, r.b),
                });
            }
            if !diff.is_zero() {
                return Ok(AbVerdict::NonIntertwinable {
                    a: r.a.clone(),
                    b: r.b.clone(),
                    residue: format!("{} + ({})/(2π·λ)", fmt_rat(&r.winding), diff),
                });
            }
            if !r.winding.is_integer() {
                return Ok(AbVerdict::NonIntertwinable {
                    a: r.a.clone(),
                    b: r.b.clone(),
                    residue: fmt_rat(&r.winding),
                });
            }
        }
        Ok(AbVerdict::Intertwinable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::GeometryBuilder;
    use crate::random::SymbolGen;
    use crate::scalars::rat;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    fn base(kappa: Rat) -> StarContext {
        let g = GeometryBuilder::new(2)
            .christoffel(1, 0, 1, s("q1", 2))
            .alpha(0, s("q2", 2))
            .build()
            .unwrap();
        StarContext::new(g).with_kappa(kappa).unwrap().with_order(4)
    }

    #[test]
    fn exact_difference_intertwines() {
        // A − A' = λ d(q1^2), U = e^{i q1^2}
        let ap = FormalOneForm::new(vec![s("0", 2), s("l*q1", 2)]);
        let a = ap.add(&FormalOneForm::differential(&s("l*q1^2", 2)));
        for k in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let u = AbIntertwiner::new(
                &base(k),
                a.clone(),
                ap.clone(),
                vec![AbChart {
                    id: "c".into(),
                    s: s("l*q1^2", 2),
                }],
            )
            .unwrap();
            let mut gen = SymbolGen::new(31, 2);
            for _ in 0..3 {
                let f = gen.symbol(3, 2, 3);
                assert!(u.residual("c", &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn identical_potentials() {
        let a = FormalOneForm::new(vec![s("l*q2", 2), s("0", 2)]);
        let u = AbIntertwiner::new(
            &base(rat(1, 2)),
            a.clone(),
            a,
            vec![AbChart {
                id: "c".into(),
                s: s("0", 2),
            }],
        )
        .unwrap();
        assert_eq!(
            u.conjugated("c", &s("p1*p2", 2)).unwrap(),
            u.rep_a.rho_a(&s("p1*p2", 2)).truncate(4)
        );
    }

    #[test]
    fn aharonov_bohm_dichotomy() {
        let a = FormalOneForm::new(vec![s("l", 2), s("0", 2)]);
        let ap = FormalOneForm::zero(2);
        let charts = vec![
            AbChart {
                id: "n".into(),
                s: s("l*q1", 2),
            },
            AbChart {
                id: "s".into(),
                s: s("l*q1", 2),
            },
        ];
        let u = AbIntertwiner::new(&base(rat(1, 2)), a, ap, charts).unwrap();
        let ok = [
            ResidueDecl {
                a: "n".into(),
                b: "s".into(),
                winding: rat(0, 1),
            },
            ResidueDecl {
                a: "s".into(),
                b: "n".into(),
                winding: rat(2, 1),
            },
        ];
        assert_eq!(u.verdict(&ok).unwrap(), AbVerdict::Intertwinable);
        let ab = [
            ResidueDecl {
                a: "n".into(),
                b: "s".into(),
                winding: rat(0, 1),
            },
            ResidueDecl {
                a: "s".into(),
                b: "n".into(),
                winding: rat(1, 3),
            },
        ];
        assert!(matches!(
            u.verdict(&ab).unwrap(),
            AbVerdict::NonIntertwinable { .. }
        ));
    }

    #[test]
    fn cochain_mismatch() {
        let a = FormalOneForm::new(vec![s("l", 2), s("0", 2)]);
        let r = AbIntertwiner::new(
            &base(rat(0, 1)),
            a,
            FormalOneForm::zero(2),
            vec![AbChart {
                id: "c".into(),
                s: s("l*q2", 2),
            }],
        );
        assert!(matches!(r, Err(RepError::CochainMismatch { .. })));
    }
}
