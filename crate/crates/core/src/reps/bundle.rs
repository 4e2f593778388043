//! Line bundles given by local connection forms and transition phases.
//!
//! A local section is stored as `a(q)·e^{(i/λ)φ(q)}`: the phase is never
//! expanded, operators act on the amplitude after conjugation by the phase.
//! On an overlap of charts `j`, `k` with transition phase `S^{jk}`,
//! `θ^j − θ^k = (i/λ) dS^{jk}` and `u^k = e^{(i/λ)S^{jk}} u^j`.

use std::collections::BTreeMap;

use super::RepError;
use crate::geometry::LinDiffOp;
use crate::poly::PhaseSymbol;
use crate::scalars::Gauss;
use crate::starcore::{Atlas, LaurentPolicy, StarContext};

/// `amplitude · e^{(i/λ) phase}` on one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSection {
    pub amplitude: PhaseSymbol,
    pub phase: PhaseSymbol,
}

impl LocalSection {
    pub fn new(amplitude: PhaseSymbol) -> Self {
        let phase = PhaseSymbol::zero(amplitude.dim(), crate::poly::EXACT);
        LocalSection { amplitude, phase }
    }

    pub fn with_phase(mut self, phase: PhaseSymbol) -> Self {
        self.phase = phase;
        self
    }
}

/// A section given chart by chart.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SectionLocal {
    charts: BTreeMap<String, LocalSection>,
}

impl SectionLocal {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, chart: &str, s: LocalSection) -> Self {
        self.charts.insert(chart.to_string(), s);
        self
    }

    pub fn get(&self, chart: &str) -> Option<&LocalSection> {
        self.charts.get(chart)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LocalSection)> {
        self.charts.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// The bundle whose connection on chart `j` is `(i/λ)A^j`, with `A^j` the
/// chart potential of the atlas, and whose transitions are the overlap phases.
#[derive(Clone, Debug)]
pub struct LineBundleLocal {
    atlas: Atlas,
    transitions: Vec<(String, String, PhaseSymbol)>,
    policy: LaurentPolicy,
}

impl LineBundleLocal {
    /// Every overlap of `atlas` must carry a phase; the atlas has already
    /// checked `dS^{jk} = A^j − A^k`.
    pub fn new(atlas: Atlas) -> Result<Self, RepError> {
        let mut transitions = Vec::new();
        for (a, b, s) in atlas.overlaps() {
            let s = s.ok_or_else(|| RepError::MissingTransition {
                a: a.into(),
                b: b.into(),
            })?;
            transitions.push((a.to_string(), b.to_string(), s.clone()));
        }
        Ok(LineBundleLocal {
            atlas,
            transitions,
            policy: LaurentPolicy::Auto,
        })
    }

    pub fn with_policy(mut self, policy: LaurentPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    pub fn transitions(&self) -> &[(String, String, PhaseSymbol)] {
        &self.transitions
    }

    /// Checks `a^k = a^j` and `φ^k = φ^j + S^{jk}` on every overlap.
    pub fn check_section(&self, s: &SectionLocal) -> Result<(), RepError> {
        for (a, b, t) in &self.transitions {
            let mismatch = || RepError::TransitionMismatch {
                a: a.clone(),
                b: b.clone(),
            };
            let (sa, sb) = match (s.get(a), s.get(b)) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(mismatch()),
            };
            let order = sa.amplitude.order().min(sb.amplitude.order());
            if sa.amplitude.truncate(order) != sb.amplitude.truncate(order) {
                return Err(mismatch());
            }
            if &sb.phase - &sa.phase != *t {
                return Err(mismatch());
            }
        }
        Ok(())
    }

    /// `e^{−(i/λ)φ} ρ^{A^j}_κ(f) e^{(i/λ)φ}` for the chart context.
    fn conjugated(
        &self,
        ctx: &StarContext,
        f: &PhaseSymbol,
        phase: &PhaseSymbol,
    ) -> Result<LinDiffOp, RepError> {
        let op = ctx.rho_a(f);
        if phase.is_zero() {
            return Ok(op);
        }
        let n = ctx.dim();
        let dphi: Vec<PhaseSymbol> = (0..n).map(|j| phase.d_q(j)).collect();
        let singular = dphi.iter().any(|c| c.valuation().is_some_and(|v| v < 1));
        if singular && self.policy == LaurentPolicy::Forbid {
            return Err(RepError::LaurentRequired);
        }
        let coupling: Vec<PhaseSymbol> = dphi
            .iter()
            .map(|c| c.shift_lambda(-1).scale(&Gauss::i()))
            .collect();
        Ok(op.conjugate_by_exp(&coupling).truncate(ctx.order()))
    }

    /// The local representation on one chart.
    pub fn local_rep(
        &self,
        chart: &str,
        f: &PhaseSymbol,
        s: &LocalSection,
    ) -> Result<LocalSection, RepError> {
        let ctx = self.atlas.chart(chart)?;
        let op = self.conjugated(ctx, f, &s.phase)?;
        Ok(LocalSection {
            amplitude: op.apply(&s.amplitude),
            phase: s.phase.clone(),
        })
    }

    /// `ρ(f)s`, chart by chart; fails if `s` does not satisfy the
    /// transition relations.
    pub fn rep(&self, f: &PhaseSymbol, s: &SectionLocal) -> Result<SectionLocal, RepError> {
        self.check_section(s)?;
        let mut out = SectionLocal::new();
        for (chart, local) in s.iter() {
            out = out.with(chart, self.local_rep(chart, f, local)?);
        }
        Ok(out)
    }

    /// Extends a section given on one chart to every chart reachable
    /// through transitions.
    pub fn extend(&self, chart: &str, s: LocalSection) -> SectionLocal {
        let mut out = SectionLocal::new().with(chart, s);
        let mut changed = true;
        while changed {
            changed = false;
            for (a, b, t) in &self.transitions {
                if let (Some(sa), None) = (out.get(a).cloned(), out.get(b)) {
                    let phase = &sa.phase + t;
                    out = out.with(
                        b,
                        LocalSection {
                            amplitude: sa.amplitude,
                            phase,
                        },
                    );
                    changed = true;
                } else if let (None, Some(sb)) = (out.get(a), out.get(b).cloned()) {
                    let phase = &sb.phase - t;
                    out = out.with(
                        a,
                        LocalSection {
                            amplitude: sb.amplitude,
                            phase,
                        },
                    );
                    changed = true;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;
    use crate::geometry::BaseGeometry;
    use crate::random::SymbolGen;
    use crate::scalars::rat;
    use crate::starcore::FormalOneForm;

    fn s(t: &str, d: usize) -> PhaseSymbol {
        parse_symbol(t, d).unwrap()
    }

    // Two charts with A^a − A^b = d(λ q¹q² + q²) on the shared coordinates.
    fn bundle(kappa: crate::scalars::Rat) -> LineBundleLocal {
        let aa = FormalOneForm::new(vec![s("l*q2 + l*q2", 2), s("l*q1 + 1", 2)]);
        let ab = FormalOneForm::new(vec![s("l*q2", 2), s("0", 2)]);
        let chart = |id: &str, a: FormalOneForm| {
            StarContext::new(BaseGeometry::flat(2).with_id(id))
                .with_kappa(kappa.clone())
                .unwrap()
                .with_potential(a)
                .unwrap()
        };
        let (ca, cb) = (chart("a", aa), chart("b", ab));
        let atlas = Atlas::new(vec![ca, cb])
            .with_overlap("a", "b", Some(s("l*q1*q2 + q2", 2)))
            .unwrap();
        LineBundleLocal::new(atlas).unwrap()
    }

    #[test]
    fn representation_glues() {
        for k in [rat(0, 1), rat(1, 2)] {
            let b = bundle(k);
            let mut gen = SymbolGen::new(17, 2);
            let sec = b.extend(
                "a",
                LocalSection::new(gen.base(2, 3)).with_phase(s("q1^2", 2)),
            );
            assert!(b.check_section(&sec).is_ok());
            for _ in 0..3 {
                let f = gen.symbol(3, 2, 3);
                let out = b.rep(&f, &sec).unwrap();
                assert!(b.check_section(&out).is_ok());
            }
        }
    }

    #[test]
    fn conjugation_matches_shifted_potential() {
        let b = bundle(rat(0, 1));
        let phase = s("q1^2 - l*q2", 2);
        let amp = s("q1 + q2^2", 2);
        let f = s("p1^2*q2 + p2", 2);
        let out = b
            .local_rep(
                "b",
                &f,
                &LocalSection::new(amp.clone()).with_phase(phase.clone()),
            )
            .unwrap();
        // ρ^{A}(f) e^{(i/λ)φ} a = e^{(i/λ)φ} ρ^{A + dφ}(f) a
        let ctx = b.atlas().chart("b").unwrap();
        let shifted = ctx
            .potential()
            .unwrap()
            .add(&FormalOneForm::differential(&phase));
        let direct = StarContext::new(ctx.geometry().clone())
            .with_potential(shifted)
            .unwrap();
        assert_eq!(out.amplitude, direct.rho_a(&f).apply(&amp).truncate(6));
    }

    #[test]
    fn base_functions_act_by_multiplication() {
        let b = bundle(rat(0, 1));
        let sec = b.extend("b", LocalSection::new(s("q1", 2)).with_phase(s("q2^3", 2)));
        let out = b.rep(&s("q2^2", 2), &sec).unwrap();
        for (_, l) in out.iter() {
            assert_eq!(l.amplitude, s("q1*q2^2", 2).truncate(6));
        }
    }

    #[test]
    fn rejects_broken_sections_and_laurent() {
        let b = bundle(rat(0, 1));
        let bad = SectionLocal::new()
            .with("a", LocalSection::new(s("q1", 2)))
            .with("b", LocalSection::new(s("q1", 2)));
        assert!(matches!(
            b.rep(&s("p1", 2), &bad),
            Err(RepError::TransitionMismatch { .. })
        ));
        let b = b.with_policy(LaurentPolicy::Forbid);
        let sec = b.extend("a", LocalSection::new(s("q1", 2)));
        assert_eq!(b.rep(&s("p1", 2), &sec), Err(RepError::LaurentRequired));
    }
}
