//! Named numeric suites.
//!
//! `opcalc` compares the grid calculus with the exact representations and
//! measures the ħ-scaling of the composition remainder; `trace` integrates
//! star commutators of windowed symbols over phase space.

use std::sync::Arc;

use fiberstar::exec::Exec;
use fiberstar::expr::parse_symbol;
use fiberstar::field::WindowedSymbol;
use fiberstar::poly::PhaseSymbol;
use fiberstar::random::SymbolGen;
use fiberstar::report::{Check, SuiteReport};
use fiberstar::scalars::{fmt_rat, rat, Rat};
use fiberstar::starcore::{FormalOneForm, StarContext};
use num_complex::Complex64 as C64;

use crate::calculus::{
    compose_grid, formal_vs_numeric_all, gaussian_pair, loglog_slope, op_compose_defect,
    op_compose_defect_poly, ComposeDefect,
};
use crate::grid::{Grid, GridFunction};
use crate::operator::{op_quantize, op_quantize_poly, GridOperator};
use crate::symbol::{n_op_apply, GridSymbol, SymbolFn};
use crate::table::DefectRow;
use crate::trace::{trace_defect, PhaseQuadrature};
use crate::{rat_f64, NumericError};

pub const SUITES: [&str; 2] = ["trace", "opcalc"];

/// ħ values of the composition study.
pub const COMPOSE_HBARS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Tolerance for identities that are exact for polynomial symbols.
pub const POLY_TOL: f64 = 1e-8;

/// Tolerance for windowed and trace identities.
pub const WINDOW_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Ordering parameters for the operator identities.
    pub kappas: Vec<Rat>,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            kappas: vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)],
            seed: 7,
            exec: Exec::Parallel,
        }
    }
}

impl NumericConfig {
    fn gen(&self, dim: usize, salt: u64) -> SymbolGen {
        SymbolGen::new(self.seed.wrapping_mul(1_000_003).wrapping_add(salt), dim)
    }
}

fn sym(t: &str, dim: usize) -> PhaseSymbol {
    parse_symbol(t, dim).expect("built-in expression")
}

fn k_label(k: &Rat) -> String {
    format!("κ={}", fmt_rat(k))
}

fn sup_diff(a: &GridFunction, b: &GridFunction) -> Result<f64, NumericError> {
    Ok(a.sub(b)?.sup_norm())
}

/// Runs one named suite.
pub fn run(name: &str, cfg: &NumericConfig) -> Result<SuiteReport, NumericError> {
    let report = match name {
        "opcalc" => opcalc(cfg)?,
        "trace" => trace(cfg)?,
        other => return Err(NumericError::UnknownSuite(other.to_string())),
    };
    Ok(report.param("seed", cfg.seed))
}

fn opcalc(cfg: &NumericConfig) -> Result<SuiteReport, NumericError> {
    let kappas: Vec<String> = cfg.kappas.iter().map(fmt_rat).collect();
    let mut rep = SuiteReport::new("opcalc").param("kappas", kappas.join(" "));
    basic_examples(cfg, &mut rep)?;
    polynomial_exactness(cfg, &mut rep)?;
    sampled_paths(cfg, &mut rep)?;
    composition(cfg, &mut rep)?;
    Ok(rep)
}

/// `p`, `qp` and base functions, whose operators are known in closed form.
fn basic_examples(cfg: &NumericConfig, rep: &mut SuiteReport) -> Result<(), NumericError> {
    let g = Grid::new(1, 1024, 10.0, 0.1)?;
    let hb = C64::new(0.0, -g.hbar());
    let probes = GridFunction::probes(&g);
    let mut worst: f64 = 0.0;
    for k in &cfg.kappas {
        let op = op_quantize_poly(&sym("p1", 1), &g, rat_f64(k), None)?;
        for u in &probes {
            worst = worst.max(sup_diff(&op.apply(u)?, &u.derivative(&[1]).scale(hb))?);
        }
    }
    rep.push(Check::below(
        "Op(p) + iħ∂, all κ, 1024 points",
        worst,
        POLY_TOL,
    ));

    let op = op_quantize_poly(&sym("q1*p1", 1), &g, 0.5, None)?;
    let mut worst: f64 = 0.0;
    for u in &probes {
        let du = u.derivative(&[1]);
        let want = GridFunction::from_values(
            &g,
            (0..g.len())
                .map(|i| hb * (du.values()[i] * g.position(i)[0] + u.values()[i] * 0.5))
                .collect(),
        )?;
        worst = worst.max(sup_diff(&op.apply(u)?, &want)?);
    }
    rep.push(Check::below(
        "Op(qp) + iħ(x∂ + 1/2), κ=1/2",
        worst,
        POLY_TOL,
    ));

    let v = |x: f64| (-(x - 1.0) * (x - 1.0)).exp();
    let a = GridSymbol::from_fn(
        &g,
        0.0,
        Arc::new(move |q: &[f64], _: &[f64]| C64::new(v(q[0]), 0.0)),
    );
    let op = op_quantize(&a, 0.0).with_exec(cfg.exec);
    let mut worst: f64 = 0.0;
    for u in &probes {
        let want = GridFunction::from_values(
            &g,
            (0..g.len())
                .map(|i| u.values()[i] * v(g.position(i)[0]))
                .collect(),
        )?;
        worst = worst.max(sup_diff(&op.apply(u)?, &want)?);
    }
    rep.push(Check::below(
        "Op(v) − v·, sampled base function, κ=0",
        worst,
        1e-12,
    ));
    Ok(())
}

/// `A = λ(q² − q) dq` in one dimension.
fn potential_1d() -> FormalOneForm {
    FormalOneForm::new(vec![sym("l*q1^2 - l*q1", 1)])
}

/// `A = λ q¹ dq²`, so `B = λ dq¹∧dq²`.
fn potential_2d() -> FormalOneForm {
    FormalOneForm::new(vec![sym("0", 2), sym("l*q1", 2)])
}

/// Every monomial `q^a p^b` with `a, b ≤ 3` plus random combinations,
/// against the exact representation at `λ = ħ`.
fn polynomial_exactness(cfg: &NumericConfig, rep: &mut SuiteReport) -> Result<(), NumericError> {
    let mut symbols: Vec<PhaseSymbol> = Vec::new();
    for a in 0..=3 {
        for b in 0..=3 {
            symbols.push(sym(&format!("q1^{a}*p1^{b}"), 1));
        }
    }
    let mut gen = cfg.gen(1, 11);
    symbols.extend((0..4).map(|_| gen.symbol(3, 3, 4)));
    let pot = potential_1d();
    for hbar in [0.1, 0.05] {
        let g = Grid::new(1, 1024, 10.0, hbar)?;
        let probes = GridFunction::probes(&g);
        for k in &cfg.kappas {
            for (tag, a) in [("A=0", None), ("A=λ(q²−q)dq", Some(&pot))] {
                let errs = cfg
                    .exec
                    .map(&symbols, |s| formal_vs_numeric_all(s, &probes, k, a));
                let worst = errs
                    .into_iter()
                    .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
                rep.push(Check::below(
                    format!(
                        "ρ^A(a)|_(λ=ħ) − Op^A(a), p-degree ≤ 3, 1-d, ħ={hbar}, {}, {tag}",
                        k_label(k)
                    ),
                    worst,
                    POLY_TOL,
                ));
            }
        }
    }

    let g = Grid::new(2, 64, 8.0, 0.1)?;
    let probes = GridFunction::probes(&g);
    let mut gen = cfg.gen(2, 12);
    let symbols: Vec<PhaseSymbol> = (0..4).map(|_| gen.symbol(3, 2, 4)).collect();
    let pot = potential_2d();
    for k in &cfg.kappas {
        let errs = cfg.exec.map(&symbols, |s| {
            formal_vs_numeric_all(s, &probes, k, Some(&pot))
        });
        let worst = errs
            .into_iter()
            .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
        rep.push(Check::below(
            format!(
                "same, random 2-d symbols, A = λq¹dq², 64² points, ħ=0.1, {}",
                k_label(k)
            ),
            worst,
            POLY_TOL,
        ));
    }
    Ok(())
}

fn gaussian_symbol() -> SymbolFn {
    Arc::new(|q: &[f64], p: &[f64]| {
        C64::new(
            (1.0 + q[0] * p[0]) * (-(q[0] * q[0] + p[0] * p[0]) / 2.0).exp(),
            0.3 * p[0] * (-(q[0] * q[0]) - p[0] * p[0]).exp(),
        )
    })
}

/// Mode split against the dense kernel, the κ-interchange, the adjoint and
/// the N-operator.
fn sampled_paths(cfg: &NumericConfig, rep: &mut SuiteReport) -> Result<(), NumericError> {
    let g = Grid::new(1, 256, 10.0, 0.3)?;
    let probes = GridFunction::probes(&g);
    let a = GridSymbol::from_fn(&g, 0.0, gaussian_symbol());
    let (mut dense, mut swap): (f64, f64) = (0.0, 0.0);
    for k in &cfg.kappas {
        let kf = rat_f64(k);
        let fast = op_quantize(&a, kf).with_exec(cfg.exec);
        let slow = GridOperator::dense(&a, kf)?.with_exec(cfg.exec);
        let shifted = op_quantize(&n_op_apply(&a, kf, 1), 0.0).with_exec(cfg.exec);
        for u in &probes {
            let x = fast.apply(u)?;
            dense = dense.max(sup_diff(&x, &slow.apply(u)?)?);
            swap = swap.max(sup_diff(&x, &shifted.apply(u)?)?);
        }
    }
    rep.push(Check::below(
        "mode split − dense kernel, 256 points, all κ",
        dense,
        POLY_TOL,
    ));
    rep.push(Check::below("Op_κ(a) − Op_0(N_κ a), all κ", swap, POLY_TOL));

    let real: SymbolFn = Arc::new(|q: &[f64], p: &[f64]| {
        C64::new(
            (1.0 + q[0] * p[0] - p[0] * p[0]) * (-(q[0] * q[0] + p[0] * p[0]) / 2.0).exp(),
            0.0,
        )
    });
    let weyl = [
        op_quantize(&GridSymbol::from_fn(&g, 0.0, real), 0.5).with_exec(cfg.exec),
        op_quantize_poly(&sym("q1*p1^2 + q1^2 - 2*p1", 1), &g, 0.5, None)?,
    ];
    let mut adj: f64 = 0.0;
    for op in &weyl {
        for u in &probes {
            for v in &probes {
                let d = u.inner(&op.apply(v)?)? - op.apply(u)?.inner(v)?;
                adj = adj.max(d.norm());
            }
        }
    }
    rep.push(Check::below(
        "⟨u, Op_W(a)v⟩ − ⟨Op_W(a)u, v⟩, real a",
        adj,
        POLY_TOL,
    ));

    let hbar = 0.2;
    let g = Grid::new(1, 256, 8.0, hbar)?;
    let w = WindowedSymbol::new(sym("q1*p1", 1), sym("(1/2)*q1^2 + (1/2)*p1^2", 1), 16);
    let a = GridSymbol::from_windowed(&g, &w, 0.0);
    let (mut formal, mut inverse): (f64, f64) = (0.0, 0.0);
    for k in &cfg.kappas {
        let ctx = StarContext::flat(1).with_kappa(k.clone())?.with_order(16);
        let want = GridSymbol::from_windowed(&g, &ctx.n_kappa(&w, 1), 0.0);
        let got = n_op_apply(&a, rat_f64(k), 1);
        formal = formal.max(
            got.data()
                .iter()
                .zip(want.data())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
        );
        let back = n_op_apply(&got, rat_f64(k), -1);
        inverse = inverse.max(
            back.data()
                .iter()
                .zip(a.data())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
        );
    }
    rep.push(Check::below(
        "N_κ(qp·e^(−(q²+p²)/2)) − exp(−iκħΔ) through λ^16, ħ=0.2",
        formal,
        POLY_TOL,
    ));
    rep.push(Check::below("N_κ^(−1) N_κ a − a", inverse, 1e-12));
    Ok(())
}

/// One ħ-series of the composition study.
#[derive(Clone, Debug)]
pub struct ComposeSeries {
    pub kappa: Rat,
    pub k: u32,
    pub points: Vec<ComposeDefect>,
    pub slope: f64,
}

/// Composition remainder of the Gaussian pair for `κ ∈ {0, 1/2}`,
/// `K ∈ {1, 2}` over [`COMPOSE_HBARS`].
pub fn compose_study(exec: Exec) -> Result<Vec<ComposeSeries>, NumericError> {
    let (a, b) = gaussian_pair();
    let grids = COMPOSE_HBARS
        .iter()
        .map(|h| compose_grid(*h))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for kappa in [rat(0, 1), rat(1, 2)] {
        for k in [1, 2] {
            let points = op_compose_defect(&a, &b, &kappa, k, &grids, exec)?;
            let slope = loglog_slope(&points);
            out.push(ComposeSeries {
                kappa: kappa.clone(),
                k,
                points,
                slope,
            });
        }
    }
    Ok(out)
}

fn composition(cfg: &NumericConfig, rep: &mut SuiteReport) -> Result<(), NumericError> {
    let g = Grid::new(1, 1024, 10.0, 0.2)?;
    let base = op_compose_defect_poly(&sym("q1^2", 1), &sym("q1 + 1", 1), &rat(0, 1), 0, &g)?;
    rep.push(Check::below(
        "Op(u)Op(v) − Op(uv), base functions, κ=0",
        base,
        1e-14,
    ));
    let mut worst: f64 = 0.0;
    for k in &cfg.kappas {
        worst = worst.max(op_compose_defect_poly(
            &sym("p1", 1),
            &sym("q1", 1),
            k,
            1,
            &g,
        )?);
    }
    rep.push(Check::below(
        "Op(p)Op(q) − Op(p★q), K=1, all κ",
        worst,
        1e-12,
    ));
    for s in compose_study(cfg.exec)? {
        let norms: Vec<String> = s.points.iter().map(|p| format!("{:.3e}", p.norm)).collect();
        rep.push(Check::at_least(
            format!(
                "log-log slope of the K={} remainder, {}, norms [{}]",
                s.k,
                k_label(&s.kappa),
                norms.join(", ")
            ),
            s.slope,
            s.k as f64 + 0.7,
        ));
    }
    Ok(())
}

fn trace(cfg: &NumericConfig) -> Result<SuiteReport, NumericError> {
    let mut rep = SuiteReport::new("trace").param("pairs", 10);
    let quad = PhaseQuadrature {
        exec: cfg.exec,
        ..PhaseQuadrature::default()
    };

    let f = WindowedSymbol::new(sym("q1 + p1^2", 1), sym("q1^2 + p1^2 + (1/3)*q1*p1", 1), 1);
    let g = WindowedSymbol::new(sym("q1*p1 + 2", 1), sym("(1/2)*q1^2 + p1^2", 1), 1);
    let flat = StarContext::flat(1).with_order(1);
    let d = trace_defect(&flat, &f, &g, &quad)?;
    rep.push(Check::verdict(
        "∫ (fg − gf) dq dp, flat 1-d",
        "0",
        format!("{}", d[0]),
    ));
    rep.push(Check::below("∫ i{f, g} dq dp, flat 1-d", d[1], POLY_TOL));

    let mut gen = cfg.gen(2, 13);
    let b = gen.rational();
    let pot = FormalOneForm::new(vec![sym("0", 2), sym("l*q1", 2).scale_rat(&b)]);
    let pairs: Vec<(WindowedSymbol, WindowedSymbol)> = (0..10)
        .map(|_| (gen.windowed(2, 2, 3, 3), gen.windowed(2, 2, 3, 3)))
        .collect();
    for k in [rat(0, 1), rat(1, 2), rat(1, 1)] {
        let ctx = StarContext::flat(2)
            .with_kappa(k.clone())?
            .with_order(3)
            .with_potential(pot.clone())?;
        let rows = cfg.exec.map(&pairs, |(f, g)| {
            trace_defect(
                &ctx,
                f,
                g,
                &PhaseQuadrature {
                    exec: Exec::Sequential,
                    ..quad
                },
            )
        });
        let mut worst: f64 = 0.0;
        for r in rows {
            worst = r?.into_iter().fold(worst, f64::max);
        }
        rep.push(Check::below(
            format!(
                "max_k≤3 |∫ C_k(f,g) − C_k(g,f)|, B = {}λ dq¹∧dq², {}",
                fmt_rat(&b),
                k_label(&k)
            ),
            worst,
            WINDOW_TOL,
        ));
    }
    Ok(rep)
}

/// Rows for the `numeric` table: the composition study and the worst
/// formal-versus-numeric error per `(κ, ħ)`.
pub fn defect_table(cfg: &NumericConfig) -> Result<Vec<DefectRow>, NumericError> {
    let mut rows = Vec::new();
    for s in compose_study(cfg.exec)? {
        for p in &s.points {
            rows.push(DefectRow {
                identity: "compose".into(),
                kappa: fmt_rat(&s.kappa),
                hbar: p.hbar,
                k: s.k,
                norm: p.norm,
                slope: Some(s.slope),
            });
        }
    }
    let symbols: Vec<PhaseSymbol> = (0..=3)
        .flat_map(|a| (0..=3).map(move |b| sym(&format!("q1^{a}*p1^{b}"), 1)))
        .collect();
    for hbar in [0.1, 0.05] {
        let g = Grid::new(1, 1024, 10.0, hbar)?;
        let probes = GridFunction::probes(&g);
        for k in &cfg.kappas {
            let errs = cfg
                .exec
                .map(&symbols, |s| formal_vs_numeric_all(s, &probes, k, None));
            let norm = errs
                .into_iter()
                .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
            rows.push(DefectRow {
                identity: "formal_vs_numeric".into(),
                kappa: fmt_rat(k),
                hbar,
                k: 0,
                norm,
                slope: None,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run("nope", &NumericConfig::default()),
            Err(NumericError::UnknownSuite(_))
        ));
    }
}
