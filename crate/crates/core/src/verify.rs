//! Named identity suites on seeded random data.
//!
//! Every suite returns a [`SuiteReport`]; exact identities are reported with
//! their symbolic residual, quadrature-based ones with the worst value seen.
//! Without a geometry file the suites run on a fixed curved chart
//! (`Γ¹₁₂ = q², Γ²₂₂ = 1 + q¹`, `α = (q², −q² − 1)`, so `μ = e^{−q²}dq`)
//! carrying `B = 3λ dq¹∧dq²`.

use thiserror::Error;

use crate::exec::Exec;
use crate::field::WindowedSymbol;
use crate::geometry::{AtlasConfig, BaseGeometry, GeometryBuilder, GeometryError, LinDiffOp};
use crate::poly::{PhaseSymbol, EXACT};
use crate::random::SymbolGen;
use crate::report::{Check, SuiteReport};
use crate::reps::{
    adjoint_defect, cauchy_schwarz_check, positivity_check, AbChart, AbIntertwiner, AbVerdict,
    Functional, LineBundleLocal, LocalSection, Quadrature, RepError, ResidueDecl,
};
use crate::scalars::{fmt_rat, rat, Gauss, Rat};
use crate::starcore::{
    b_mu, half_density_rep, half_density_rep_frame, half_weyl_star, homogeneity,
    lambda_euler_check, Atlas, AtlasError, FormalOneForm, StarContext, StarError,
};

pub const SUITES: [&str; 9] = [
    "assoc",
    "weyl",
    "homog",
    "evolution",
    "gluing",
    "c2minus",
    "halfdensity",
    "adjoint",
    "positivity",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub order: i32,
    pub kappas: Vec<Rat>,
    pub seed: u64,
    /// Random samples per exact check.
    pub samples: usize,
    pub atlas: Option<AtlasConfig>,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            order: 6,
            kappas: vec![rat(0, 1), rat(1, 2), rat(1, 1)],
            seed: 7,
            samples: 25,
            atlas: None,
            exec: Exec::Parallel,
        }
    }
}

fn sym(t: &str, dim: usize) -> PhaseSymbol {
    crate::expr::parse_symbol(t, dim).expect("built-in expression")
}

/// The built-in curved chart; `α_μ` comes from the density `e^{−q²}dq`.
pub fn curved_geometry() -> BaseGeometry {
    GeometryBuilder::new(2)
        .id("curved")
        .christoffel(0, 0, 1, sym("q2", 2))
        .christoffel(1, 1, 1, sym("1 + q1", 2))
        .alpha(0, sym("q2", 2))
        .alpha(1, sym("-q2 - 1", 2))
        .build()
        .expect("symmetric data")
}

/// `A = 3λ q¹ dq²`, `dA = 3λ dq¹∧dq²`.
pub fn default_potential() -> FormalOneForm {
    FormalOneForm::new(vec![sym("0", 2), sym("3*l*q1", 2)])
}

fn k_label(k: &Rat) -> String {
    format!("κ={}", fmt_rat(k))
}

impl SuiteConfig {
    fn base(&self, geom: BaseGeometry, kappa: &Rat) -> Result<StarContext, StarError> {
        Ok(StarContext::new(geom)
            .with_kappa(kappa.clone())?
            .with_order(self.order))
    }

    /// The magnetic charts to test on.
    fn charts(&self, kappa: &Rat) -> Result<Vec<StarContext>, VerifyError> {
        match &self.atlas {
            Some(cfg) => Ok(Atlas::from_config(cfg, kappa.clone(), self.order)?
                .charts()
                .to_vec()),
            None => Ok(vec![self
                .base(curved_geometry(), kappa)?
                .with_potential(default_potential())?]),
        }
    }

    fn first_chart(&self, kappa: &Rat) -> Result<StarContext, VerifyError> {
        Ok(self.charts(kappa)?.remove(0))
    }

    fn gen(&self, dim: usize, salt: u64) -> SymbolGen {
        SymbolGen::new(self.seed.wrapping_mul(1_000_003).wrapping_add(salt), dim)
    }

    fn collect<T: Send>(&self, rs: Vec<Result<T, StarError>>) -> Result<Vec<T>, VerifyError> {
        Ok(rs.into_iter().collect::<Result<Vec<_>, _>>()?)
    }
}

/// Runs one named suite.
pub fn run(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let report = match name {
        "assoc" => assoc(cfg)?,
        "weyl" => weyl(cfg)?,
        "homog" => homog(cfg)?,
        "evolution" => evolution(cfg)?,
        "gluing" => gluing(cfg)?,
        "c2minus" => c2minus(cfg)?,
        "halfdensity" => halfdensity(cfg)?,
        "adjoint" => adjoint(cfg)?,
        "positivity" => positivity(cfg)?,
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    Ok(report.param("order", cfg.order).param("seed", cfg.seed))
}

fn assoc(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("assoc").param("samples", cfg.samples);
    for k in &cfg.kappas {
        for ctx in cfg.charts(k)? {
            let mut gen = cfg.gen(ctx.dim(), 1);
            let triples: Vec<_> = (0..cfg.samples)
                .map(|_| {
                    (
                        gen.symbol(3, 2, 3),
                        gen.symbol(3, 2, 3),
                        gen.symbol(3, 2, 3),
                    )
                })
                .collect();
            let res = cfg.exec.map(&triples, |(f, g, h)| {
                let l = ctx.star_b(&ctx.star_b(f, g)?, h)?;
                let r = ctx.star_b(f, &ctx.star_b(g, h)?)?;
                Ok(&l - &r)
            });
            let res = cfg.collect(res)?;
            rep.push(Check::exact_all(
                format!("(f★g)★h − f★(g★h), {}, chart {}", k_label(k), ctx.id()),
                &res,
            ));
        }
    }
    Ok(rep)
}

fn weyl(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("weyl").param("samples", cfg.samples);
    let (q, p) = (sym("q1", 2), sym("p1", 2));
    for k in &cfg.kappas {
        let flat = cfg.base(BaseGeometry::flat(2), k)?;
        let c = flat.commutator(&q, &p)?;
        rep.push(Check::exact(
            format!("q★p − p★q − iλ, flat, {}", k_label(k)),
            &(&c - &sym("i*l", 2)).truncate(cfg.order),
        ));
    }
    let half = rat(1, 2);
    let flat = cfg.base(BaseGeometry::flat(2), &half)?;
    let sym_qp = (&flat.star(&q, &p)? - &sym("q1*p1 + (1/2)*i*l", 2)).truncate(cfg.order);
    rep.push(Check::exact("q★p − qp − iλ/2, flat, κ=1/2", &sym_qp));
    let ctx = cfg.first_chart(&half)?;
    let mut gen = cfg.gen(ctx.dim(), 2);
    let pairs: Vec<_> = (0..cfg.samples)
        .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
        .collect();
    let res = cfg.exec.map(&pairs, |(f, g)| {
        Ok(&ctx.star_b(f, g)?.conj() - &ctx.star_b(&g.conj(), &f.conj())?)
    });
    let res = cfg.collect(res)?;
    rep.push(Check::exact_all(
        format!("conj(f★g) − ḡ★f̄, κ=1/2, chart {}", ctx.id()),
        &res,
    ));
    Ok(rep)
}

fn homog(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("homog").param("samples", cfg.samples);
    for k in &cfg.kappas {
        for chart in cfg.charts(k)? {
            let ctx = cfg.base(chart.geometry().clone(), k)?;
            let mut gen = cfg.gen(ctx.dim(), 3);
            let pairs: Vec<_> = (0..cfg.samples)
                .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
                .collect();
            let res = cfg.exec.map(&pairs, |(f, g)| {
                let lhs = homogeneity(&ctx.star(f, g)?);
                let rhs = &ctx.star(&homogeneity(f), g)? + &ctx.star(f, &homogeneity(g))?;
                Ok((&lhs - &rhs).truncate(cfg.order))
            });
            let res = cfg.collect(res)?;
            rep.push(Check::exact_all(
                format!("H(f★g) − Hf★g − f★Hg, {}, chart {}", k_label(k), ctx.id()),
                &res,
            ));
            if let Some(a) = chart.potential() {
                let fs: Vec<_> = (0..cfg.samples).map(|_| gen.symbol(3, 2, 3)).collect();
                let res = cfg.exec.map(&fs, |f| {
                    let (l, r) = lambda_euler_check(ctx.geometry(), k, a, &rat(1, 1), f, cfg.order);
                    &l - &r
                });
                rep.push(Check::exact_all(
                    format!(
                        "𝒜∘H∘𝒜⁻¹ − H − F(λ∂_λ − id)A, {}, chart {}",
                        k_label(k),
                        ctx.id()
                    ),
                    &res,
                ));
            }
        }
    }
    Ok(rep)
}

fn evolution(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("evolution").param("samples", cfg.samples);
    let (s, t) = (rat(1, 2), rat(-3, 2));
    for k in &cfg.kappas {
        for chart in cfg.charts(k)? {
            let n = chart.dim();
            let a = chart
                .potential()
                .cloned()
                .unwrap_or_else(|| FormalOneForm::zero(n));
            let mut gen = cfg.gen(n, 4);
            let mut coupling = Vec::new();
            let mut group = Vec::new();
            let mut base = Vec::new();
            for _ in 0..cfg.samples {
                let x: Vec<PhaseSymbol> = (0..n).map(|_| gen.base(2, 2)).collect();
                let jx = (0..n).fold(PhaseSymbol::zero(n, EXACT), |acc, j| {
                    &acc + &(&x[j] * &PhaseSymbol::p(n, j))
                });
                let expect = &jx - &a.eval(&x).scale_rat(&t);
                coupling.push((&chart.evolve(&a, &t, &jx) - &expect).truncate(cfg.order));
                let f = gen.symbol(3, 2, 3);
                group.push(
                    &chart.evolve(&a, &s, &chart.evolve(&a, &t, &f))
                        - &chart.evolve(&a, &(&s + &t), &f),
                );
                let u = gen.base(3, 3);
                base.push(&chart.evolve(&a, &t, &u) - &u.truncate(cfg.order));
            }
            let tag = format!("{}, chart {}", k_label(k), chart.id());
            rep.push(Check::exact_all(
                format!("𝒜(t)J(X) − J(X) + tA(X), {tag}"),
                &coupling,
            ));
            rep.push(Check::exact_all(
                format!("𝒜(s)𝒜(t) − 𝒜(s+t), {tag}"),
                &group,
            ));
            rep.push(Check::exact_all(format!("𝒜(t)π*u − π*u, {tag}"), &base));

            let plain = cfg.base(chart.geometry().clone(), k)?;
            let closed = gen.exact_form(2, 3);
            let mut auto = Vec::new();
            for _ in 0..cfg.samples.min(5) {
                let (f, g) = (gen.symbol(2, 2, 3), gen.symbol(2, 2, 3));
                let e = |x: &PhaseSymbol| plain.evolve(&closed, &rat(1, 1), x);
                auto.push(&e(&plain.star(&f, &g)?) - &plain.star(&e(&f), &e(&g))?);
            }
            rep.push(Check::exact_all(
                format!("𝒜 is a ★-automorphism for dA = 0, {tag}"),
                &auto,
            ));
            let open = FormalOneForm::new(
                (0..n)
                    .map(|j| {
                        if j + 1 == n {
                            PhaseSymbol::q(n, 0)
                        } else {
                            PhaseSymbol::zero(n, EXACT)
                        }
                    })
                    .collect(),
            );
            let e = |x: &PhaseSymbol| plain.evolve(&open, &rat(1, 1), x);
            let (f, g) = (PhaseSymbol::p(n, 0), PhaseSymbol::p(n, n - 1));
            let broken = &e(&plain.star(&f, &g)?) - &plain.star(&e(&f), &e(&g))?;
            let got = if broken.is_zero() { "zero" } else { "nonzero" };
            rep.push(Check::verdict(
                format!("automorphism residual for dA ≠ 0, {tag}"),
                "nonzero",
                got,
            ));
        }
    }
    Ok(rep)
}

/// Two charts over the curved base with `B = 2λ dq¹∧dq²`:
/// `A^a = 2λq¹dq²`, `A^b = −2λq²dq¹`, `S^{ab} = 2λq¹q²`.
pub fn default_two_chart(kappa: &Rat, order: i32) -> Result<Atlas, StarError> {
    let chart = |id: &str, a: FormalOneForm| -> Result<StarContext, StarError> {
        StarContext::new(curved_geometry().with_id(id))
            .with_kappa(kappa.clone())?
            .with_order(order)
            .with_potential(a)
    };
    let a = chart("a", FormalOneForm::new(vec![sym("0", 2), sym("2*l*q1", 2)]))?;
    let b = chart(
        "b",
        FormalOneForm::new(vec![sym("-2*l*q2", 2), sym("0", 2)]),
    )?;
    Atlas::new(vec![a, b]).with_overlap("a", "b", Some(sym("2*l*q1*q2", 2)))
}

fn gluing(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("gluing").param("samples", cfg.samples);
    for k in &cfg.kappas {
        let atlas = match &cfg.atlas {
            Some(c) if c.chart.len() >= 2 => Atlas::from_config(c, k.clone(), cfg.order)?,
            _ => default_two_chart(k, cfg.order)?,
        };
        let dim = atlas.charts()[0].dim();
        let mut gen = cfg.gen(dim, 5);
        let pairs: Vec<_> = (0..cfg.samples)
            .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
            .collect();
        for ctx in atlas.charts() {
            let res = cfg.exec.map(&pairs, |(f, g)| {
                let lhs = ctx.rho_a(&ctx.star_b(f, g)?);
                Ok(lhs.sub(&ctx.rho_a(f).compose_weighted(&ctx.rho_a(g), cfg.order)))
            });
            let res: Vec<LinDiffOp> = cfg.collect(res)?;
            rep.push(Check::exact_all(
                format!("ρ(f★g) − ρ(f)ρ(g), {}, chart {}", k_label(k), ctx.id()),
                &res,
            ));
        }
        let overlaps: Vec<(String, String, Option<PhaseSymbol>)> = atlas
            .overlaps()
            .map(|(a, b, s)| (a.to_string(), b.to_string(), s.cloned()))
            .collect();
        for (a, b, s) in &overlaps {
            let tag = format!("{}, overlap {a}/{b}", k_label(k));
            let mut prods = Vec::new();
            for (f, g) in pairs.iter().take(5) {
                let (x, y) = atlas.overlap_products(a, b, f, g)?;
                prods.push(&x - &y);
            }
            rep.push(Check::exact_all(format!("f★^a g − f★^b g, {tag}"), &prods));
            let Some(s) = s else { continue };
            let (ca, cb) = (atlas.chart(a)?, atlas.chart(b)?);
            let coupling: Vec<PhaseSymbol> = (0..dim)
                .map(|j| s.d_q(j).shift_lambda(-1).scale(&Gauss::i()))
                .collect();
            let conj: Vec<LinDiffOp> = pairs
                .iter()
                .take(5)
                .map(|(f, _)| {
                    cb.rho_a(f)
                        .conjugate_by_exp(&coupling)
                        .truncate(cfg.order)
                        .sub(&ca.rho_a(f))
                })
                .collect();
            rep.push(Check::exact_all(
                format!("e^(−iS/λ)ρ^b(f)e^(iS/λ) − ρ^a(f), {tag}"),
                &conj,
            ));
        }
        if overlaps.iter().all(|(_, _, s)| s.is_some()) && !overlaps.is_empty() {
            let bundle = LineBundleLocal::new(atlas.clone())?;
            let first = atlas.charts()[0].id().to_string();
            let mut bad = 0usize;
            for (f, _) in pairs.iter().take(5) {
                let sec = bundle.extend(
                    &first,
                    LocalSection::new(gen.base(2, 3)).with_phase(gen.base(2, 2)),
                );
                let out = bundle.rep(f, &sec)?;
                if bundle.check_section(&out).is_err() {
                    bad += 1;
                }
            }
            rep.push(Check::verdict(
                format!("ρ(f)s satisfies the transition relations, {}", k_label(k)),
                "0 violations",
                format!("{bad} violations"),
            ));
        }
        aharonov_bohm(cfg, k, &pairs, &mut rep)?;
    }
    Ok(rep)
}

/// Exact-difference intertwiner on one chart, and the non-integral residue
/// of a two-chart loop.
fn aharonov_bohm(
    cfg: &SuiteConfig,
    k: &Rat,
    pairs: &[(PhaseSymbol, PhaseSymbol)],
    rep: &mut SuiteReport,
) -> Result<(), VerifyError> {
    let order = cfg.order.min(4);
    let base = cfg.base(curved_geometry(), k)?.with_order(order);
    let a_prime = default_potential();
    let s = sym("l*q1^2*q2 - 2*l*q2", 2);
    let a = a_prime.add(&FormalOneForm::differential(&s));
    let u = AbIntertwiner::new(
        &base,
        a.clone(),
        a_prime.clone(),
        vec![AbChart { id: "c".into(), s }],
    )?;
    let res: Vec<LinDiffOp> = pairs
        .iter()
        .take(10)
        .map(|(f, _)| u.residual("c", f).expect("chart c"))
        .collect();
    rep.push(Check::exact_all(
        format!(
            "e^(−iS/λ)ρ^(A′)(f)e^(iS/λ) − ρ^A(f) through λ^{order}, {}",
            k_label(k)
        ),
        &res,
    ));
    let loop_s = sym("l*q1", 2);
    let charts = vec![
        AbChart {
            id: "n".into(),
            s: loop_s.clone(),
        },
        AbChart {
            id: "s".into(),
            s: loop_s,
        },
    ];
    let flux = a_prime.add(&FormalOneForm::new(vec![sym("l", 2), sym("0", 2)]));
    let u = AbIntertwiner::new(&base, flux, a_prime, charts)?;
    let residues = [
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
    let got = match u.verdict(&residues)? {
        AbVerdict::Intertwinable => "Intertwinable",
        AbVerdict::NonIntertwinable { .. } => "NonIntertwinable",
    };
    rep.push(Check::verdict(
        format!("two-chart loop with residue 1/3, {}", k_label(k)),
        "NonIntertwinable",
        got,
    ));
    Ok(())
}

fn c2minus(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("c2minus").param("samples", cfg.samples);
    let first = cfg
        .atlas
        .as_ref()
        .map(|c| Atlas::from_config(c, rat(0, 1), cfg.order))
        .transpose()?;
    let (magnetic, potential) = match first.as_ref().map(|a| a.charts()[0].clone()) {
        Some(c) => (c.magnetic().cloned(), c.potential().cloned()),
        None => (None, Some(default_potential())),
    };
    let dim = first.as_ref().map(|a| a.charts()[0].dim()).unwrap_or(2);
    for k in &cfg.kappas {
        let flat = cfg.base(BaseGeometry::flat(dim), k)?;
        let ctx = match (&magnetic, &potential) {
            (Some(b), pot) => flat.clone().with_magnetic(b.clone(), pot.clone())?,
            (None, Some(a)) => flat.clone().with_potential(a.clone())?,
            (None, None) => flat.clone(),
        };
        let mut gen = cfg.gen(dim, 6);
        let pairs: Vec<_> = (0..cfg.samples)
            .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
            .collect();
        // away from κ = 1/2 the field-free product already has a C₂⁻; only
        // the part added by B is universal
        let res = cfg.exec.map(&pairs, |(f, g)| {
            let field = &ctx.c2_minus(f, g)? - &flat.c2_minus(f, g)?;
            Ok(&field - &ctx.c2_minus_oracle(f, g))
        });
        let res = cfg.collect(res)?;
        rep.push(Check::exact_all(
            format!(
                "C₂⁻(f,g) − C₂⁻|_(B=0)(f,g) + (i/2)B₁(X_f,X_g), {}",
                k_label(k)
            ),
            &res,
        ));
        if k == &rat(1, 2) {
            let res = cfg.exec.map(&pairs, |(f, g)| {
                Ok(&ctx.c2_minus(f, g)? - &ctx.c2_minus_oracle(f, g))
            });
            let res = cfg.collect(res)?;
            rep.push(Check::exact_all("C₂⁻(f,g) + (i/2)B₁(X_f,X_g), κ=1/2", &res));
        }
        if cfg.atlas.is_none() {
            let c = ctx.commutator(&sym("p1", 2), &sym("p2", 2))?;
            rep.push(Check::exact(
                format!("p1★p2 − p2★p1 + 3iλ², {}", k_label(k)),
                &(&c + &sym("3*i*l^2", 2)).truncate(cfg.order),
            ));
        }
    }
    Ok(rep)
}

fn halfdensity(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("halfdensity").param("samples", cfg.samples);
    let geom = cfg.first_chart(&rat(0, 1))?.geometry().clone();
    let ctx = cfg.base(geom, &rat(1, 2))?;
    let mut gen = cfg.gen(ctx.dim(), 7);
    let fs: Vec<_> = (0..cfg.samples).map(|_| gen.symbol(3, 2, 3)).collect();
    let res = cfg.exec.map(&fs, |f| {
        Ok(half_density_rep_frame(&ctx, f)?.sub(&half_density_rep(&ctx, f)))
    });
    let res: Vec<LinDiffOp> = cfg.collect(res)?;
    rep.push(Check::exact_all(
        format!(
            "ρ̂₀ in the |dq|^(1/2) frame − ρ₀^(−iλα/2), chart {}",
            ctx.id()
        ),
        &res,
    ));
    let pairs: Vec<_> = (0..cfg.samples.min(10))
        .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
        .collect();
    let res = cfg.exec.map(&pairs, |(f, g)| {
        Ok(&b_mu(&ctx, &half_weyl_star(&ctx, f, g)) - &ctx.star(&b_mu(&ctx, f), &b_mu(&ctx, g))?)
    });
    let res = cfg.collect(res)?;
    rep.push(Check::exact_all(
        format!("ℬ(f ★̂ g) − ℬf ★_W ℬg, chart {}", ctx.id()),
        &res,
    ));
    Ok(rep)
}

fn worst(rows: &[(i32, f64)]) -> f64 {
    rows.iter().map(|(_, r)| *r).fold(0.0, f64::max)
}

fn adjoint(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let mut rep = SuiteReport::new("adjoint").param("samples", cfg.samples.min(10));
    let tol = 1e-8;
    let line = BaseGeometry::flat(1).with_alpha(vec![sym("q1", 1)])?;
    let plane = BaseGeometry::flat(2);
    let q1 = Quadrature::new(1024, 10.0).with_exec(cfg.exec);
    let q2 = Quadrature::new(192, 8.0).with_exec(cfg.exec);
    for k in &cfg.kappas {
        let ctx = cfg
            .base(line.clone(), k)?
            .with_potential(FormalOneForm::new(vec![sym("l*q1^2", 1)]))?;
        let mut gen = cfg.gen(1, 8);
        let mut w = 0.0_f64;
        for _ in 0..cfg.samples.min(10) {
            let f = gen.real_symbol(3, 2, 3);
            let u = WindowedSymbol::new(gen.base(2, 3), sym("q1^2", 1), EXACT);
            let v = WindowedSymbol::new(gen.base(2, 3), sym("q1^2 + q1/3", 1), EXACT);
            w = w.max(worst(&adjoint_defect(&ctx, &f, &u, &v, &q1)?));
        }
        rep.push(Check::below(
            format!(
                "max |⟨u,ρ(f)v⟩ − ⟨ρ(N f̄)u,v⟩| per λ-order, 1-d, 1024 points, {}",
                k_label(k)
            ),
            w,
            tol,
        ));

        let ctx = cfg
            .base(plane.clone(), k)?
            .with_potential(default_potential())?;
        let mut gen = cfg.gen(2, 9);
        let mut w = 0.0_f64;
        for _ in 0..2 {
            let f = gen.real_symbol(2, 1, 3);
            let u = WindowedSymbol::new(gen.base(1, 2), sym("q1^2 + q2^2", 2), EXACT);
            let v = WindowedSymbol::new(gen.base(1, 2), sym("q1^2 + q2^2/2", 2), EXACT);
            w = w.max(worst(&adjoint_defect(&ctx, &f, &u, &v, &q2)?));
        }
        rep.push(Check::below(
            format!("same, 2-d with B = 3λ dq¹∧dq², 192² points, {}", k_label(k)),
            w,
            tol,
        ));
    }
    Ok(rep)
}

fn positivity(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let n = cfg.samples.min(10);
    let mut rep = SuiteReport::new("positivity").param("samples", n);
    let tol = 1e-10;
    let quad = Quadrature::new(1024, 10.0).with_exec(cfg.exec);
    let ctx = cfg.base(BaseGeometry::flat(1), &rat(1, 2))?;
    let mut gen = cfg.gen(1, 10);
    let mut neg = 0;
    for _ in 0..n {
        let f = gen.windowed(2, 2, 4, cfg.order);
        if !positivity_check(&ctx, Functional::OmegaMu, &f, &quad, tol)?.nonnegative {
            neg += 1;
        }
    }
    rep.push(Check::verdict(
        "ω_μ(f̄ ★_W f) ≥ 0",
        "0 negative",
        format!("{neg} negative"),
    ));
    let mut bad = 0;
    for _ in 0..n {
        let f = gen.windowed(2, 1, 3, cfg.order);
        let g = gen.windowed(2, 1, 3, cfg.order);
        if !cauchy_schwarz_check(&ctx, Functional::OmegaMu, &f, &g, &quad, tol)?.1 {
            bad += 1;
        }
    }
    rep.push(Check::verdict(
        "|ω(f̄★g)|² ≤ ω(f̄★f)ω(ḡ★g)",
        "0 violations",
        format!("{bad} violations"),
    ));

    let plane = BaseGeometry::flat(2).with_alpha(vec![sym("q1", 2), sym("0", 2)])?;
    let ctx = cfg
        .base(plane, &rat(1, 2))?
        .with_order(cfg.order.min(2))
        .with_potential(FormalOneForm::new(vec![sym("0", 2), sym("l*q1", 2)]))?;
    let small = Quadrature::new(96, 7.0).with_exec(cfg.exec);
    let mut gen = cfg.gen(2, 11);
    for func in [Functional::OmegaA, Functional::OmegaNu] {
        let mut neg = 0;
        for _ in 0..2 {
            let f = gen.windowed(1, 1, 3, ctx.order());
            if !positivity_check(&ctx, func, &f, &small, 1e-9)?.nonnegative {
                neg += 1;
            }
        }
        rep.push(Check::verdict(
            format!("{func:?}(f̄★f) ≥ 0, 2-d, through λ^{}", ctx.order()),
            "0 negative",
            format!("{neg} negative"),
        ));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            order: 4,
            samples: 3,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn all_suites_pass_on_defaults() {
        for name in SUITES {
            let r = run(name, &quick()).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run("nope", &quick()),
            Err(VerifyError::UnknownSuite(_))
        ));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run("assoc", &quick()).unwrap().to_text();
        let b = run(
            "assoc",
            &SuiteConfig {
                exec: Exec::Sequential,
                ..quick()
            },
        )
        .unwrap()
        .to_text();
        assert_eq!(a, b);
    }

    #[test]
    fn config_atlas_is_used() {
        let cfg = AtlasConfig::parse(
            r#"
dim = 2
[[chart]]
id = "U"
potential = ["0", "l*q1"]
[[chart]]
id = "V"
potential = ["-l*q2", "0"]
[[overlap]]
charts = ["U", "V"]
phase = "l*q1*q2"
"#,
        )
        .unwrap();
        let cfg = SuiteConfig {
            atlas: Some(cfg),
            ..quick()
        };
        let r = run("gluing", &cfg).unwrap();
        assert!(r.pass, "{}", r.to_text());
        assert!(r.checks.iter().any(|c| c.name.contains("chart V")));
    }
}
