use std::fmt::Display;

use fiberstar::exec::Exec;
use fiberstar::expr::parse_symbol;
use fiberstar::geometry::AtlasConfig;
use fiberstar::poly::PhaseSymbol;
use fiberstar::report::Report;
use fiberstar::reps::{LineBundleLocal, LocalSection};
use fiberstar::scalars::{fmt_rat, parse_rat, rat, Gauss};
use fiberstar::starcore::{
    hamilton_jacobi_residual, wkb_evolver, Atlas, FormalOneForm, StarContext,
};
use fiberstar::verify::{self, SuiteConfig};
use fiberstar_numeric::suites::{self as numeric_suites, NumericConfig};
use fiberstar_numeric::table;
use serde_json::{json, Value};

use crate::{Format, Opts};

pub struct Output {
    pub text: String,
    pub pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn err(e: impl Display) -> String {
    e.to_string()
}

impl Opts {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn config(&self) -> Result<Option<AtlasConfig>, String> {
        self.geometry
            .as_deref()
            .map(AtlasConfig::load)
            .transpose()
            .map_err(err)
    }

    /// The atlas of the geometry file, or a single flat chart.
    fn atlas(&self) -> Result<Atlas, String> {
        let kappa = self.kappa.clone().unwrap_or_else(|| rat(0, 1));
        match self.config()? {
            Some(cfg) => Atlas::from_config(&cfg, kappa, self.order).map_err(err),
            None => {
                let flat = StarContext::flat(2)
                    .with_kappa(kappa)
                    .map_err(err)?
                    .with_order(self.order);
                Ok(Atlas::new(vec![flat]))
            }
        }
    }

    fn working_chart<'a>(&self, atlas: &'a Atlas) -> Result<&'a StarContext, String> {
        match &self.chart {
            Some(id) => atlas.chart(id).map_err(err),
            None => atlas
                .charts()
                .first()
                .ok_or_else(|| "the geometry file defines no chart".to_string()),
        }
    }

    fn render(&self, text: String, payload: Value) -> String {
        match self.format {
            Format::Text => text,
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&payload).expect("plain JSON value")
            ),
        }
    }
}

fn symbol(text: &str, dim: usize) -> Result<PhaseSymbol, String> {
    parse_symbol(text, dim).map_err(|e| format!("`{text}`: {e}"))
}

/// `star` and `comm`.
pub fn star(opts: &Opts, f: &str, g: &str, commutator: bool) -> Result<Output, String> {
    let atlas = opts.atlas()?;
    let ctx = opts.working_chart(&atlas)?;
    let (fs, gs) = (symbol(f, ctx.dim())?, symbol(g, ctx.dim())?);
    let res = if commutator {
        ctx.commutator(&fs, &gs)
    } else {
        ctx.star_b(&fs, &gs)
    };
    let res = res.map_err(err)?.truncate(opts.order).to_string();
    let payload = json!({
        "command": if commutator { "comm" } else { "star" },
        "chart": ctx.id(),
        "kappa": fmt_rat(ctx.kappa()),
        "order": opts.order,
        "f": f,
        "g": g,
        "result": res,
    });
    Ok(Output::ok(opts.render(format!("{res}\n"), payload)))
}

/// `rep`: the section is extended from the working chart through the
/// transition phases and the representation is applied chart by chart.
pub fn rep(opts: &Opts, f: &str, u: &str, phase: Option<&str>) -> Result<Output, String> {
    let atlas = opts.atlas()?;
    let ctx = opts.working_chart(&atlas)?;
    let n = ctx.dim();
    let fs = symbol(f, n)?;
    let us = symbol(u, n)?;
    if !us.is_base() {
        return Err(format!("section `{u}` must depend on q only"));
    }
    let mut local = LocalSection::new(us);
    if let Some(s) = phase {
        let s = symbol(s, n)?;
        if !s.is_base() {
            return Err("the section phase must depend on q only".into());
        }
        local = local.with_phase(s);
    }
    let (id, kappa) = (ctx.id().to_string(), fmt_rat(ctx.kappa()));
    let bundle = LineBundleLocal::new(atlas).map_err(err)?;
    let out = bundle.rep(&fs, &bundle.extend(&id, local)).map_err(err)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (chart, s) in out.iter() {
        let amp = s.amplitude.truncate(opts.order);
        if s.phase.is_zero() {
            text.push_str(&format!("{chart}: {amp}\n"));
        } else {
            text.push_str(&format!("{chart}: ({amp})*exp((i/l)*({}))\n", s.phase));
        }
        rows.push(
            json!({ "chart": chart, "amplitude": amp.to_string(), "phase": s.phase.to_string() }),
        );
    }
    let payload =
        json!({ "command": "rep", "kappa": kappa, "order": opts.order, "f": f, "sections": rows });
    Ok(Output::ok(opts.render(text, payload)))
}

pub fn verify(opts: &Opts, names: &[String], samples: usize) -> Result<Output, String> {
    let known: Vec<&str> = verify::SUITES
        .iter()
        .chain(numeric_suites::SUITES.iter())
        .copied()
        .collect();
    let mut wanted: Vec<&str> = Vec::new();
    for n in names {
        if n == "all" {
            wanted.extend(&known);
        } else if let Some(k) = known.iter().find(|k| **k == n.as_str()) {
            wanted.push(k);
        } else {
            return Err(format!(
                "unknown suite `{n}`; expected one of: all, {}",
                known.join(", ")
            ));
        }
    }
    wanted.dedup();
    let mut core = SuiteConfig {
        order: opts.order,
        seed: opts.seed,
        samples,
        atlas: opts.config()?,
        exec: opts.exec(),
        ..SuiteConfig::default()
    };
    let mut numeric = NumericConfig {
        seed: opts.seed,
        exec: opts.exec(),
        ..NumericConfig::default()
    };
    if let Some(k) = &opts.kappa {
        core.kappas = vec![k.clone()];
        numeric.kappas = vec![k.clone()];
    }
    let mut reports = Vec::new();
    for name in wanted {
        let r = if verify::SUITES.contains(&name) {
            verify::run(name, &core).map_err(err)?
        } else {
            numeric_suites::run(name, &numeric).map_err(err)?
        };
        reports.push(r);
    }
    let report = Report::new(reports);
    let text = match opts.format {
        Format::Text => report.to_text(),
        Format::Json => format!("{}\n", report.to_json()),
    };
    Ok(Output {
        text,
        pass: report.pass,
    })
}

pub fn wkb(opts: &Opts, h: &str, a0: &[String], energy: Option<&str>) -> Result<Output, String> {
    let atlas = opts.atlas()?;
    let ctx = opts.working_chart(&atlas)?;
    let n = ctx.dim();
    if a0.len() != n {
        return Err(format!("--a0 needs {n} components, got {}", a0.len()));
    }
    let hs = symbol(h, n)?;
    let form = FormalOneForm::new(a0.iter().map(|c| symbol(c, n)).collect::<Result<_, _>>()?);
    let res = wkb_evolver(ctx, &form, &hs).map_err(err)?;
    let mut text = format!("symbol: {}\n", res.symbol.truncate(opts.order));
    for (k, op) in res.hierarchy.iter().enumerate() {
        text.push_str(&format!("order {k}: {op}\n"));
    }
    let mut payload = json!({
        "command": "wkb",
        "order": opts.order,
        "symbol": res.symbol.truncate(opts.order).to_string(),
        "hierarchy": res.hierarchy.iter().map(|op| op.to_string()).collect::<Vec<_>>(),
    });
    if let Some(e) = energy {
        let e = parse_rat(e).ok_or_else(|| format!("energy `{e}` is not a rational number"))?;
        let r = hamilton_jacobi_residual(&hs, &form, &Gauss::real(e)).to_string();
        text.push_str(&format!("H(q, A0) - E: {r}\n"));
        payload["hamilton_jacobi"] = Value::String(r);
    }
    Ok(Output::ok(opts.render(text, payload)))
}

pub fn numeric(opts: &Opts) -> Result<Output, String> {
    let mut cfg = NumericConfig {
        seed: opts.seed,
        exec: opts.exec(),
        ..NumericConfig::default()
    };
    if let Some(k) = &opts.kappa {
        cfg.kappas = vec![k.clone()];
    }
    let rows = numeric_suites::defect_table(&cfg).map_err(err)?;
    let text = match opts.format {
        Format::Text => table::to_csv(&rows),
        Format::Json => format!("{}\n", table::to_json(&rows)),
    };
    Ok(Output::ok(text))
}
