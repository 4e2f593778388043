//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use fiberstar::report::{Check, SuiteReport};
use fiberstar::verify::{self, SuiteConfig};
use fiberstar_numeric::suites::{self as numeric, compose_study, NumericConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn summarize<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Outcome {
    let checks: Vec<&Check> = checks.into_iter().collect();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.render())
        .collect();
    let pass = !checks.is_empty() && failed.is_empty();
    let mut detail = format!("{}/{} checks", checks.len() - failed.len(), checks.len());
    for f in failed {
        detail.push('\n');
        detail.push_str(&f);
    }
    Outcome { pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn within(mut o: Outcome, took: Duration, limit: Duration) -> Outcome {
    o.pass &= took <= limit;
    o.detail = format!(
        "{}, {:.1} s (limit {} s)",
        o.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    o
}

fn core_suite(name: &str) -> SuiteReport {
    verify::run(name, &SuiteConfig::default()).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn numeric_suite(name: &str) -> SuiteReport {
    numeric::run(name, &NumericConfig::default()).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn is_ab(c: &Check) -> bool {
    c.name.contains("ρ^(A′)") || c.name.starts_with("two-chart loop")
}

fn cli(args: &[&str]) -> (String, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_fiberstar"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
        out.status.success(),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let (assoc, took) = timed(|| core_suite("assoc"));
    results.push((
        1,
        "associativity through λ⁶, curved chart with B",
        within(summarize(&assoc.checks), took, Duration::from_secs(60)),
    ));

    let weyl = core_suite("weyl");
    let mut flat = summarize(weyl.checks.iter().filter(|c| c.name.contains("flat")));
    for (args, want) in [
        (["star", "--kappa", "1/2", "q1", "p1"], "q1*p1 + (1/2)*i*l"),
        (["comm", "--kappa", "0", "q1", "p1"], "i*l"),
    ] {
        let (got, ok) = cli(&args);
        flat.pass &= ok && got == want;
        flat.detail
            .push_str(&format!(", `{}` → {got}", args.join(" ")));
    }
    results.push((2, "flat canonical commutator and Weyl symmetrization", flat));

    let gluing = core_suite("gluing");
    results.push((
        3,
        "representation homomorphism and gluing, two charts",
        summarize(gluing.checks.iter().filter(|c| !is_ab(c))),
    ));
    results.push((
        4,
        "minimal coupling, evolution group law",
        summarize(&core_suite("evolution").checks),
    ));
    results.push((
        5,
        "C₂⁻ against the magnetic oracle",
        summarize(&core_suite("c2minus").checks),
    ));
    results.push((
        6,
        "half-density intertwining",
        summarize(&core_suite("halfdensity").checks),
    ));

    let adjoint = core_suite("adjoint");
    let star_property = weyl.checks.iter().filter(|c| c.name.starts_with("conj("));
    results.push((
        7,
        "Weyl ∗-property and numeric adjoint defect",
        summarize(star_property.chain(&adjoint.checks)),
    ));

    let opcalc = numeric_suite("opcalc");
    let poly = opcalc
        .checks
        .iter()
        .filter(|c| c.name.starts_with("ρ^A(a)|_(λ=ħ)") || c.name.starts_with("same, random 2-d"));
    results.push((
        8,
        "operator calculus matches the exact representation",
        summarize(poly),
    ));

    let (study, took) = timed(|| compose_study(Default::default()).expect("composition study"));
    let slopes: Vec<Check> = study
        .iter()
        .map(|s| {
            Check::at_least(
                format!("slope K={}, κ={}", s.k, s.kappa),
                s.slope,
                s.k as f64 + 0.7,
            )
        })
        .collect();
    let mut comp = within(summarize(&slopes), took, Duration::from_secs(120));
    comp.detail.push_str(&format!(
        ", slopes {:?}",
        study
            .iter()
            .map(|s| format!("K={} κ={}: {:.2}", s.k, s.kappa, s.slope))
            .collect::<Vec<_>>()
    ));
    results.push((9, "asymptotic composition slopes", comp));

    results.push((
        10,
        "trace property of commutators",
        summarize(&numeric_suite("trace").checks),
    ));
    results.push((
        11,
        "positivity and Cauchy-Schwarz",
        summarize(&core_suite("positivity").checks),
    ));
    results.push((
        12,
        "Aharonov-Bohm dichotomy",
        summarize(gluing.checks.iter().filter(|c| is_ab(c))),
    ));

    let mut failed = 0;
    for (id, title, o) in &results {
        println!(
            "{} criterion {id:>2}: {title} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
