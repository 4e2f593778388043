//! Pass/fail reports for identity suites, rendered as text or JSON.
//!
//! Both renderings carry the same payload: exact residuals are printed as
//! canonical polynomials, numeric ones with the shortest round-trip float.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::geometry::LinDiffOp;
use crate::poly::PhaseSymbol;

/// Anything whose vanishing is the content of an exact check.
pub trait Residual {
    fn vanishes(&self) -> bool;
    fn render(&self) -> String;
}

impl Residual for PhaseSymbol {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Residual for LinDiffOp {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// How a check was measured.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    /// Symbolic residual; passes iff it is `0`.
    Exact { residual: String },
    /// Floating-point residual against a tolerance (or a lower bound for slopes).
    Numeric {
        value: f64,
        bound: f64,
        at_least: bool,
    },
    /// Discrete outcome.
    Verdict { expected: String, got: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(flatten)]
    pub measure: Measure,
}

const MAX_RESIDUAL_CHARS: usize = 240;

impl Check {
    /// Passes iff `residual` is identically zero.
    pub fn exact<R: Residual + ?Sized>(name: impl Into<String>, residual: &R) -> Self {
        let mut text = residual.render();
        if text.len() > MAX_RESIDUAL_CHARS {
            let cut = (0..=MAX_RESIDUAL_CHARS)
                .rev()
                .find(|i| text.is_char_boundary(*i))
                .unwrap_or(0);
            text.truncate(cut);
            text.push_str(" ...");
        }
        Check {
            name: name.into(),
            pass: residual.vanishes(),
            measure: Measure::Exact { residual: text },
        }
    }

    /// Passes iff every residual in the batch is zero; reports the first
    /// nonzero one.
    pub fn exact_all<'a, R: Residual + 'a>(
        name: impl Into<String>,
        residuals: impl IntoIterator<Item = &'a R>,
    ) -> Self {
        let mut first = None;
        for r in residuals {
            if !r.vanishes() {
                first = Some(r);
                break;
            }
        }
        match first {
            Some(r) => Check::exact(name, r),
            None => Check {
                name: name.into(),
                pass: true,
                measure: Measure::Exact {
                    residual: "0".into(),
                },
            },
        }
    }

    /// Passes iff `value < tol` (NaN fails).
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: value < tol,
            measure: Measure::Numeric {
                value,
                bound: tol,
                at_least: false,
            },
        }
    }

    /// Passes iff `value ≥ min`.
    pub fn at_least(name: impl Into<String>, value: f64, min: f64) -> Self {
        Check {
            name: name.into(),
            pass: value >= min,
            measure: Measure::Numeric {
                value,
                bound: min,
                at_least: true,
            },
        }
    }

    pub fn verdict(
        name: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        let (expected, got) = (expected.into(), got.into());
        Check {
            name: name.into(),
            pass: expected == got,
            measure: Measure::Verdict { expected, got },
        }
    }

    pub fn render(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        let body = match &self.measure {
            Measure::Exact { residual } => format!("residual = {residual}"),
            Measure::Numeric {
                value,
                bound,
                at_least: false,
            } => format!("value = {value:e} < {bound:e}"),
            Measure::Numeric {
                value,
                bound,
                at_least: true,
            } => format!("value = {value} >= {bound}"),
            Measure::Verdict { expected, got } => format!("expected {expected}, got {got}"),
        };
        format!("  [{tag}] {}: {body}", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            params: BTreeMap::new(),
            pass: true,
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            out,
            "suite {} [{}]: {}",
            self.suite,
            params.join(", "),
            if self.pass { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            let _ = writeln!(out, "{}", c.render());
        }
        out
    }
}

/// A batch of suites, as emitted by one command.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(suites: Vec<SuiteReport>) -> Self {
        Report {
            pass: suites.iter().all(|s| s.pass),
            suites,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out: String = self.suites.iter().map(SuiteReport::to_text).collect();
        let failed: usize = self.suites.iter().map(SuiteReport::failures).sum();
        let total: usize = self.suites.iter().map(|s| s.checks.len()).sum();
        let _ = writeln!(
            out,
            "{} of {total} checks passed: {}",
            total - failed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}
