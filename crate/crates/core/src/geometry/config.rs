//! TOML description of charts, potentials and overlaps.
//!
//! ```toml
//! dim = 2
//!
//! [[chart]]
//! id = "U"
//! alpha = ["0", "q1"]
//! potential = ["0", "l*q1"]
//! christoffel = [{ l = 1, j = 1, k = 2, value = "q2" }]
//! magnetic = [{ i = 1, j = 2, value = "l" }]
//!
//! [[overlap]]
//! charts = ["U", "V"]
//! phase = "q1*q2"
//! ```
//!
//! Indices are one-based; every value is a polynomial expression in
//! `q1..qn`, `l` and `i` with rational coefficients.

use serde::Deserialize;
use thiserror::Error;

use super::{BaseGeometry, GeometryBuilder, GeometryError, TwoForm};
use crate::expr::{parse_symbol, ParseError};
use crate::poly::PhaseSymbol;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read geometry file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed geometry file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("in {field}: {source}")]
    Expr { field: String, source: ParseError },
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelEntry {
    pub l: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub id: String,
    #[serde(default)]
    pub christoffel: Vec<ChristoffelEntry>,
    #[serde(default)]
    pub alpha: Option<Vec<String>>,
    #[serde(default)]
    pub potential: Option<Vec<String>>,
    #[serde(default)]
    pub magnetic: Option<Vec<FormEntry>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapConfig {
    pub charts: [String; 2],
    /// `S` with `dS = A_first − A_second` on the overlap.
    #[serde(default)]
    pub phase: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasConfig {
    pub dim: usize,
    #[serde(default)]
    pub chart: Vec<ChartConfig>,
    #[serde(default)]
    pub overlap: Vec<OverlapConfig>,
}

fn expr(text: &str, dim: usize, field: &str) -> Result<PhaseSymbol, ConfigError> {
    parse_symbol(text, dim).map_err(|source| ConfigError::Expr {
        field: field.to_string(),
        source,
    })
}

fn index(i: usize, dim: usize, field: &str) -> Result<usize, ConfigError> {
    if i == 0 || i > dim {
        return Err(ConfigError::Invalid(format!(
            "{field}: index {i} outside 1..={dim}"
        )));
    }
    Ok(i - 1)
}

impl AtlasConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: AtlasConfig = toml::from_str(text)?;
        if cfg.dim == 0 || cfg.dim > crate::poly::MAX_DIM {
            return Err(ConfigError::Invalid(format!(
                "dim must be in 1..={}",
                crate::poly::MAX_DIM
            )));
        }
        if cfg.chart.is_empty() {
            return Err(ConfigError::Invalid(
                "at least one [[chart]] is required".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn chart(&self, id: &str) -> Option<&ChartConfig> {
        self.chart.iter().find(|c| c.id == id)
    }

    pub fn overlap_phase(&self, a: &str, b: &str) -> Result<Option<PhaseSymbol>, ConfigError> {
        for o in &self.overlap {
            if o.charts[0] == a && o.charts[1] == b {
                return o
                    .phase
                    .as_deref()
                    .map(|t| expr(t, self.dim, "overlap.phase"))
                    .transpose();
            }
            if o.charts[0] == b && o.charts[1] == a {
                return Ok(o
                    .phase
                    .as_deref()
                    .map(|t| expr(t, self.dim, "overlap.phase"))
                    .transpose()?
                    .map(|s| -s));
            }
        }
        Ok(None)
    }
}

impl ChartConfig {
    pub fn geometry(&self, dim: usize) -> Result<BaseGeometry, ConfigError> {
        let mut b = GeometryBuilder::new(dim).id(&self.id);
        for e in &self.christoffel {
            let f = "christoffel";
            b = b.christoffel(
                index(e.l, dim, f)?,
                index(e.j, dim, f)?,
                index(e.k, dim, f)?,
                expr(&e.value, dim, f)?,
            );
        }
        if let Some(a) = &self.alpha {
            if a.len() != dim {
                return Err(ConfigError::Invalid(format!(
                    "alpha needs {dim} components"
                )));
            }
            for (j, t) in a.iter().enumerate() {
                b = b.alpha(j, expr(t, dim, "alpha")?);
            }
        }
        Ok(b.build()?)
    }

    /// Components of the potential one-form, if given.
    pub fn potential(&self, dim: usize) -> Result<Option<Vec<PhaseSymbol>>, ConfigError> {
        let Some(a) = &self.potential else {
            return Ok(None);
        };
        if a.len() != dim {
            return Err(ConfigError::Invalid(format!(
                "potential needs {dim} components"
            )));
        }
        a.iter()
            .map(|t| expr(t, dim, "potential"))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn magnetic(&self, dim: usize) -> Result<Option<TwoForm>, ConfigError> {
        let Some(m) = &self.magnetic else {
            return Ok(None);
        };
        let mut out = TwoForm::zero(dim);
        for e in m {
            let (i, j) = (index(e.i, dim, "magnetic")?, index(e.j, dim, "magnetic")?);
            if i == j {
                return Err(ConfigError::Invalid("magnetic: diagonal entry".into()));
            }
            out = out.with(i, j, expr(&e.value, dim, "magnetic")?);
        }
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
dim = 2

[[chart]]
id = "U"
alpha = ["0", "q1"]
potential = ["0", "l*q1"]
christoffel = [{ l = 1, j = 1, k = 2, value = "q2" }]
magnetic = [{ i = 1, j = 2, value = "l" }]

[[chart]]
id = "V"

[[overlap]]
charts = ["U", "V"]
phase = "q1*q2"
"#;

    #[test]
    fn parses_sample() {
        let cfg = AtlasConfig::parse(SAMPLE).unwrap();
        let u = cfg.chart("U").unwrap();
        let g = u.geometry(2).unwrap();
        assert_eq!(g.christoffel(0, 1, 0), &parse_symbol("q2", 2).unwrap());
        assert_eq!(
            u.potential(2).unwrap().unwrap()[1],
            parse_symbol("l*q1", 2).unwrap()
        );
        assert_eq!(
            u.magnetic(2).unwrap().unwrap().get(1, 0),
            parse_symbol("-l", 2).unwrap()
        );
        assert_eq!(
            cfg.overlap_phase("V", "U").unwrap().unwrap(),
            parse_symbol("-q1*q2", 2).unwrap()
        );
        assert!(cfg.chart("V").unwrap().geometry(2).unwrap().is_flat());
    }

    #[test]
    fn rejects_bad_expression() {
        let bad = "dim = 1\n[[chart]]\nid = \"U\"\nalpha = [\"1/q1\"]\n";
        let cfg = AtlasConfig::parse(bad).unwrap();
        assert!(matches!(
            cfg.chart[0].geometry(1),
            Err(ConfigError::Expr { .. })
        ));
    }

    #[test]
    fn rejects_complex_christoffel() {
        let bad = "dim = 1\n[[chart]]\nid = \"U\"\nchristoffel = [{ l = 1, j = 1, k = 1, value = \"i\" }]\n";
        let cfg = AtlasConfig::parse(bad).unwrap();
        assert!(matches!(
            cfg.chart[0].geometry(1),
            Err(ConfigError::Geometry(
                GeometryError::NonRationalChartData { .. }
            ))
        ));
    }
}
