//! TOML run configuration.
//!
//! ```toml
//! model = "center-chord"        # or "special"
//! n = 2
//! splus = "u1^3 + u2^2"         # potential of gamma, variables u1..un
//! sminus = "u1^2 - u2^2"        # potential of beta
//! # beta = ["u1", "u2", "0", "u1"]   parametrized alternative (2n entries)
//! # h = "z1^3 + i z2^2"              special model, variables z1..zn
//!
//! [domain]
//! radius = "1/2"                # or lo = [...], hi = [...] with 2n entries
//! basepoint = ["0", "0", "0", "0"]
//!
//! [samples]
//! count = 20
//! seed = 0
//! grid = [5]
//! tol = 1e-9
//! ```

use serde::Deserialize;

use ias_core::builders::{build_center_chord, build_special, LagrangianInput};
use ias_core::domain::DomainBox;
use ias_core::immersion::ImmersionChart;
use ias_core::io::parse_rational;
use ias_core::parse::{parse_gpoly, parse_qpoly};
use ias_core::{IasError, Rational};

use crate::error::CliError;

/// A rational written as a string, an integer or a decimal.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumLit {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumLit {
    pub fn to_rational(&self) -> Result<Rational, IasError> {
        match self {
            NumLit::Text(s) => parse_rational(s),
            NumLit::Int(i) => parse_rational(&i.to_string()),
            NumLit::Float(f) => parse_rational(&format!("{f}")),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub radius: Option<NumLit>,
    pub lo: Option<Vec<NumLit>>,
    pub hi: Option<Vec<NumLit>>,
    pub basepoint: Option<Vec<NumLit>>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<Vec<usize>>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub splus: Option<String>,
    pub sminus: Option<String>,
    pub beta: Option<Vec<String>>,
    pub gamma: Option<Vec<String>>,
    pub h: Option<String>,
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub samples: SampleSection,
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }
}

/// Settings after merging flags over the config document.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub doc: ConfigDoc,
    pub n: Option<usize>,
    pub grid: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

impl RunConfig {
    pub fn new(doc: ConfigDoc, n: Option<usize>, grid: Option<Vec<usize>>, tol: Option<f64>, seed: Option<u64>) -> Result<Self, CliError> {
        let cfg = RunConfig {
            n: n.or(doc.n),
            grid: grid.or_else(|| doc.samples.grid.clone()).unwrap_or_else(|| vec![9]),
            tol: tol.or(doc.samples.tol).unwrap_or(1e-9),
            seed: seed.or(doc.samples.seed).unwrap_or(0),
            samples: doc.samples.count.unwrap_or(20),
            doc,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        if self.grid.iter().any(|&g| g < 2) || self.grid.is_empty() {
            return Err(CliError::Usage("grid sizes must be at least 2 per axis".into()));
        }
        if self.n == Some(0) {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("sample count must be at least 1".into()));
        }
        Ok(())
    }

    fn domain(&self, n: usize) -> Result<DomainBox, CliError> {
        let d = 2 * n;
        let sec = &self.doc.domain;
        let nums = |v: &[NumLit]| -> Result<Vec<Rational>, CliError> {
            v.iter().map(|x| x.to_rational().map_err(CliError::from_parse)).collect()
        };
        match (&sec.lo, &sec.hi, &sec.radius) {
            (Some(lo), Some(hi), None) => {
                let (lo, hi) = (nums(lo)?, nums(hi)?);
                if lo.len() != d || hi.len() != d {
                    return Err(CliError::Usage(format!("domain bounds need {d} entries")));
                }
                DomainBox::new(lo, hi).map_err(|e| CliError::Usage(e.to_string()))
            }
            (None, None, r) => {
                let r = match r {
                    Some(r) => r.to_rational().map_err(CliError::from_parse)?,
                    None => Rational::from_integer(1.into()),
                };
                if r <= Rational::from_integer(0.into()) {
                    return Err(CliError::Usage("domain radius must be positive".into()));
                }
                Ok(DomainBox::cube(d, r))
            }
            _ => Err(CliError::Usage("give either domain.radius or both domain.lo and domain.hi".into())),
        }
    }

    /// Build the chart described by the config.
    pub fn build_chart(&self) -> Result<ImmersionChart, CliError> {
        let doc = &self.doc;
        let model = doc.model.as_deref().ok_or_else(|| CliError::Usage("config needs a model".into()))?;
        let n = self.n.ok_or_else(|| CliError::Usage("config needs n".into()))?;
        let domain = self.domain(n)?;
        match model {
            "center-chord" | "cc" => {
                let beta = lagrangian(doc.sminus.as_deref(), doc.beta.as_deref(), n, "sminus", "beta")?;
                let gamma = lagrangian(doc.splus.as_deref(), doc.gamma.as_deref(), n, "splus", "gamma")?;
                let base = match &doc.domain.basepoint {
                    Some(b) => {
                        let v: Vec<Rational> = b
                            .iter()
                            .map(|x| x.to_rational().map_err(CliError::from_parse))
                            .collect::<Result<_, _>>()?;
                        if v.len() != 2 * n {
                            return Err(CliError::Usage(format!("basepoint needs {} entries", 2 * n)));
                        }
                        Some(v)
                    }
                    None => None,
                };
                build_center_chord(&beta, &gamma, domain, base.as_deref()).map_err(CliError::from)
            }
            "special" => {
                let text = doc.h.as_deref().ok_or_else(|| CliError::Usage("special model needs h".into()))?;
                let h = parse_gpoly(text, "z", n).map_err(|e| CliError::from_parse_in("h", e))?;
                build_special(&h, domain).map_err(CliError::from)
            }
            other => Err(CliError::Usage(format!("unknown model '{other}'"))),
        }
    }
}

fn lagrangian(potential: Option<&str>, param: Option<&[String]>, n: usize, pname: &str, lname: &str) -> Result<LagrangianInput, CliError> {
    match (potential, param) {
        (Some(p), None) => Ok(LagrangianInput::Potential(
            parse_qpoly(p, "u", n).map_err(|e| CliError::from_parse_in(pname, e))?,
        )),
        (None, Some(c)) => {
            if c.len() != 2 * n {
                return Err(CliError::Usage(format!("{lname} needs {} components", 2 * n)));
            }
            let comps = c
                .iter()
                .map(|t| parse_qpoly(t, "u", n).map_err(|e| CliError::from_parse_in(lname, e)))
                .collect::<Result<_, _>>()?;
            Ok(LagrangianInput::Parametric(comps))
        }
        _ => Err(CliError::Usage(format!("give exactly one of {pname} or {lname}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let doc = ConfigDoc::parse("model = \"special\"\nn = 1\nh = \"z1^3\"\n[samples]\nseed = 4\ntol = 1e-6\n").unwrap();
        let cfg = RunConfig::new(doc, None, Some(vec![3]), None, Some(9)).unwrap();
        assert_eq!((cfg.seed, cfg.tol, cfg.grid.clone()), (9, 1e-6, vec![3]));
        assert!(cfg.build_chart().is_ok());
    }

    #[test]
    fn invalid_settings_are_usage_errors() {
        let doc = ConfigDoc::default();
        assert!(matches!(RunConfig::new(doc.clone(), None, None, Some(-1.0), None), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::new(doc.clone(), None, Some(vec![1]), None, None), Err(CliError::Usage(_))));
        assert!(matches!(RunConfig::new(doc, Some(0), None, None, None), Err(CliError::Usage(_))));
        assert!(ConfigDoc::parse("bogus = 1").is_err());
    }

    #[test]
    fn numeric_literals() {
        let doc = ConfigDoc::parse("[domain]\nlo = [-1, \"-1/2\"]\nhi = [0.5, 2]\n").unwrap();
        let cfg = RunConfig::new(doc, Some(1), None, None, None).unwrap();
        let d = cfg.domain(1).unwrap();
        assert_eq!(d.lo[1], ias_core::linalg::rat(-1, 2));
        assert_eq!(d.hi[0], ias_core::linalg::rat(1, 2));
    }
}
