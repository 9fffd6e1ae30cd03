//! Chart files: JSON documents holding polynomial literals.
//!
//! Chart polynomials use variables `r1..r{2n}`, Lagrangian parametrizations
//! `u1..un`, and holomorphic potentials `z1..zn`. Rationals are written as
//! `p/q` strings so files round-trip exactly.

use serde::{Deserialize, Serialize};

use crate::domain::DomainBox;
use crate::error::{IasError, Result};
use crate::immersion::{ChartSource, ImmersionChart, Provenance};
use crate::linalg::Rational;
use crate::parse::{format_gpoly, format_qpoly, parse_gpoly, parse_qpoly};

pub const CHART_FORMAT: &str = "ias-chart/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainDoc {
    pub lo: Vec<String>,
    pub hi: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SourceDoc {
    CenterChord { beta: Vec<String>, gamma: Vec<String> },
    Special { h: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub format: String,
    pub n: usize,
    pub provenance: String,
    pub domain: DomainDoc,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceDoc>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Parse a rational literal such as `-3/4`, `0.25` or `2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let p = parse_qpoly(text, "r", 0)?;
    Ok(p.constant_term())
}

impl ChartDoc {
    pub fn from_chart(chart: &ImmersionChart) -> Result<Self> {
        let (Some(x), Some(y), Some(f)) = (chart.x_polys(), chart.y_polys(), chart.f_poly()) else {
            return Err(IasError::NotExact);
        };
        let fmt = |p| format_qpoly(p, "r");
        let source = chart.source.as_ref().map(|s| match s {
            ChartSource::CenterChord { beta, gamma } => SourceDoc::CenterChord {
                beta: beta.iter().map(|p| format_qpoly(p, "u")).collect(),
                gamma: gamma.iter().map(|p| format_qpoly(p, "u")).collect(),
            },
            ChartSource::Special { h } => SourceDoc::Special { h: format_gpoly(h, "z") },
        });
        Ok(ChartDoc {
            format: CHART_FORMAT.into(),
            n: chart.n,
            provenance: chart.provenance.as_str().into(),
            domain: DomainDoc {
                lo: chart.domain.lo.iter().map(|v| v.to_string()).collect(),
                hi: chart.domain.hi.iter().map(|v| v.to_string()).collect(),
            },
            x: x.iter().map(fmt).collect(),
            y: y.iter().map(fmt).collect(),
            f: fmt(&f),
            source,
            warnings: chart.warnings.clone(),
        })
    }

    pub fn to_chart(&self) -> Result<ImmersionChart> {
        if self.format != CHART_FORMAT {
            return Err(IasError::InvalidParameter(format!(
                "unsupported chart format '{}'",
                self.format
            )));
        }
        let n = self.n;
        let d = 2 * n;
        let polys = |v: &[String]| -> Result<Vec<_>> { v.iter().map(|t| parse_qpoly(t, "r", d)).collect() };
        let nums = |v: &[String]| -> Result<Vec<Rational>> { v.iter().map(|t| parse_rational(t)).collect() };
        let domain = DomainBox::new(nums(&self.domain.lo)?, nums(&self.domain.hi)?)?;
        let mut chart = ImmersionChart::from_polys(
            n,
            polys(&self.x)?,
            polys(&self.y)?,
            parse_qpoly(&self.f, "r", d)?,
            domain,
            Provenance::parse(&self.provenance)?,
        )?;
        chart.source = match &self.source {
            None => None,
            Some(SourceDoc::CenterChord { beta, gamma }) => {
                let p = |v: &[String]| -> Result<Vec<_>> { v.iter().map(|t| parse_qpoly(t, "u", n)).collect() };
                Some(ChartSource::CenterChord {
                    beta: p(beta)?,
                    gamma: p(gamma)?,
                })
            }
            Some(SourceDoc::Special { h }) => Some(ChartSource::Special {
                h: parse_gpoly(h, "z", n)?,
            }),
        };
        chart.warnings = self.warnings.clone();
        Ok(chart)
    }
}

pub fn chart_to_json(chart: &ImmersionChart) -> Result<String> {
    let doc = ChartDoc::from_chart(chart)?;
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| IasError::InvalidParameter(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn chart_from_json(text: &str) -> Result<ImmersionChart> {
    let doc: ChartDoc = serde_json::from_str(text).map_err(|e| IasError::Parse {
        pos: e.column(),
        msg: format!("line {}: {e}", e.line()),
    })?;
    doc.to_chart()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_center_chord, build_special, LagrangianInput};
    use crate::linalg::{int, rat};

    #[test]
    fn charts_round_trip() {
        let sp = LagrangianInput::Potential(parse_qpoly("u1^3/3 + u1 u2 - 2/7 u2^2", "u", 2).unwrap());
        let sm = LagrangianInput::Potential(parse_qpoly("-u1^2 + u2^4", "u", 2).unwrap());
        let cc = build_center_chord(&sm, &sp, DomainBox::cube(4, rat(1, 2)), None).unwrap();
        let sc = build_special(&parse_gpoly("z1^3 + i z1 z2", "z", 2).unwrap(), DomainBox::cube(4, int(1))).unwrap();
        for chart in [cc, sc] {
            let text = chart_to_json(&chart).unwrap();
            let back = chart_from_json(&text).unwrap();
            assert_eq!(back.x_polys(), chart.x_polys());
            assert_eq!(back.y_polys(), chart.y_polys());
            assert_eq!(back.f_poly(), chart.f_poly());
            assert_eq!(back.domain, chart.domain);
            assert_eq!(back.source, chart.source);
            assert_eq!(chart_to_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(matches!(chart_from_json("{"), Err(IasError::Parse { .. })));
        let sc = build_special(&parse_gpoly("z1^2", "z", 1).unwrap(), DomainBox::cube(2, int(1))).unwrap();
        let mut doc = ChartDoc::from_chart(&sc).unwrap();
        doc.f = "r1 +* r2".into();
        assert!(matches!(doc.to_chart(), Err(IasError::Parse { .. })));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
    }
}
