use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::nascalar::rational::{format_rational, int, parse_rational};
use crate::nascalar::{LaurentScalar, NaField, PadicScalar, Rational, Scalar, ScalarError, DEFAULT_PRECISION};
use crate::qtorus::TwistData;

use super::dilog::dilog_element_log;
use super::lines::{build_scattering_tree, Line, LineKind, Region};
use super::ScatterError;

/// A twist together with its lines.
pub type Diagram<F> = (Arc<TwistData<F>>, Vec<Line<F>>);

/// `{"q": scalar, "order": N, "lines": [..], "region"?: {..}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub q: Scalar,
    pub order: u64,
    pub lines: Vec<LineJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindJson {
    Initial,
    Composite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineJson {
    pub base: [String; 2],
    pub covector: [i64; 2],
    pub kind: KindJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parents: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub factor: FactorJson,
}

/// `[n1, n2, c]` stands for `c·z^{-(n1, n2)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub coeffs: Vec<(i64, i64, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    pub min: [String; 2],
    pub max: [String; 2],
}

/// Named diagrams built from dilogarithm walls on `dx` at `(1, 2)` and
/// `dy` at `(2, 1)`, crossing at `(2, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Single dilogarithm walls, default `q = 1 + t`.
    Pentagon,
    /// Squared dilogarithm walls, default `q = 1`.
    Squared,
}

impl std::str::FromStr for Preset {
    type Err = ScatterError;
    fn from_str(s: &str) -> Result<Self, ScatterError> {
        match s {
            "pentagon" => Ok(Preset::Pentagon),
            "squared" => Ok(Preset::Squared),
            _ => Err(ScatterError::InvalidInput(format!("unknown preset {s:?}"))),
        }
    }
}

fn pair(p: &[Rational; 2]) -> [String; 2] {
    [format_rational(&p[0]), format_rational(&p[1])]
}

fn parse_pair(p: &[String; 2]) -> Result<[Rational; 2], ScalarError> {
    Ok([parse_rational(&p[0])?, parse_rational(&p[1])?])
}

fn same_field(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Laurent(_), Scalar::Laurent(_)) => true,
        (Scalar::Padic(x), Scalar::Padic(y)) => x.prime() == y.prime(),
        _ => false,
    }
}

impl LineJson {
    pub fn build<F>(&self) -> Result<Line<F>, ScatterError>
    where
        F: NaField + TryFrom<Scalar, Error = ScalarError>,
    {
        let base = parse_pair(&self.base)?;
        let weight = match &self.weight {
            Some(w) => parse_rational(w)?,
            None => int(1),
        };
        let kind = match (self.kind, self.parents) {
            (KindJson::Initial, None) => LineKind::Initial,
            (KindJson::Composite, Some(parents)) => LineKind::Composite { parents },
            (KindJson::Initial, Some(_)) => return Err(ScatterError::InvalidInput("initial line with parents".into())),
            (KindJson::Composite, None) => return Err(ScatterError::InvalidInput("composite line without parents".into())),
        };
        let [a, b] = self.covector;
        let mut coeffs = Vec::with_capacity(self.factor.coeffs.len());
        for (n1, n2, c) in &self.factor.coeffs {
            let k = if a != 0 { n1 / a } else { n2 / b };
            if k <= 0 || k * a != *n1 || k * b != *n2 {
                return Err(ScatterError::InvalidInput(format!(
                    "coefficient at ({n1}, {n2}) is not a positive multiple of the covector {:?}",
                    self.covector
                )));
            }
            coeffs.push((k as u64, F::try_from(c.clone())?));
        }
        Line::new(base, self.covector, kind, weight, coeffs)
    }

    pub fn from_line<F>(l: &Line<F>) -> Self
    where
        F: NaField + Into<Scalar>,
    {
        let (kind, parents) = match l.kind() {
            LineKind::Initial => (KindJson::Initial, None),
            LineKind::Composite { parents } => (KindJson::Composite, Some(*parents)),
        };
        let [a, b] = l.covector();
        LineJson {
            base: pair(l.base()),
            covector: l.covector(),
            kind,
            parents,
            weight: Some(format_rational(l.weight())),
            factor: FactorJson {
                coeffs: l
                    .factor()
                    .iter()
                    .map(|(&k, c)| (k as i64 * a, k as i64 * b, c.clone().into()))
                    .collect(),
            },
        }
    }
}

impl DiagramJson {
    pub fn region(&self) -> Result<Option<Region>, ScatterError> {
        self.region
            .as_ref()
            .map(|r| {
                Ok(Region {
                    min: parse_pair(&r.min)?,
                    max: parse_pair(&r.max)?,
                })
            })
            .transpose()
    }

    pub fn build<F>(&self) -> Result<Diagram<F>, ScatterError>
    where
        F: NaField + TryFrom<Scalar, Error = ScalarError>,
    {
        for l in &self.lines {
            if let Some((.., c)) = l.factor.coeffs.iter().find(|(.., c)| !same_field(c, &self.q)) {
                return Err(ScalarError::FieldMismatch(format!(
                    "coefficient {} does not live in the field of q",
                    serde_json::to_string(c).unwrap_or_default()
                ))
                .into());
            }
        }
        for (k, l) in self.lines.iter().enumerate() {
            if let Some([a, b]) = l.parents {
                if a == b || a >= k || b >= k {
                    return Err(ScatterError::InvalidInput(format!(
                        "line {k} names parents {a} and {b}, which are not two earlier lines"
                    )));
                }
            }
        }
        let tw = TwistData::plane(F::try_from(self.q.clone())?)?;
        let lines = self.lines.iter().map(LineJson::build).collect::<Result<Vec<_>, _>>()?;
        Ok((tw, lines))
    }

    fn scatter_in<F>(&self, order: u64) -> Result<Self, ScatterError>
    where
        F: NaField + TryFrom<Scalar, Error = ScalarError> + Into<Scalar>,
    {
        let (tw, lines) = self.build::<F>()?;
        let region = self.region()?;
        let n = lines.len();
        let all = build_scattering_tree(&tw, lines, order, region.as_ref())?;
        let mut out = self.clone();
        out.order = order;
        out.lines.extend(all[n..].iter().map(LineJson::from_line));
        Ok(out)
    }

    /// The diagram completed by all collisions up to degree `order`
    /// (the diagram's own order when `None`); input lines are kept verbatim.
    pub fn scatter(&self, order: Option<u64>) -> Result<Self, ScatterError> {
        let order = order.unwrap_or(self.order);
        match &self.q {
            Scalar::Laurent(_) => self.scatter_in::<LaurentScalar>(order),
            Scalar::Padic(_) => self.scatter_in::<PadicScalar>(order),
        }
    }

    pub fn preset(which: Preset, order: u64, q: Option<Scalar>, precision: Option<i64>) -> Result<Self, ScatterError> {
        let p = precision.unwrap_or(DEFAULT_PRECISION);
        let q = match q {
            Some(q) => q,
            None => match which {
                Preset::Pentagon => LaurentScalar::default_q(p).into(),
                Preset::Squared => LaurentScalar::one(p).into(),
            },
        };
        let k = match which {
            Preset::Pentagon => 1,
            Preset::Squared => 2,
        };
        let lines = match &q {
            Scalar::Laurent(x) => preset_lines(x, k, order)?,
            Scalar::Padic(x) => preset_lines(x, k, order)?,
        };
        Ok(DiagramJson {
            q,
            order,
            lines,
            region: None,
        })
    }
}

fn preset_lines<F>(q: &F, k: i64, order: u64) -> Result<Vec<LineJson>, ScatterError>
where
    F: NaField + Into<Scalar>,
{
    let a = dilog_element_log(q, order as usize)?;
    let coeffs = || (1..=order).map(|m| (m, a.coeff(m as usize).scale_rational(&int(k))));
    let dx = Line::initial([int(1), int(2)], [1, 0], coeffs())?;
    let dy = Line::initial([int(2), int(1)], [0, 1], coeffs())?;
    Ok(vec![LineJson::from_line(&dx), LineJson::from_line(&dy)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_round_trip() {
        let d = DiagramJson::preset(Preset::Pentagon, 3, None, None).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: DiagramJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let out = d.scatter(None).unwrap();
        assert_eq!(out.lines.len(), 3);
        assert_eq!(out.lines[2].covector, [1, 1]);
        assert_eq!(out.lines[2].parents, Some([0, 1]));
        let again: DiagramJson = serde_json::from_str(&serde_json::to_string(&out).unwrap()).unwrap();
        assert_eq!(again, out);
        assert_eq!(again.scatter(None).unwrap(), out);
    }

    #[test]
    fn order_zero_echoes() {
        let d = DiagramJson::preset(Preset::Pentagon, 0, None, None).unwrap();
        assert_eq!(d.scatter(None).unwrap(), d);
    }

    #[test]
    fn squared_preset_slopes() {
        let d = DiagramJson::preset(Preset::Squared, 4, None, None).unwrap();
        let out = d.scatter(None).unwrap();
        let born: Vec<[i64; 2]> = out.lines[2..].iter().map(|l| l.covector).collect();
        assert_eq!(born, vec![[2, 1], [1, 1], [1, 2]]);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut d = DiagramJson::preset(Preset::Pentagon, 2, None, None).unwrap();
        d.lines[0].factor.coeffs[0].1 = 1;
        assert!(matches!(d.scatter(None), Err(ScatterError::InvalidInput(_))));
        let mut d = DiagramJson::preset(Preset::Pentagon, 2, None, None).unwrap();
        d.lines[0].base = ["7/2".into(), "2".into()];
        d.lines[1].base = ["2".into(), "-5".into()];
        assert!(d.scatter(None).is_ok());
        d.lines[0].base = ["0".into(), "1/2".into()];
        assert!(matches!(d.scatter(None), Err(ScatterError::Inadmissible { .. })));
        let s = r#"{"q":{"kind":"padic","p":5,"value":"6"},"order":2,"lines":[{"base":["1","1"],"covector":[1,0],"kind":"initial","factor":{"coeffs":[[1,0,{"kind":"padic","p":7,"value":"1"}]]}}]}"#;
        let d: DiagramJson = serde_json::from_str(s).unwrap();
        assert!(matches!(d.scatter(None), Err(ScatterError::Scalar(ScalarError::FieldMismatch(_)))));
    }
}
