use serde::{Deserialize, Serialize};

use crate::nascalar::rational::{format_rational, parse_rational};
use crate::nascalar::{LogNorm, PadicScalar};

use super::pbw::GL2Element;
use super::rep::{default_samples, gl2_sup_norm, Split};
use super::Gl2Error;

/// `{"p": 5, "q": "6", "element": [[a, b, c, d, "coef"], ..], "samples"?: [..], "window"?: M, "split"?: ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gl2NormInput {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub element: Vec<(u32, u32, u32, u32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleJson>>,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default)]
    pub split: SplitJson,
}

fn default_window() -> usize {
    64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitJson {
    #[default]
    UnitUpper,
    UnitLower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleJson {
    pub c: String,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleNormJson {
    pub c: String,
    pub t: String,
    pub log_norm: LogNorm,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2NormOutput {
    pub log_norm: LogNorm,
    pub per_sample: Vec<SampleNormJson>,
    pub stable: bool,
}

impl Gl2NormInput {
    /// `q` defaults to `1 + p`.
    pub fn q(&self) -> Result<PadicScalar, Gl2Error> {
        Ok(match &self.q {
            Some(s) => PadicScalar::new(parse_rational(s)?, self.p)?,
            None => PadicScalar::default_q(self.p)?,
        })
    }

    pub fn element(&self) -> Result<GL2Element, Gl2Error> {
        let q = self.q()?;
        let mut terms = Vec::with_capacity(self.element.len());
        for (a, b, c, d, coef) in &self.element {
            terms.push(([*a, *b, *c, *d], PadicScalar::new(parse_rational(coef)?, self.p)?));
        }
        GL2Element::from_terms(&q, terms)
    }

    pub fn samples(&self) -> Result<Vec<(PadicScalar, PadicScalar)>, Gl2Error> {
        match &self.samples {
            None => default_samples(&self.q()?),
            Some(s) => s
                .iter()
                .map(|s| {
                    Ok((
                        PadicScalar::new(parse_rational(&s.c)?, self.p)?,
                        PadicScalar::new(parse_rational(&s.t)?, self.p)?,
                    ))
                })
                .collect(),
        }
    }

    pub fn run(&self) -> Result<Gl2NormOutput, Gl2Error> {
        let split = match self.split {
            SplitJson::UnitUpper => Split::UnitUpper,
            SplitJson::UnitLower => Split::UnitLower,
        };
        let r = gl2_sup_norm(&self.element()?, &self.samples()?, self.window, split)?;
        Ok(Gl2NormOutput {
            log_norm: r.log_norm,
            stable: r.stable,
            per_sample: r
                .per_sample
                .into_iter()
                .map(|s| SampleNormJson {
                    c: format_rational(s.c.value()),
                    t: format_rational(s.t.value()),
                    log_norm: s.norm.value,
                    stable: s.norm.stable,
                })
                .collect(),
        })
    }
}
