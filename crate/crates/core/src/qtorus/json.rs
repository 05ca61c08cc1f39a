use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::nascalar::rational::parse_rational;
use crate::nascalar::{LaurentScalar, LogNorm, NaField, PadicScalar, Rational, Scalar, ScalarError};

use super::{gauss_norm, point_seminorm, PolyRadius, QSeries, TorusError, TwistData};

/// `{"n": .., "c": [[i, j, c_ij], ..], "q": scalar}` with one-based `i > j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistJson {
    pub n: usize,
    pub c: Vec<(usize, usize, i64)>,
    pub q: Scalar,
}

/// `{"twist": .., "terms": [[[I_1, .., I_n], scalar], ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub twist: TwistJson,
    pub terms: Vec<(Vec<i64>, Scalar)>,
}

/// A parsed series over whichever field its `q` lives in.
#[derive(Clone, Debug)]
pub enum AnySeries {
    Laurent(QSeries<LaurentScalar>),
    Padic(QSeries<PadicScalar>),
}

fn same_field(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Laurent(_), Scalar::Laurent(_)) => true,
        (Scalar::Padic(x), Scalar::Padic(y)) => x.prime() == y.prime(),
        _ => false,
    }
}

impl TwistJson {
    pub fn build<F>(&self) -> Result<Arc<TwistData<F>>, TorusError>
    where
        F: NaField + TryFrom<Scalar, Error = ScalarError>,
    {
        let mut entries = Vec::with_capacity(self.c.len());
        for &(i, j, c) in &self.c {
            if i == 0 || j == 0 {
                return Err(TorusError::InvalidTwist("indices are one-based".into()));
            }
            entries.push((i - 1, j - 1, c));
        }
        TwistData::new(self.n, &entries, F::try_from(self.q.clone())?)
    }

    pub fn from_twist<F>(tw: &TwistData<F>) -> Self
    where
        F: NaField + Into<Scalar>,
    {
        TwistJson {
            n: tw.rank(),
            c: tw.entries().into_iter().map(|(i, j, c)| (i + 1, j + 1, c)).collect(),
            q: tw.q().clone().into(),
        }
    }
}

impl SeriesJson {
    pub fn build<F>(&self) -> Result<QSeries<F>, TorusError>
    where
        F: NaField + TryFrom<Scalar, Error = ScalarError>,
    {
        if let Some((_, c)) = self.terms.iter().find(|(_, c)| !same_field(c, &self.twist.q)) {
            return Err(ScalarError::FieldMismatch(format!(
                "coefficient {} does not live in the field of q",
                serde_json::to_string(c).unwrap_or_default()
            ))
            .into());
        }
        let tw = self.twist.build::<F>()?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), F::try_from(c.clone())?)))
            .collect::<Result<Vec<_>, ScalarError>>()?;
        QSeries::from_terms(&tw, terms)
    }

    /// Dispatches on the field of `q`.
    pub fn build_any(&self) -> Result<AnySeries, TorusError> {
        match self.twist.q {
            Scalar::Laurent(_) => self.build().map(AnySeries::Laurent),
            Scalar::Padic(_) => self.build().map(AnySeries::Padic),
        }
    }

    pub fn from_series<F>(f: &QSeries<F>) -> Self
    where
        F: NaField + Into<Scalar>,
    {
        SeriesJson {
            twist: TwistJson::from_twist(f.twist()),
            terms: f.terms().iter().map(|(e, c)| (e.clone(), c.clone().into())).collect(),
        }
    }
}

/// `{"series": .., "log_radius"?: [..]}` or `{"series": .., "point": [..]}`;
/// the Gauss norm at `log r = 0` when neither is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormRequest {
    pub series: SeriesJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_radius: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormResponse {
    pub log_norm: LogNorm,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>, ScalarError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn eval<F: NaField>(f: &QSeries<F>, radius: Option<&[Rational]>, point: Option<&[Rational]>) -> Result<LogNorm, TorusError> {
    let n = f.twist().rank();
    let check = |x: &[Rational]| {
        if x.len() == n {
            Ok(())
        } else {
            Err(TorusError::RankMismatch { expected: n, got: x.len() })
        }
    };
    match (radius, point) {
        (Some(_), Some(_)) => Err(TorusError::InvalidRadius("give either log_radius or point".into())),
        (None, Some(x)) => {
            check(x)?;
            point_seminorm(f, x)
        }
        (r, None) => {
            let r = r.map(<[Rational]>::to_vec).unwrap_or_else(|| vec![Rational::from_integer(0.into()); n]);
            check(&r)?;
            gauss_norm(f, &PolyRadius::new(r))
        }
    }
}

impl NormRequest {
    pub fn evaluate(&self) -> Result<NormResponse, TorusError> {
        let radius = self.log_radius.as_deref().map(parse_all).transpose()?;
        let point = self.point.as_deref().map(parse_all).transpose()?;
        let log_norm = match self.series.build_any()? {
            AnySeries::Laurent(f) => eval(&f, radius.as_deref(), point.as_deref())?,
            AnySeries::Padic(f) => eval(&f, radius.as_deref(), point.as_deref())?,
        };
        Ok(NormResponse { log_norm })
    }
}
