//! Exact non-archimedean scalars with log-domain norms.
//!
//! Two coefficient fields are provided: [`LaurentScalar`] (ℚ((t)) truncated
//! at a finite precision, standing in for ℂ((t))) and [`PadicScalar`]
//! (ℚ inside ℚ_p). Norms are never exponentiated: everything is expressed
//! through [`LogNorm`], the exact value of `-val(x)`.

mod laurent;
mod lognorm;
mod padic;
mod quadext;
pub mod rational;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use laurent::{LaurentScalar, DEFAULT_PRECISION};
pub use lognorm::LogNorm;
pub use padic::PadicScalar;
pub use quadext::{QuadExtScalar, SqrtContext, DEFAULT_HENSEL_PRECISION};
pub use rational::Rational;

use rational::{format_rational, parse_rational};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScalarError {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid scalar: {0}")]
    InvalidInput(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A valued field with exact arithmetic.
///
/// Constructors take `&self` so that context (precision, prime) is
/// inherited from an existing element.
pub trait NaField: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn rational_like(&self, r: &Rational) -> Self;
    /// Exact zero, or zero modulo precision.
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;
    fn log_norm(&self) -> LogNorm;

    fn int_like(&self, n: i64) -> Self {
        self.rational_like(&rational::int(n))
    }

    /// Multiplication by an exact rational.
    fn scale_rational(&self, r: &Rational) -> Self {
        self.mul(&self.rational_like(r))
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    /// Integer power; negative exponents invert.
    fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

/// A scalar of either supported field, as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarJson", into = "ScalarJson")]
pub enum Scalar {
    Laurent(LaurentScalar),
    Padic(PadicScalar),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ScalarJson {
    Laurent { terms: Vec<(i64, String)>, precision: i64 },
    Padic { p: u64, value: String },
}

impl TryFrom<ScalarJson> for Scalar {
    type Error = ScalarError;
    fn try_from(j: ScalarJson) -> Result<Self, ScalarError> {
        match j {
            ScalarJson::Laurent { terms, precision } => {
                let terms = terms
                    .iter()
                    .map(|(e, c)| Ok((*e, parse_rational(c)?)))
                    .collect::<Result<Vec<_>, ScalarError>>()?;
                Ok(Scalar::Laurent(LaurentScalar::from_terms(terms, precision)?))
            }
            ScalarJson::Padic { p, value } => {
                Ok(Scalar::Padic(PadicScalar::new(parse_rational(&value)?, p)?))
            }
        }
    }
}

impl From<Scalar> for ScalarJson {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Laurent(x) => ScalarJson::Laurent {
                terms: x
                    .terms()
                    .iter()
                    .map(|(e, c)| (*e, format_rational(c)))
                    .collect(),
                precision: x.precision(),
            },
            Scalar::Padic(x) => ScalarJson::Padic {
                p: x.prime(),
                value: format_rational(x.value()),
            },
        }
    }
}

impl From<LaurentScalar> for Scalar {
    fn from(x: LaurentScalar) -> Self {
        Scalar::Laurent(x)
    }
}

impl From<PadicScalar> for Scalar {
    fn from(x: PadicScalar) -> Self {
        Scalar::Padic(x)
    }
}

impl TryFrom<Scalar> for LaurentScalar {
    type Error = ScalarError;
    fn try_from(s: Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Laurent(x) => Ok(x),
            Scalar::Padic(_) => Err(ScalarError::FieldMismatch("expected a Laurent scalar".into())),
        }
    }
}

impl TryFrom<Scalar> for PadicScalar {
    type Error = ScalarError;
    fn try_from(s: Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Padic(x) => Ok(x),
            Scalar::Laurent(_) => Err(ScalarError::FieldMismatch("expected a p-adic scalar".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Field arithmetic on dynamically typed scalars.
pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match (x, y) {
        (Scalar::Laurent(a), Scalar::Laurent(b)) => Ok(Scalar::Laurent(match op {
            ArithOp::Add => a.add(b),
            ArithOp::Sub => a.sub(b),
            ArithOp::Mul => a.mul(b),
        })),
        (Scalar::Padic(a), Scalar::Padic(b)) => Ok(Scalar::Padic(match op {
            ArithOp::Add => a.checked_add(b)?,
            ArithOp::Sub => a.checked_sub(b)?,
            ArithOp::Mul => a.checked_mul(b)?,
        })),
        _ => Err(ScalarError::FieldMismatch("Laurent vs p-adic operands".into())),
    }
}

pub fn scalar_invert(x: &Scalar) -> Result<Scalar, ScalarError> {
    match x {
        Scalar::Laurent(a) => a.inv().map(Scalar::Laurent),
        Scalar::Padic(a) => a.inv().map(Scalar::Padic),
    }
}

pub fn log_norm(x: &Scalar) -> LogNorm {
    match x {
        Scalar::Laurent(a) => a.log_norm(),
        Scalar::Padic(a) => a.log_norm(),
    }
}

/// `-val_p(x)` in units of `log p`.
pub fn padic_log_norm(x: &PadicScalar) -> LogNorm {
    x.log_norm()
}
