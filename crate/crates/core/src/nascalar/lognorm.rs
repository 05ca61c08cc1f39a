use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, Rational};

/// Exact logarithm of a non-archimedean norm, `log|x| = -val(x)`.
///
/// `NegInf` is the norm of zero. It is the least element and absorbs
/// addition. Variant order gives the derived `Ord` the right shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogNorm {
    NegInf,
    Finite(Rational),
}

impl LogNorm {
    pub fn zero() -> Self {
        LogNorm::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        LogNorm::Finite(int(n))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, LogNorm::NegInf)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LogNorm::NegInf => None,
            LogNorm::Finite(r) => Some(r),
        }
    }

    /// Adds an exact rational offset; `NegInf` stays `NegInf`.
    pub fn shift(&self, by: &Rational) -> Self {
        match self {
            LogNorm::NegInf => LogNorm::NegInf,
            LogNorm::Finite(r) => LogNorm::Finite(r + by),
        }
    }

    /// Maximum of an iterator, `NegInf` for an empty one.
    pub fn max_of<I: IntoIterator<Item = LogNorm>>(it: I) -> Self {
        it.into_iter().max().unwrap_or(LogNorm::NegInf)
    }
}

impl Add for LogNorm {
    type Output = LogNorm;
    fn add(self, rhs: LogNorm) -> LogNorm {
        &self + &rhs
    }
}

impl Add<&LogNorm> for &LogNorm {
    type Output = LogNorm;
    fn add(self, rhs: &LogNorm) -> LogNorm {
        match (self, rhs) {
            (LogNorm::Finite(a), LogNorm::Finite(b)) => LogNorm::Finite(a + b),
            _ => LogNorm::NegInf,
        }
    }
}

/// Subtracting a finite norm. Panics when `rhs` is `NegInf`.
impl Sub<&LogNorm> for &LogNorm {
    type Output = LogNorm;
    fn sub(self, rhs: &LogNorm) -> LogNorm {
        let b = rhs.finite().expect("cannot subtract log|0|");
        self.shift(&-b)
    }
}

/// Negation is only meaningful for finite norms (norm of the inverse).
impl Neg for &LogNorm {
    type Output = LogNorm;
    fn neg(self) -> LogNorm {
        LogNorm::Finite(-self.finite().expect("log|0| has no inverse"))
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNorm::NegInf => f.write_str("-inf"),
            LogNorm::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl std::str::FromStr for LogNorm {
    type Err = super::ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "-inf" {
            Ok(LogNorm::NegInf)
        } else {
            parse_rational(s).map(LogNorm::Finite)
        }
    }
}

impl Serialize for LogNorm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LogNorm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
