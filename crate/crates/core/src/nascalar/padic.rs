//! Exact rationals viewed inside ℚ_p.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lognorm::LogNorm;
use super::rational::{format_rational, is_prime, prime_power, rational_valuation, residue_mod, Rational};
use super::{NaField, ScalarError};

/// A rational number together with the prime whose valuation it carries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    value: Rational,
    prime: u64,
}

impl PadicScalar {
    pub fn new(value: Rational, prime: u64) -> Result<Self, ScalarError> {
        if !is_prime(prime) {
            return Err(ScalarError::NotPrime(prime));
        }
        Ok(PadicScalar { value, prime })
    }

    pub fn from_int(n: i64, prime: u64) -> Result<Self, ScalarError> {
        Self::new(Rational::from_integer(BigInt::from(n)), prime)
    }

    /// `1 + p`, the default deformation parameter.
    pub fn default_q(prime: u64) -> Result<Self, ScalarError> {
        Self::from_int(1 + prime as i64, prime)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    fn same(&self, v: Rational) -> Self {
        PadicScalar {
            value: v,
            prime: self.prime,
        }
    }

    /// `val_p`, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.value.is_zero()).then(|| rational_valuation(&self.value, self.prime))
    }

    /// `x / p^val(x)`; zero maps to zero.
    pub fn unit_part(&self) -> Rational {
        match self.valuation() {
            None => Rational::zero(),
            Some(v) => &self.value / prime_power(self.prime, v),
        }
    }

    /// Residue of the unit part modulo `p`, in `1..p`.
    pub fn unit_residue(&self) -> Option<u64> {
        if self.value.is_zero() {
            return None;
        }
        let m = BigInt::from(self.prime);
        let r = residue_mod(&self.unit_part(), &m)?;
        r.try_into().ok()
    }

    /// `|x| <= 1`.
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// `x ∈ ℤ_p^×`.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    fn check(&self, o: &Self) -> Result<(), ScalarError> {
        if self.prime != o.prime {
            return Err(ScalarError::FieldMismatch(format!(
                "Q_{} vs Q_{}",
                self.prime, o.prime
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.same(&self.value + &o.value))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.same(&self.value - &o.value))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.same(&self.value * &o.value))
    }
}

/// The infallible trait operations panic on mismatched primes; use the
/// `checked_*` methods at untrusted boundaries.
impl NaField for PadicScalar {
    fn zero_like(&self) -> Self {
        self.same(Rational::zero())
    }
    fn one_like(&self) -> Self {
        self.same(Rational::one())
    }
    fn rational_like(&self, r: &Rational) -> Self {
        self.same(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("p-adic field mismatch")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("p-adic field mismatch")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("p-adic field mismatch")
    }
    fn neg(&self) -> Self {
        self.same(-&self.value)
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.value.is_zero() {
            return Err(ScalarError::NotInvertible("0 in Q_p".into()));
        }
        Ok(self.same(self.value.recip()))
    }
    /// `-val_p(x)` in units of `log p`.
    fn log_norm(&self) -> LogNorm {
        match self.valuation() {
            None => LogNorm::NegInf,
            Some(v) => LogNorm::from_int(-v),
        }
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        self.same(&self.value * r)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q_{}", format_rational(&self.value), self.prime)
    }
}
