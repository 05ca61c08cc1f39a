//! Truncated Laurent series over ℚ: the exact surrogate for ℂ((t)).
//!
//! A value is `t^val * (n_0 + n_1 t + n_2 t^2 + ...) / den + O(t^precision)`,
//! stored densely with one common denominator. Every operation returns a
//! normalized value: `n_0 != 0`, no trailing zeros, `gcd(den, n_i) = 1`,
//! `den > 0`, and no stored exponent at or above `precision`.

use std::cmp::min;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lognorm::LogNorm;
use super::rational::{format_rational, Rational};
use super::{NaField, ScalarError};

/// Absolute precision used when nothing else is specified.
pub const DEFAULT_PRECISION: i64 = 32;

#[derive(Clone, Debug)]
pub struct LaurentScalar {
    val: i64,
    nums: Vec<BigInt>,
    den: BigInt,
    precision: i64,
}

impl LaurentScalar {
    fn normalized(mut val: i64, mut nums: Vec<BigInt>, mut den: BigInt, precision: i64) -> Self {
        let keep = (precision - val).max(0) as usize;
        nums.truncate(keep);
        let Some(lead) = nums.iter().position(|n| !n.is_zero()) else {
            return Self::zero(precision);
        };
        if lead > 0 {
            nums.drain(..lead);
            val += lead as i64;
        }
        while nums.last().is_some_and(|n| n.is_zero()) {
            nums.pop();
        }
        if den.is_negative() {
            den = -den;
            for n in nums.iter_mut() {
                *n = -std::mem::take(n);
            }
        }
        let mut g = den.clone();
        for n in &nums {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            den /= &g;
            for n in nums.iter_mut() {
                *n /= &g;
            }
        }
        LaurentScalar {
            val,
            nums,
            den,
            precision,
        }
    }

    /// `0 + O(t^precision)`.
    pub fn zero(precision: i64) -> Self {
        LaurentScalar {
            val: 0,
            nums: Vec::new(),
            den: BigInt::one(),
            precision,
        }
    }

    pub fn one(precision: i64) -> Self {
        Self::constant(&Rational::one(), precision)
    }

    pub fn constant(r: &Rational, precision: i64) -> Self {
        Self::normalized(0, vec![r.numer().clone()], r.denom().clone(), precision)
    }

    /// `t^k`.
    pub fn t_power(k: i64, precision: i64) -> Self {
        Self::normalized(k, vec![BigInt::one()], BigInt::one(), precision)
    }

    /// `1 + t`, the default deformation parameter.
    pub fn default_q(precision: i64) -> Self {
        Self::from_terms([(0, Rational::one()), (1, Rational::one())], precision)
            .expect("1+t is representable at any positive precision")
    }

    /// Builds a value from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; exponents at or above `precision` are rejected.
    pub fn from_terms<I>(terms: I, precision: i64) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        if let Some((e, _)) = terms.iter().find(|(e, _)| *e >= precision) {
            return Err(ScalarError::InvalidInput(format!(
                "exponent {e} is not below precision {precision}"
            )));
        }
        let Some(low) = terms.iter().map(|(e, _)| *e).min() else {
            return Ok(Self::zero(precision));
        };
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut nums = vec![BigInt::zero(); (precision - low) as usize];
        for (e, c) in &terms {
            nums[(e - low) as usize] += c.numer() * (&den / c.denom());
        }
        Ok(Self::normalized(low, nums, den, precision))
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Least stored exponent; `None` when zero modulo precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.nums.is_empty()).then_some(self.val)
    }

    pub fn is_zero_mod_precision(&self) -> bool {
        self.nums.is_empty()
    }

    /// Stored terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| (self.val + i as i64, Rational::new(n.clone(), self.den.clone())))
            .collect()
    }

    /// Coefficient of `t^e` (zero when not stored).
    pub fn coeff(&self, e: i64) -> Rational {
        if self.nums.is_empty() || e < self.val {
            return Rational::zero();
        }
        match self.nums.get((e - self.val) as usize) {
            Some(n) => Rational::new(n.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    /// Value at `t = 0`, i.e. the `q -> 1` specialization when `q = 1 + t`.
    /// `None` if the value has a pole.
    pub fn value_at_zero(&self) -> Option<Rational> {
        if self.nums.is_empty() || self.val >= 0 {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Drops precision to `p` (never raises it).
    pub fn with_precision(&self, p: i64) -> Self {
        if p >= self.precision {
            return self.clone();
        }
        Self::normalized(self.val, self.nums.clone(), self.den.clone(), p)
    }

    fn val_or_precision(&self) -> i64 {
        if self.nums.is_empty() {
            self.precision
        } else {
            self.val
        }
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        let p = min(self.precision, o.precision);
        if o.nums.is_empty() {
            return self.with_precision(p);
        }
        if self.nums.is_empty() {
            let r = o.with_precision(p);
            return if negate { r.neg_impl() } else { r };
        }
        let v = min(self.val, o.val);
        let len = (p - v).max(0) as usize;
        let mut nums = vec![BigInt::zero(); len];
        let same_den = self.den == o.den;
        let den = if same_den {
            self.den.clone()
        } else {
            &self.den * &o.den
        };
        for (i, n) in self.nums.iter().enumerate() {
            let idx = (self.val - v) as usize + i;
            if idx >= len {
                break;
            }
            if same_den {
                nums[idx] += n;
            } else {
                nums[idx] += n * &o.den;
            }
        }
        for (i, n) in o.nums.iter().enumerate() {
            let idx = (o.val - v) as usize + i;
            if idx >= len {
                break;
            }
            let term = if same_den { n.clone() } else { n * &self.den };
            if negate {
                nums[idx] -= term;
            } else {
                nums[idx] += term;
            }
        }
        Self::normalized(v, nums, den, p)
    }

    fn neg_impl(&self) -> Self {
        LaurentScalar {
            val: self.val,
            nums: self.nums.iter().map(|n| -n).collect(),
            den: self.den.clone(),
            precision: self.precision,
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let p = min(
            self.precision + o.val_or_precision(),
            o.precision + self.val_or_precision(),
        );
        if self.nums.is_empty() || o.nums.is_empty() {
            return Self::zero(p);
        }
        let base = self.val + o.val;
        let len = (p - base).max(0) as usize;
        let len = min(len, self.nums.len() + o.nums.len() - 1);
        let mut nums = vec![BigInt::zero(); len];
        for (i, a) in self.nums.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.nums.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    nums[i + j] += a * b;
                }
            }
        }
        Self::normalized(base, nums, &self.den * &o.den, p)
    }

    fn inv_impl(&self) -> Result<Self, ScalarError> {
        if self.nums.is_empty() {
            return Err(ScalarError::NotInvertible(format!(
                "zero modulo t^{}",
                self.precision
            )));
        }
        // Relative precision is preserved: x = t^v u, x^-1 = t^-v u^-1.
        let rel = (self.precision - self.val) as usize;
        let a0 = &self.nums[0];
        // b_k = c_k / a0^(k+1) with c_0 = 1, c_k = -sum_{i>=1} a_i c_{k-i} a0^(i-1).
        let mut a0_pows = vec![BigInt::one()];
        for _ in 1..=rel {
            let next = a0_pows.last().unwrap() * a0;
            a0_pows.push(next);
        }
        let mut c: Vec<BigInt> = Vec::with_capacity(rel);
        c.push(BigInt::one());
        for k in 1..rel {
            let mut acc = BigInt::zero();
            for i in 1..=min(k, self.nums.len() - 1) {
                let ai = &self.nums[i];
                if ai.is_zero() {
                    continue;
                }
                acc += ai * &c[k - i] * &a0_pows[i - 1];
            }
            c.push(-acc);
        }
        // Common denominator a0^rel; include the original denominator.
        let nums: Vec<BigInt> = c
            .iter()
            .enumerate()
            .map(|(k, ck)| &self.den * ck * &a0_pows[rel - 1 - k])
            .collect();
        Ok(Self::normalized(
            -self.val,
            nums,
            a0_pows[rel].clone(),
            self.precision - 2 * self.val,
        ))
    }
}

/// Equality modulo the common precision of both operands.
impl PartialEq for LaurentScalar {
    fn eq(&self, other: &Self) -> bool {
        let p = min(self.precision, other.precision);
        let a = self.with_precision(p);
        let b = other.with_precision(p);
        a.nums == b.nums && (a.nums.is_empty() || (a.val == b.val && a.den == b.den))
    }
}

impl NaField for LaurentScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.precision)
    }
    fn one_like(&self) -> Self {
        Self::one(self.precision)
    }
    fn rational_like(&self, r: &Rational) -> Self {
        Self::constant(r, self.precision)
    }
    fn is_zero(&self) -> bool {
        self.nums.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, false)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add_impl(rhs, true)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
    fn neg(&self) -> Self {
        self.neg_impl()
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        self.inv_impl()
    }
    fn log_norm(&self) -> LogNorm {
        match self.valuation() {
            Some(v) => LogNorm::from_int(-v),
            None => LogNorm::NegInf,
        }
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return self.zero_like();
        }
        let nums = self.nums.iter().map(|n| n * r.numer()).collect();
        Self::normalized(self.val, nums, &self.den * r.denom(), self.precision)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "O(t^{})", self.precision);
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})t", format_rational(c))?,
                _ => write!(f, "({})t^{}", format_rational(c), e)?,
            }
        }
        write!(f, " + O(t^{})", self.precision)
    }
}
