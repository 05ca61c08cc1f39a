//! Elements `a + b·√d` of ℚ_p where `d` is a square in ℚ_p.
//!
//! Arithmetic is exact in ℚ(√d). The embedding into ℚ_p is fixed by a
//! Hensel lift of one square root of the unit part of `d`; it is consulted
//! only when the two summands have equal valuation, so valuations are exact
//! unless cancellation reaches past the lift precision (reported as an error).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lognorm::LogNorm;
use super::padic::PadicScalar;
use super::rational::{
    format_rational, int_valuation, mod_inverse, prime_power, rational_valuation, residue_mod,
    Rational,
};
use super::ScalarError;

/// Default number of p-adic digits in the lifted square root.
pub const DEFAULT_HENSEL_PRECISION: u32 = 40;

#[derive(Clone, Debug, PartialEq)]
enum Root {
    /// `d` is a square of a rational.
    Exact(Rational),
    /// `√d = p^half_val · u` with `u ≡ approx (mod p^k)`.
    Lifted { approx: BigInt, modulus: BigInt },
}

/// A chosen square root of `d` inside ℚ_p.
#[derive(Clone, Debug, PartialEq)]
pub struct SqrtContext {
    d: Rational,
    prime: u64,
    half_val: i64,
    hensel_precision: u32,
    root: Root,
}

impl SqrtContext {
    pub fn new(d: &PadicScalar, hensel_precision: u32) -> Result<Arc<Self>, ScalarError> {
        if !d.is_square()? {
            return Err(ScalarError::InvalidInput(format!(
                "{} is not a square in Q_{}",
                format_rational(d.value()),
                d.prime()
            )));
        }
        let p = d.prime();
        let v = d.valuation().expect("nonzero");
        let half_val = v / 2;
        let root = match rational_sqrt(d.value()) {
            Some(r) => Root::Exact(r),
            None => {
                let modulus = num_traits::pow(BigInt::from(p), hensel_precision as usize);
                let approx = hensel_sqrt(&d.unit_part(), p, &modulus)?;
                Root::Lifted { approx, modulus }
            }
        };
        Ok(Arc::new(SqrtContext {
            d: d.value().clone(),
            prime: p,
            half_val,
            hensel_precision,
            root,
        }))
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `val_p(√d) = val_p(d) / 2`.
    pub fn root_valuation(&self) -> i64 {
        self.half_val
    }

    pub fn hensel_precision(&self) -> u32 {
        self.hensel_precision
    }

    /// Residue of `√d` modulo `p^k` times `p^val`, i.e. the approximation
    /// of the unit part. `None` when the root is rational.
    pub fn unit_root_approx(&self) -> Option<&BigInt> {
        match &self.root {
            Root::Exact(_) => None,
            Root::Lifted { approx, .. } => Some(approx),
        }
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Newton lift of the smallest residue square root of the unit `u`.
fn hensel_sqrt(u: &Rational, p: u64, modulus: &BigInt) -> Result<BigInt, ScalarError> {
    let pb = BigInt::from(p);
    let u_mod_p = residue_mod(u, &pb).ok_or_else(|| ScalarError::InvalidInput("unit expected".into()))?;
    let mut r = (1..p)
        .map(BigInt::from)
        .find(|r| (r * r - &u_mod_p).mod_floor(&pb).is_zero())
        .ok_or_else(|| ScalarError::InvalidInput("no square root modulo p".into()))?;
    let u_mod = residue_mod(u, modulus).ok_or_else(|| ScalarError::InvalidInput("unit expected".into()))?;
    let mut modk = pb.clone();
    while &modk < modulus {
        modk = (&modk * &modk).min(modulus.clone());
        let two_r_inv = mod_inverse(&(BigInt::from(2) * &r), &modk)
            .ok_or_else(|| ScalarError::Unsupported("p = 2".into()))?;
        r = (&r - ((&r * &r - &u_mod) * two_r_inv)).mod_floor(&modk);
    }
    Ok(r)
}

/// `a + b·√d` over a shared [`SqrtContext`].
#[derive(Clone, Debug)]
pub struct QuadExtScalar {
    a: Rational,
    b: Rational,
    ctx: Arc<SqrtContext>,
}

impl PartialEq for QuadExtScalar {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.ctx.d == o.ctx.d && self.ctx.prime == o.ctx.prime
    }
}

impl QuadExtScalar {
    pub fn new(a: Rational, b: Rational, ctx: &Arc<SqrtContext>) -> Self {
        match &ctx.root {
            Root::Exact(r) => QuadExtScalar {
                a: a + b * r,
                b: Rational::zero(),
                ctx: ctx.clone(),
            },
            Root::Lifted { .. } => QuadExtScalar { a, b, ctx: ctx.clone() },
        }
    }

    pub fn rational(a: Rational, ctx: &Arc<SqrtContext>) -> Self {
        Self::new(a, Rational::zero(), ctx)
    }

    /// The chosen `√d` itself.
    pub fn sqrt_d(ctx: &Arc<SqrtContext>) -> Self {
        Self::new(Rational::zero(), Rational::one(), ctx)
    }

    pub fn context(&self) -> &Arc<SqrtContext> {
        &self.ctx
    }

    pub fn parts(&self) -> (&Rational, &Rational) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn zero_like(&self) -> Self {
        Self::rational(Rational::zero(), &self.ctx)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.a + &o.a, &self.b + &o.b, &self.ctx)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.a - &o.a, &self.b - &o.b, &self.ctx)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, &self.ctx)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.a * &o.a + &self.b * &o.b * &self.ctx.d;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::new(a, b, &self.ctx)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.a * r, &self.b * r, &self.ctx)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::NotInvertible("0 in Q_p(√d)".into()));
        }
        // d is not a rational square here (exact roots fold b into a), so the norm is nonzero.
        let norm = &self.a * &self.a - &self.b * &self.b * &self.ctx.d;
        Ok(Self::new(&self.a / &norm, -&self.b / &norm, &self.ctx))
    }

    /// Exact `val_p` of the embedded value; `Ok(None)` for zero.
    pub fn valuation(&self) -> Result<Option<i64>, ScalarError> {
        let p = self.ctx.prime;
        if self.b.is_zero() {
            return Ok((!self.a.is_zero()).then(|| rational_valuation(&self.a, p)));
        }
        let vb = rational_valuation(&self.b, p) + self.ctx.half_val;
        if self.a.is_zero() {
            return Ok(Some(vb));
        }
        let va = rational_valuation(&self.a, p);
        if va != vb {
            return Ok(Some(va.min(vb)));
        }
        let Root::Lifted { approx, modulus } = &self.ctx.root else {
            unreachable!("exact roots keep b = 0");
        };
        let w = va;
        let alpha = &self.a / prime_power(p, w);
        let beta = &self.b / prime_power(p, w - self.ctx.half_val);
        let x = (residue_mod(&alpha, modulus).unwrap() + residue_mod(&beta, modulus).unwrap() * approx)
            .mod_floor(modulus);
        if x.is_zero() {
            return Err(ScalarError::PrecisionExhausted(format!(
                "cancellation beyond p^{}",
                self.ctx.hensel_precision
            )));
        }
        Ok(Some(w + int_valuation(&x, p)))
    }

    pub fn log_norm(&self) -> Result<LogNorm, ScalarError> {
        Ok(match self.valuation()? {
            None => LogNorm::NegInf,
            Some(v) => LogNorm::from_int(-v),
        })
    }
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&format_rational(&self.a));
        }
        write!(
            f,
            "{} + {}·√({})",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.ctx.d)
        )
    }
}

impl PadicScalar {
    /// Square test in ℚ_p for odd p: even valuation and a quadratic-residue
    /// unit part. Zero counts as a square.
    pub fn is_square(&self) -> Result<bool, ScalarError> {
        let p = self.prime();
        if p == 2 {
            return Err(ScalarError::Unsupported("square test in Q_2".into()));
        }
        let Some(v) = self.valuation() else {
            return Ok(true);
        };
        if v % 2 != 0 {
            return Ok(false);
        }
        let r = BigInt::from(self.unit_residue().expect("nonzero"));
        let pb = BigInt::from(p);
        let e = BigInt::from((p - 1) / 2);
        Ok(r.modpow(&e, &pb).is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::rational::{int, ratio};

    fn pad(n: i64, d: i64, p: u64) -> PadicScalar {
        PadicScalar::new(ratio(n, d), p).unwrap()
    }

    #[test]
    fn square_test() {
        assert!(pad(4, 1, 5).is_square().unwrap());
        assert!(!pad(5, 1, 5).is_square().unwrap());
        assert!(!pad(2, 1, 5).is_square().unwrap());
        assert!(pad(-1, 6, 5).is_square().unwrap());
        assert!(pad(1, 1, 2).is_square().is_err());
    }

    #[test]
    fn lifted_root_squares_to_d() {
        let d = pad(-1, 6, 5);
        let ctx = SqrtContext::new(&d, 20).unwrap();
        let r = ctx.unit_root_approx().unwrap().clone();
        let m = num_traits::pow(BigInt::from(5), 20);
        let u = residue_mod(&ratio(-1, 6), &m).unwrap();
        assert!((&r * &r - u).mod_floor(&m).is_zero());
        let s = QuadExtScalar::sqrt_d(&ctx);
        assert_eq!(s.mul(&s), QuadExtScalar::rational(ratio(-1, 6), &ctx));
        assert_eq!(s.valuation().unwrap(), Some(0));
    }

    #[test]
    fn valuation_with_cancellation() {
        // d = -1 in Q_5: √-1 ≡ 2 (mod 5). 2 - √-1 has valuation >= 1.
        let ctx = SqrtContext::new(&pad(-1, 1, 5), 30).unwrap();
        let x = QuadExtScalar::new(int(2), int(-1), &ctx);
        let v = x.valuation().unwrap().unwrap();
        assert!(v >= 1);
        // Norm (2-i)(2+i) = 5 and 2+i is a unit, so v = 1 exactly.
        assert_eq!(v, 1);
        let y = QuadExtScalar::new(int(2), int(1), &ctx);
        assert_eq!(y.valuation().unwrap(), Some(0));
        assert_eq!(x.mul(&y), QuadExtScalar::rational(int(5), &ctx));
    }

    #[test]
    fn exact_root_folds() {
        let ctx = SqrtContext::new(&pad(4, 25, 7), 10).unwrap();
        let s = QuadExtScalar::sqrt_d(&ctx);
        assert_eq!(s.parts().0, &ratio(2, 5));
        assert!(s.inv().is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let ctx = SqrtContext::new(&pad(-1, 6, 5), 20).unwrap();
        let x = QuadExtScalar::new(ratio(3, 2), int(5), &ctx);
        let one = QuadExtScalar::rational(int(1), &ctx);
        assert_eq!(x.mul(&x.inv().unwrap()), one);
    }
}
