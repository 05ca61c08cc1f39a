use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::nascalar::{NaField, Rational};

use super::series::Exponent;
use super::{QSeries, TorusError};

/// Structure group of the torsor: `SL(n,ℤ)` or `GL(n,ℤ)` in the linear part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Special,
    General,
}

/// An element `(A, λ)` of `GL(n,ℤ) ⋉ (k^×)ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsorElement<F> {
    a: Vec<Vec<i64>>,
    lambda: Vec<F>,
    /// `-val(λ_i) = log|λ_i|`.
    log_lambda: Vec<Rational>,
}

fn determinant(a: &[Vec<i64>]) -> BigInt {
    // Bareiss elimination, exact over ℤ.
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

impl<F: NaField> TorsorElement<F> {
    pub fn new(a: Vec<Vec<i64>>, lambda: Vec<F>, orientation: Orientation) -> Result<Self, TorusError> {
        let n = lambda.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(TorusError::InvalidTorsor(format!("matrix is not {n}×{n}")));
        }
        let det = determinant(&a);
        let ok = match orientation {
            Orientation::Special => det.is_one(),
            Orientation::General => det.abs().is_one(),
        };
        if !ok {
            return Err(TorusError::InvalidTorsor(format!("det A = {det}")));
        }
        let log_lambda = lambda
            .iter()
            .map(|l| {
                l.log_norm()
                    .finite()
                    .cloned()
                    .ok_or_else(|| TorusError::InvalidTorsor("λ_i must be invertible".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TorsorElement { a, lambda, log_lambda })
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn lambda(&self) -> &[F] {
        &self.lambda
    }

    fn apply(&self, e: &[i64]) -> Exponent {
        self.a.iter().map(|row| row.iter().zip(e).map(|(x, y)| x * y).sum()).collect()
    }

    fn coefficient(&self, e: &[i64]) -> F {
        let mut c = self.lambda[0].one_like();
        for (l, &k) in self.lambda.iter().zip(e) {
            if k != 0 {
                c = c.mul(&l.pow(k).expect("λ_i is invertible"));
            }
        }
        c
    }

    fn affine(&self, x: &[Rational], transpose: bool) -> Result<Vec<Rational>, TorusError> {
        let n = self.rank();
        if x.len() != n {
            return Err(TorusError::RankMismatch {
                expected: n,
                got: x.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let mut s = Rational::zero();
                for (j, xj) in x.iter().enumerate() {
                    let aij = if transpose { self.a[j][i] } else { self.a[i][j] };
                    if aij != 0 {
                        s += xj * Rational::from_integer(aij.into());
                    }
                }
                s + &self.log_lambda[i]
            })
            .collect())
    }
}

/// `z^I ↦ (∏ λ_i^{I_i}) z^{A I}`, extended linearly.
pub fn torsor_act<F: NaField>(g: &TorsorElement<F>, f: &QSeries<F>) -> Result<QSeries<F>, TorusError> {
    let n = f.twist().rank();
    if g.rank() != n {
        return Err(TorusError::RankMismatch {
            expected: n,
            got: g.rank(),
        });
    }
    QSeries::from_terms(
        f.twist(),
        f.terms().iter().map(|(e, c)| (g.apply(e), c.mul(&g.coefficient(e)))),
    )
}

/// `x ↦ A x - val(λ)`.
pub fn torsor_act_base<F: NaField>(g: &TorsorElement<F>, x: &[Rational]) -> Result<Vec<Rational>, TorusError> {
    g.affine(x, false)
}

/// `x ↦ Aᵀ x - val(λ)`, the point whose seminorm pulls back along
/// [`torsor_act`]: `|torsor_act(g, f)|_x = |f|_{torsor_pullback_base(g, x)}`.
pub fn torsor_pullback_base<F: NaField>(g: &TorsorElement<F>, x: &[Rational]) -> Result<Vec<Rational>, TorusError> {
    g.affine(x, true)
}
