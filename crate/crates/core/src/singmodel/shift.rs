use std::collections::BTreeMap;

use crate::nascalar::rational::int;
use crate::nascalar::{LogNorm, NaField, Rational};

use super::algebra::{AqsExpr, Gen};
use super::SingError;

/// `α = λT`, `γ = -μτ^{-1}`, `β = λ^{-1} T^{-1}(1 - μ^{-1}τ)` on `V_r`,
/// with `τ(f)(T) = f(qT)`. `λ = μ = 1` is the unscaled representation.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftParams<F: NaField> {
    pub q: F,
    pub lambda: F,
    pub mu: F,
}

impl<F: NaField> ShiftParams<F> {
    pub fn new(q: F) -> Self {
        let one = q.one_like();
        ShiftParams {
            q,
            lambda: one.clone(),
            mu: one,
        }
    }

    pub fn scaled(q: F, lambda: F, mu: F) -> Result<Self, SingError> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(SingError::InvalidInput("scales must be nonzero".into()));
        }
        Ok(ShiftParams { q, lambda, mu })
    }
}

type Vector<F> = BTreeMap<i64, F>;

fn push<F: NaField>(v: &mut Vector<F>, i: i64, c: F) {
    let s = match v.remove(&i) {
        Some(x) => x.add(&c),
        None => c,
    };
    if !s.is_zero() {
        v.insert(i, s);
    }
}

fn apply_gen<F: NaField>(p: &ShiftParams<F>, g: Gen, v: &Vector<F>) -> Result<Vector<F>, SingError> {
    let mut out = Vector::new();
    let one = p.q.one_like();
    for (&i, c) in v {
        match g {
            Gen::Alpha => push(&mut out, i + 1, c.mul(&p.lambda)),
            Gen::Gamma => push(&mut out, i, c.mul(&p.mu).mul(&p.q.pow(-i)?).neg()),
            Gen::GammaInv => push(&mut out, i, c.mul(&p.mu.inv()?).mul(&p.q.pow(i)?).neg()),
            Gen::Beta => {
                let f = one.sub(&p.mu.inv()?.mul(&p.q.pow(i)?)).mul(&p.lambda.inv()?);
                push(&mut out, i - 1, c.mul(&f));
            }
            Gen::BetaInv => {
                return Err(SingError::NotInvertible("β = T^{-1}(1-τ) is not invertible on V_r".into()));
            }
        }
    }
    Ok(out)
}

/// Matrix of a representation on the window `T^i`, `|i| ≤ M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOperator<F: NaField> {
    window: i64,
    bandwidth: i64,
    rho: Rational,
    columns: BTreeMap<i64, Vector<F>>,
}

/// Operator norm in log form, and whether it was already attained on the
/// inner half of the reliable interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorNorm {
    pub value: LogNorm,
    pub stable: bool,
}

/// `ρ(x)` on `V_r`, `log r = rho`, restricted to the window `|i| ≤ m`.
pub fn shift_representation<F: NaField>(
    x: &AqsExpr<F>,
    rho: &Rational,
    params: &ShiftParams<F>,
    m: i64,
) -> Result<ShiftOperator<F>, SingError> {
    let bandwidth = x.max_word_len() as i64;
    if m <= bandwidth {
        return Err(SingError::Window { needed: bandwidth + 1, got: m });
    }
    let mut columns = BTreeMap::new();
    for j in -m..=m {
        let mut col = Vector::new();
        for (c, w) in x.terms() {
            let mut v = Vector::from([(j, c.clone())]);
            for &g in w.iter().rev() {
                v = apply_gen(params, g, &v)?;
            }
            for (i, e) in v {
                push(&mut col, i, e);
            }
        }
        col.retain(|i, _| i.abs() <= m);
        columns.insert(j, col);
    }
    Ok(ShiftOperator {
        window: m,
        bandwidth,
        rho: rho.clone(),
        columns,
    })
}

impl<F: NaField> ShiftOperator<F> {
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn bandwidth(&self) -> i64 {
        self.bandwidth
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    /// Columns `|j| ≤ M - bandwidth`, whose images lie inside the window.
    pub fn interior(&self) -> std::ops::RangeInclusive<i64> {
        let k = self.window - self.bandwidth;
        -k..=k
    }

    pub fn is_reliable(&self, col: i64) -> bool {
        self.interior().contains(&col)
    }

    pub fn entry(&self, row: i64, col: i64) -> Option<&F> {
        self.columns.get(&col)?.get(&row)
    }

    pub fn column(&self, col: i64) -> Option<&BTreeMap<i64, F>> {
        self.columns.get(&col)
    }

    pub fn is_zero_on_interior(&self) -> bool {
        self.interior().all(|j| self.columns[&j].is_empty())
    }

    fn sup_over(&self, k: i64) -> LogNorm {
        LogNorm::max_of((-k..=k).flat_map(|j| {
            self.columns[&j]
                .iter()
                .map(move |(&i, c)| c.log_norm().shift(&(&self.rho * int(i - j))))
        }))
    }
}

/// `sup (log|entry| + ρ(row - col))` over the reliable interior.
pub fn operator_log_norm<F: NaField>(op: &ShiftOperator<F>) -> OperatorNorm {
    let k = op.window - op.bandwidth;
    let value = op.sup_over(k);
    let stable = op.sup_over(k / 2) == value;
    OperatorNorm { value, stable }
}
