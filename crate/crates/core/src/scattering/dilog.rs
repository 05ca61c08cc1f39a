use crate::nascalar::rational::{int, ratio};
use crate::nascalar::NaField;

use super::ScatterError;

/// Univariate series `Σ_{n ≤ N} a_n x^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct QDilogSeries<F> {
    coeffs: Vec<F>,
}

impl<F: NaField> QDilogSeries<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        QDilogSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &F {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    fn zero_like(&self) -> Vec<F> {
        vec![self.coeffs[0].zero_like(); self.coeffs.len()]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        QDilogSeries { coeffs: out }
    }

    pub fn scale(&self, s: &F) -> Self {
        QDilogSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// `f(x) ↦ f(c x)`.
    pub fn rescale_arg(&self, c: &F) -> Self {
        let mut p = c.one_like();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.mul(&p));
            p = p.mul(c);
        }
        QDilogSeries { coeffs }
    }

    /// `f(x) ↦ f(-x)`.
    pub fn negate_arg(&self) -> Self {
        QDilogSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        }
    }

    /// Formal `log` of a series with constant term 1.
    pub fn log(&self) -> Result<Self, ScatterError> {
        if !self.coeffs[0].is_one() {
            return Err(ScatterError::InvalidInput("log needs constant term 1".into()));
        }
        // f = 1 + u;  n a_n = n f_n - Σ_{k<n} k a_k f_{n-k}
        let n = self.coeffs.len();
        let mut a = self.zero_like();
        for m in 1..n {
            let mut s = self.coeffs[m].scale_rational(&int(m as i64));
            for (k, ak) in a.iter().enumerate().take(m).skip(1) {
                s = s.sub(&ak.mul(&self.coeffs[m - k]).scale_rational(&int(k as i64)));
            }
            a[m] = s.scale_rational(&ratio(1, m as i64));
        }
        Ok(QDilogSeries { coeffs: a })
    }

    /// Formal `exp` of a series with constant term 0.
    pub fn exp(&self) -> Result<Self, ScatterError> {
        if !self.coeffs[0].is_zero() {
            return Err(ScatterError::InvalidInput("exp needs constant term 0".into()));
        }
        // e' = g' e:  n e_n = Σ_{k=1}^{n} k g_k e_{n-k}
        let n = self.coeffs.len();
        let mut e = self.zero_like();
        e[0] = self.coeffs[0].one_like();
        for m in 1..n {
            let mut s = self.coeffs[0].zero_like();
            for k in 1..=m {
                s = s.add(&self.coeffs[k].mul(&e[m - k]).scale_rational(&int(k as i64)));
            }
            e[m] = s.scale_rational(&ratio(1, m as i64));
        }
        Ok(QDilogSeries { coeffs: e })
    }
}

/// `(q;q)_n = ∏_{k=1}^{n} (1 - q^k)` for `n = 0..=order`.
fn pochhammer_table<F: NaField>(q: &F, order: usize) -> Result<Vec<F>, ScatterError> {
    let one = q.one_like();
    let mut out = Vec::with_capacity(order + 1);
    out.push(one.clone());
    let mut qk = one.clone();
    for k in 1..=order {
        qk = qk.mul(q);
        let f = one.sub(&qk);
        if f.is_zero() {
            return Err(ScatterError::RootOfUnity(k));
        }
        let prev = out[k - 1].clone();
        out.push(prev.mul(&f));
    }
    Ok(out)
}

/// `(x;q)_∞ = Σ_n (-1)^n q^{n(n-1)/2} x^n / (q;q)_n`, truncated at `order`.
pub fn qpochhammer_inf<F: NaField>(q: &F, order: usize) -> Result<QDilogSeries<F>, ScatterError> {
    let table = pochhammer_table(q, order)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    for (n, p) in table.iter().enumerate() {
        let n = n as i64;
        let mut c = q.pow(n * (n - 1) / 2)?.div(p)?;
        if n % 2 == 1 {
            c = c.neg();
        }
        coeffs.push(c);
    }
    Ok(QDilogSeries { coeffs })
}

/// `Li_{2,q}(y) = (q - 1) log (-y;q)_∞`, truncated at `order`.
pub fn qdilog<F: NaField>(q: &F, order: usize) -> Result<QDilogSeries<F>, ScatterError> {
    let poch = qpochhammer_inf(q, order)?.negate_arg();
    Ok(poch.log()?.scale(&q.sub(&q.one_like())))
}

/// Log of the wall element whose conjugation sends `ξ ↦ ξ(1 + y)^k` when
/// `yξ = q ξ y`.
///
/// For `q ≠ 1` this is `-k Li_{2,q}(y)/(q-1)`, coefficient
/// `k (-1)^m / (m (1 - q^m))`. At `q = 1` the Poisson Hamiltonian
/// `k Σ (-1)^{m+1} y^m / m²` is returned instead.
pub fn wall_log<F: NaField>(q: &F, k: i64, order: usize) -> Result<QDilogSeries<F>, ScatterError> {
    let one = q.one_like();
    let mut coeffs = vec![one.zero_like()];
    if q.is_one() {
        for m in 1..=order as i64 {
            let sign = if m % 2 == 1 { k } else { -k };
            coeffs.push(one.scale_rational(&ratio(sign, m * m)));
        }
        return Ok(QDilogSeries { coeffs });
    }
    let mut qm = one.clone();
    for m in 1..=order as i64 {
        qm = qm.mul(q);
        let d = one.sub(&qm);
        if d.is_zero() {
            return Err(ScatterError::RootOfUnity(m as usize));
        }
        let sign = if m % 2 == 0 { k } else { -k };
        coeffs.push(d.inv()?.scale_rational(&ratio(sign, m)));
    }
    Ok(QDilogSeries { coeffs })
}

/// Log `Li_{2,q}(y)/(q-1)` of the dilogarithm wall element `(-y;q)_∞`,
/// coefficient `(-1)^{m+1} / (m (1 - q^m))`; at `q = 1` the Hamiltonian
/// `Li_2(y) = Σ (-1)^m y^m / m²`.
pub fn dilog_element_log<F: NaField>(q: &F, order: usize) -> Result<QDilogSeries<F>, ScatterError> {
    wall_log(q, -1, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::{LaurentScalar, PadicScalar, DEFAULT_PRECISION};

    fn q() -> LaurentScalar {
        LaurentScalar::default_q(DEFAULT_PRECISION)
    }

    #[test]
    fn pochhammer_low_coefficients() {
        let q = q();
        let s = qpochhammer_inf(&q, 4).unwrap();
        assert!(s.coeff(0).is_one());
        let one = q.one_like();
        assert_eq!(s.coeff(1), &one.sub(&q).inv().unwrap().neg());
    }

    #[test]
    fn pochhammer_functional_equation() {
        let q = PadicScalar::default_q(5).unwrap();
        let n = 10;
        let s = qpochhammer_inf(&q, n).unwrap();
        let one = q.one_like();
        let mut lin = vec![one.zero_like(); n + 1];
        lin[0] = one.clone();
        lin[1] = one.neg();
        let rhs = QDilogSeries::new(lin).mul(&s.rescale_arg(&q));
        assert_eq!(s, rhs);
    }

    #[test]
    fn dilog_low_coefficients() {
        let q = q();
        let li = qdilog(&q, 4).unwrap();
        assert!(li.coeff(0).is_zero());
        assert_eq!(li.coeff(1), &q.one_like().neg());
        let expected = q.add(&q.one_like()).scale_rational(&int(2)).inv().unwrap();
        assert_eq!(li.coeff(2), &expected);
    }

    #[test]
    fn dilog_closed_form_and_limit() {
        let q = q();
        let li = qdilog(&q, 8).unwrap();
        let one = q.one_like();
        for m in 1..=8i64 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let closed = one.sub(&q).div(&one.sub(&q.pow(m).unwrap())).unwrap().scale_rational(&ratio(sign, m));
            assert_eq!(li.coeff(m as usize), &closed);
            assert_eq!(li.coeff(m as usize).value_at_zero().unwrap(), ratio(sign, m * m));
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let q = PadicScalar::default_q(7).unwrap();
        let n = 9;
        let li = qdilog(&q, n).unwrap();
        let g = li.negate_arg().scale(&q.sub(&q.one_like()).inv().unwrap());
        assert_eq!(g.exp().unwrap(), qpochhammer_inf(&q, n).unwrap());
        let p = qpochhammer_inf(&q, n).unwrap();
        assert_eq!(p.log().unwrap().exp().unwrap(), p);
    }

    #[test]
    fn wall_log_is_negated_dilog() {
        let q = PadicScalar::default_q(5).unwrap();
        let n = 7;
        let li = qdilog(&q, n).unwrap();
        let expected = li.scale(&q.sub(&q.one_like()).inv().unwrap().neg());
        assert_eq!(wall_log(&q, 1, n).unwrap(), expected);
        assert_eq!(dilog_element_log(&q, n).unwrap(), li.scale(&q.sub(&q.one_like()).inv().unwrap()));
        let one = PadicScalar::from_int(1, 5).unwrap();
        let h = wall_log(&one, 2, 3).unwrap();
        assert_eq!(h.coeff(2).value(), &ratio(-1, 2));
    }

    #[test]
    fn roots_of_unity_rejected() {
        let one = PadicScalar::from_int(1, 5).unwrap();
        assert!(matches!(qpochhammer_inf(&one, 3), Err(ScatterError::RootOfUnity(1))));
        let minus = PadicScalar::from_int(-1, 5).unwrap();
        assert!(matches!(qdilog(&minus, 3), Err(ScatterError::RootOfUnity(2))));
    }
}
