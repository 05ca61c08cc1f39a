use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::nascalar::{NaField, Rational};

use super::twist::TwistData;
use super::TorusError;

/// Exponent vector of a normal-ordered monomial `z_1^{I_1} ... z_n^{I_n}`.
pub type Exponent = Vec<i64>;

/// Support bound for operations that would otherwise produce infinite
/// series: keep monomials `z^I` with `⟨weights, I⟩ <= max`.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub weights: Vec<Rational>,
    pub max: Rational,
}

impl Truncation {
    pub fn new(weights: Vec<Rational>, max: Rational) -> Self {
        Truncation { weights, max }
    }

    /// Integer weights, integer bound.
    pub fn graded(weights: &[i64], max: i64) -> Self {
        Truncation {
            weights: weights.iter().map(|&w| crate::nascalar::rational::int(w)).collect(),
            max: crate::nascalar::rational::int(max),
        }
    }

    pub fn weight(&self, e: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for (w, &x) in self.weights.iter().zip(e) {
            if x != 0 && !w.is_zero() {
                acc += w * Rational::from_integer(x.into());
            }
        }
        acc
    }

    pub fn keeps(&self, e: &[i64]) -> bool {
        self.weight(e) <= self.max
    }

    /// Same weights, different bound.
    pub fn with_max(&self, max: Rational) -> Self {
        Truncation {
            weights: self.weights.clone(),
            max,
        }
    }
}

/// Whether a series lives on the polydisc (`I ∈ ℤ₊ⁿ`) or on the full torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Support {
    #[default]
    Torus,
    Polydisc,
}

impl Support {
    fn meet(self, o: Support) -> Support {
        if self == Support::Polydisc && o == Support::Polydisc {
            Support::Polydisc
        } else {
            Support::Torus
        }
    }
}

/// Finitely supported element of a quantum torus, stored on the
/// normal-ordered basis.
#[derive(Clone)]
pub struct QSeries<F: NaField> {
    twist: Arc<TwistData<F>>,
    terms: BTreeMap<Exponent, F>,
    support: Support,
}

pub(crate) fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<F: NaField> QSeries<F> {
    pub fn zero(twist: &Arc<TwistData<F>>) -> Self {
        QSeries {
            twist: twist.clone(),
            terms: BTreeMap::new(),
            support: Support::Torus,
        }
    }

    pub fn constant(twist: &Arc<TwistData<F>>, c: F) -> Self {
        Self::monomial(twist, vec![0; twist.rank()], c)
    }

    pub fn one(twist: &Arc<TwistData<F>>) -> Self {
        Self::constant(twist, twist.q().one_like())
    }

    pub fn monomial(twist: &Arc<TwistData<F>>, e: Exponent, c: F) -> Self {
        assert_eq!(e.len(), twist.rank(), "exponent length must match the rank");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        QSeries {
            twist: twist.clone(),
            terms,
            support: Support::Torus,
        }
    }

    /// `z^e` with unit coefficient.
    pub fn unit_monomial(twist: &Arc<TwistData<F>>, e: &[i64]) -> Self {
        Self::monomial(twist, e.to_vec(), twist.q().one_like())
    }

    /// Builds a series from terms; repeated exponents are summed.
    pub fn from_terms<I>(twist: &Arc<TwistData<F>>, terms: I) -> Result<Self, TorusError>
    where
        I: IntoIterator<Item = (Exponent, F)>,
    {
        let mut out = Self::zero(twist);
        for (e, c) in terms {
            if e.len() != twist.rank() {
                return Err(TorusError::RankMismatch {
                    expected: twist.rank(),
                    got: e.len(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Marks the series as a polydisc element; fails on negative exponents.
    pub fn into_polydisc(mut self) -> Result<Self, TorusError> {
        if let Some(e) = self.terms.keys().find(|e| e.iter().any(|&x| x < 0)) {
            return Err(TorusError::OutsidePolydisc(e.clone()));
        }
        self.support = Support::Polydisc;
        Ok(self)
    }

    pub fn into_torus(mut self) -> Self {
        self.support = Support::Torus;
        self
    }

    pub fn twist(&self) -> &Arc<TwistData<F>> {
        &self.twist
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, F> {
        &self.terms
    }

    pub fn coeff(&self, e: &[i64]) -> Option<&F> {
        self.terms.get(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_twist(&self, o: &Self) -> Result<(), TorusError> {
        if self.twist.same_as(&o.twist) {
            Ok(())
        } else {
            Err(TorusError::TwistMismatch)
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, TorusError> {
        self.check_twist(o)?;
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out.support = self.support.meet(o.support);
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, TorusError> {
        self.try_add(&o.neg())
    }

    /// Panics on twist mismatch; see [`QSeries::try_add`].
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("twist mismatch")
    }

    /// Panics on twist mismatch; see [`QSeries::try_sub`].
    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("twist mismatch")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale_rational(r))
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        QSeries {
            twist: self.twist.clone(),
            terms,
            support: self.support,
        }
    }

    /// Keeps only the monomials allowed by `t`.
    pub fn truncate(&self, t: &Truncation) -> Self {
        self.filter_terms(|e| t.keeps(e))
    }

    pub fn filter_terms(&self, keep: impl Fn(&[i64]) -> bool) -> Self {
        QSeries {
            twist: self.twist.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            support: self.support,
        }
    }

    /// Least weight of a stored monomial.
    pub fn min_weight(&self, t: &Truncation) -> Option<Rational> {
        self.terms.keys().map(|e| t.weight(e)).min()
    }

    fn mul_impl(&self, o: &Self, t: Option<&Truncation>) -> Self {
        let mut acc: BTreeMap<Exponent, F> = BTreeMap::new();
        let (lw, rw) = match t {
            Some(t) => (
                self.terms.keys().map(|e| t.weight(e)).collect::<Vec<_>>(),
                o.terms.keys().map(|e| t.weight(e)).collect::<Vec<_>>(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        for (i, (a_exp, a)) in self.terms.iter().enumerate() {
            for (j, (b_exp, b)) in o.terms.iter().enumerate() {
                if let Some(t) = t {
                    if &lw[i] + &rw[j] > t.max {
                        continue;
                    }
                }
                let k = self.twist.kappa(a_exp, b_exp);
                let mut c = a.mul(b);
                if k != 0 {
                    c = c.mul(&self.twist.q_pow(k));
                }
                let e = add_exp(a_exp, b_exp);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries {
            twist: self.twist.clone(),
            terms: acc,
            support: self.support.meet(o.support),
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, TorusError> {
        self.check_twist(o)?;
        Ok(self.mul_impl(o, None))
    }

    /// Product restricted to monomials allowed by `t` (pairs whose weights
    /// already exceed the bound are skipped, not computed).
    pub fn try_mul_truncated(&self, o: &Self, t: &Truncation) -> Result<Self, TorusError> {
        self.check_twist(o)?;
        Ok(self.mul_impl(o, Some(t)))
    }

    /// Panics on twist mismatch; see [`QSeries::try_mul`].
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("twist mismatch")
    }

    /// Panics on twist mismatch; see [`QSeries::try_mul_truncated`].
    pub fn mul_truncated(&self, o: &Self, t: &Truncation) -> Self {
        self.try_mul_truncated(o, t).expect("twist mismatch")
    }

    /// `fg - gf`.
    pub fn commutator(&self, o: &Self, t: Option<&Truncation>) -> Self {
        assert!(self.twist.same_as(&o.twist), "twist mismatch");
        let mut acc: BTreeMap<Exponent, F> = BTreeMap::new();
        for (a_exp, a) in &self.terms {
            for (b_exp, b) in &o.terms {
                let e = add_exp(a_exp, b_exp);
                if let Some(t) = t {
                    if !t.keeps(&e) {
                        continue;
                    }
                }
                let k1 = self.twist.kappa(a_exp, b_exp);
                let k2 = self.twist.kappa(b_exp, a_exp);
                if k1 == k2 {
                    continue;
                }
                let phase = self.twist.q_pow(k1).sub(&self.twist.q_pow(k2));
                let c = a.mul(b).mul(&phase);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries {
            twist: self.twist.clone(),
            terms: acc,
            support: self.support.meet(o.support),
        }
    }

    /// Classical Poisson bracket `{z^I, z^J} = φ(I,J) z^{I+J}`, the `q -> 1`
    /// limit of `[f, g] / (q - 1)`.
    pub fn poisson_bracket(&self, o: &Self, t: Option<&Truncation>) -> Self {
        assert!(self.twist.same_as(&o.twist), "twist mismatch");
        let mut out = Self::zero(&self.twist);
        for (a_exp, a) in &self.terms {
            for (b_exp, b) in &o.terms {
                let s = self.twist.skew(a_exp, b_exp);
                if s == 0 {
                    continue;
                }
                let e = add_exp(a_exp, b_exp);
                if let Some(t) = t {
                    if !t.keeps(&e) {
                        continue;
                    }
                }
                out.add_term(e, a.mul(b).scale_rational(&crate::nascalar::rational::int(s)));
            }
        }
        out
    }

    /// Coefficients on the symmetric basis `e(I) = s^{κ(I,I)} z^I`, where
    /// `s² = q`; on that basis `e(I) e(J) = s^{φ(I,J)} e(I+J)`.
    pub fn to_symmetric_basis(&self, s: &F) -> Result<BTreeMap<Exponent, F>, TorusError> {
        self.symmetric_phase(s, -1)
    }

    /// Inverse of [`QSeries::to_symmetric_basis`].
    pub fn from_symmetric_basis(
        twist: &Arc<TwistData<F>>,
        s: &F,
        coeffs: &BTreeMap<Exponent, F>,
    ) -> Result<Self, TorusError> {
        let f = Self::from_terms(twist, coeffs.clone())?;
        let terms = f.symmetric_phase(s, 1)?;
        Self::from_terms(twist, terms)
    }

    fn symmetric_phase(&self, s: &F, sign: i64) -> Result<BTreeMap<Exponent, F>, TorusError> {
        if !s.mul(s).sub(self.twist.q()).is_zero() {
            return Err(TorusError::InvalidTwist("s² must equal q".into()));
        }
        self.terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), c.mul(&s.pow(sign * self.twist.kappa(e, e))?))))
            .collect()
    }

    /// Non-negative power, truncated when `t` is given.
    pub fn pow(&self, k: u32, t: Option<&Truncation>) -> Self {
        let mut acc = Self::one(&self.twist);
        for _ in 0..k {
            acc = acc.mul_impl(self, t);
        }
        acc
    }
}

/// Equality modulo the precision of the coefficients.
impl<F: NaField> PartialEq for QSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.terms.values().all(|c| c.is_zero()),
            Err(_) => false,
        }
    }
}

impl<F: NaField + fmt::Display> fmt::Display for QSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]z^{e:?}")?;
        }
        Ok(())
    }
}

impl<F: NaField> fmt::Debug for QSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Inverse within a truncation.
///
/// `f` must have a unique monomial of least weight whose coefficient is
/// invertible; the rest of `f` then has strictly positive relative weight
/// and the geometric series terminates at the bound.
pub fn qt_invert<F: NaField>(f: &QSeries<F>, t: &Truncation) -> Result<QSeries<F>, TorusError> {
    let twist = f.twist();
    let weighted: Vec<(Rational, &Exponent, &F)> =
        f.terms().iter().map(|(e, c)| (t.weight(e), e, c)).collect();
    let Some(min_w) = weighted.iter().map(|(w, _, _)| w.clone()).min() else {
        return Err(TorusError::NotInvertible("zero series".into()));
    };
    let leads: Vec<_> = weighted.iter().filter(|(w, _, _)| *w == min_w).collect();
    if leads.len() != 1 {
        return Err(TorusError::NotInvertible(format!(
            "{} monomials share the least weight",
            leads.len()
        )));
    }
    let (_, lead_exp, lead_c) = leads[0];
    let u_inv = lead_c
        .inv()
        .map_err(|e| TorusError::NotInvertible(format!("leading coefficient: {e}")))?;
    // (u z^I)^{-1} = u^{-1} q^{-κ(I,-I)} z^{-I}
    let neg: Exponent = lead_exp.iter().map(|x| -x).collect();
    let phase = twist.q_pow(-twist.kappa(lead_exp, &neg));
    let lead_inv = QSeries::monomial(twist, neg, u_inv.mul(&phase));
    // f = lead (1 + h), so f^{-1} = (1 + h)^{-1} lead^{-1}.
    let rest = f.filter_terms(|e| e != lead_exp.as_slice());
    let h = lead_inv.mul(&rest);
    // The factor lead^{-1} adds weight -min_w.
    let inner = t.with_max(&t.max + &min_w);
    let mut acc = QSeries::one(twist);
    let mut power = QSeries::one(twist);
    let minus_h = h.neg();
    if !minus_h.is_zero() {
        let step = minus_h.min_weight(t).expect("nonzero");
        debug_assert!(step > Rational::zero());
        let mut reach = Rational::zero();
        loop {
            reach += &step;
            if reach > inner.max {
                break;
            }
            power = power.mul_truncated(&minus_h, &inner);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
    }
    Ok(acc.mul_truncated(&lead_inv, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::rational::int;
    use crate::nascalar::{LaurentScalar, DEFAULT_PRECISION};

    type S = QSeries<LaurentScalar>;

    fn plane() -> (Arc<TwistData<LaurentScalar>>, S, S) {
        let tw = TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap();
        let xi = QSeries::unit_monomial(&tw, &[1, 0]);
        let eta = QSeries::unit_monomial(&tw, &[0, 1]);
        (tw, xi, eta)
    }

    #[test]
    fn single_swap() {
        let (tw, xi, eta) = plane();
        let q_inv = tw.q_pow(-1);
        assert_eq!(eta.mul(&xi), QSeries::monomial(&tw, vec![1, 1], q_inv.clone()));
        assert_eq!(QSeries::one(&tw).mul(&xi), xi);
        let s = xi.add(&eta);
        let sq = s.mul(&s);
        let one = tw.q().one_like();
        assert_eq!(sq.coeff(&[1, 1]).unwrap(), &one.add(&q_inv));
        assert_eq!(sq.coeff(&[2, 0]).unwrap(), &one);
        assert_eq!(sq.len(), 3);
        assert!(xi.mul(&eta).sub(&eta.mul(&xi).scale(tw.q())).is_zero());
    }

    #[test]
    fn inverses_multiply_back() {
        let (tw, xi, eta) = plane();
        let t = Truncation::graded(&[0, 1], 3);
        assert_eq!(qt_invert(&xi, &t).unwrap(), QSeries::unit_monomial(&tw, &[-1, 0]));

        let one_plus_eta = QSeries::one(&tw).add(&eta);
        let inv = qt_invert(&one_plus_eta, &t).unwrap();
        let one = tw.q().one_like();
        let expected = QSeries::from_terms(
            &tw,
            (0..4).map(|k| (vec![0, k], if k % 2 == 0 { one.clone() } else { one.neg() })),
        )
        .unwrap();
        assert_eq!(inv, expected);

        let f = xi.mul(&one_plus_eta);
        let g = qt_invert(&f, &t).unwrap();
        assert_eq!(f.mul_truncated(&g, &t), QSeries::one(&tw));
        assert_eq!(g.mul_truncated(&f, &t), QSeries::one(&tw));
    }

    #[test]
    fn non_invertible_leads() {
        let (tw, xi, eta) = plane();
        let t = Truncation::graded(&[1, 1], 4);
        assert!(qt_invert(&xi.add(&eta), &t).is_err());
        assert!(qt_invert(&QSeries::zero(&tw), &t).is_err());
        let zero_lead = QSeries::monomial(&tw, vec![0, 0], LaurentScalar::zero(DEFAULT_PRECISION));
        assert!(qt_invert(&zero_lead, &t).is_err());
    }

    #[test]
    fn truncated_product_matches_full_product() {
        let (tw, xi, eta) = plane();
        let t = Truncation::new(vec![int(1), int(2)], int(5));
        let f = QSeries::one(&tw).add(&xi).add(&eta.mul(&eta));
        let g = xi.mul(&eta).add(&eta).add(&xi.mul(&xi).mul(&xi));
        assert_eq!(f.mul_truncated(&g, &t), f.mul(&g).truncate(&t));
    }

    #[test]
    fn symmetric_basis() {
        let tw = TwistData::new(
            2,
            &[(1, 0, -2)],
            LaurentScalar::default_q(DEFAULT_PRECISION).mul(&LaurentScalar::default_q(DEFAULT_PRECISION)),
        )
        .unwrap();
        let s = LaurentScalar::default_q(DEFAULT_PRECISION);
        let f = QSeries::unit_monomial(&tw, &[1, 1]);
        let b = f.to_symmetric_basis(&s).unwrap();
        assert_eq!(b[&vec![1, 1]], s.pow(2).unwrap());
        assert_eq!(QSeries::from_symmetric_basis(&tw, &s, &b).unwrap(), f);
        assert!(f.to_symmetric_basis(&tw.q().clone()).is_err());
    }

    #[test]
    fn polydisc_flag() {
        let (tw, xi, eta) = plane();
        let p = xi.clone().into_polydisc().unwrap();
        assert_eq!(p.mul(&eta.clone().into_polydisc().unwrap()).support(), Support::Polydisc);
        assert_eq!(p.mul(&eta).support(), Support::Torus);
        assert!(QSeries::unit_monomial(&tw, &[-1, 0]).into_polydisc().is_err());
    }

    #[test]
    fn poisson_bracket_is_limit_of_commutator() {
        let tw = TwistData::plane(LaurentScalar::one(DEFAULT_PRECISION)).unwrap();
        let xi = QSeries::unit_monomial(&tw, &[1, 0]);
        let eta = QSeries::unit_monomial(&tw, &[0, 1]);
        assert!(xi.commutator(&eta, None).is_zero());
        let b = xi.poisson_bracket(&eta, None);
        assert_eq!(b, QSeries::monomial(&tw, vec![1, 1], LaurentScalar::one(DEFAULT_PRECISION)));
    }
}
