use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::nascalar::{LogNorm, NaField, Rational};
use crate::qtorus::{QSeries, TwistData};

use super::cone::{Cone, Slope};
use super::ScatterError;

/// `g = Σ c_{n₁,n₂} R_{α₁}^{-n₁} R_{α₂}^{-n₂}` at a base point.
#[derive(Clone, Debug)]
pub struct GroupLog<F: NaField> {
    twist: Arc<TwistData<F>>,
    cone: Cone,
    base: [Rational; 2],
    coeffs: BTreeMap<(u64, u64), F>,
}

/// A group log supported on a single ray: an element of `G_λ`.
#[derive(Clone, Debug)]
pub struct SlopeFactor<F: NaField> {
    slope: Slope,
    log: GroupLog<F>,
}

/// `q`-exponent `e` with `R_{α₁}^{-n₁} R_{α₂}^{-n₂} = q^e z^{-(n₁α₁+n₂α₂)}`.
pub(crate) fn ordered_phase<F: NaField>(tw: &TwistData<F>, cone: &Cone, n1: u64, n2: u64) -> i64 {
    fn inverse_power<F: NaField>(tw: &TwistData<F>, a: [i64; 2], n: i64) -> i64 {
        // R_a^{-1} = q^{-κ(a,-a)} z^{-a};  (z^v)^n = q^{κ(v,v) n(n-1)/2} z^{nv}
        let neg = [-a[0], -a[1]];
        -tw.kappa(&a, &neg) * n + tw.kappa(&neg, &neg) * n * (n - 1) / 2
    }
    let (m1, m2) = (n1 as i64, n2 as i64);
    let a1 = cone.alpha1();
    let a2 = cone.alpha2();
    let left = [-m1 * a1[0], -m1 * a1[1]];
    let right = [-m2 * a2[0], -m2 * a2[1]];
    inverse_power(tw, a1, m1) + inverse_power(tw, a2, m2) + tw.kappa(&left, &right)
}

impl<F: NaField> GroupLog<F> {
    /// Rejects `(0, 0)` and any inadmissible coefficient; zeros are dropped.
    pub fn new<I>(twist: &Arc<TwistData<F>>, cone: Cone, base: [Rational; 2], coeffs: I) -> Result<Self, ScatterError>
    where
        I: IntoIterator<Item = ((u64, u64), F)>,
    {
        if twist.rank() != 2 {
            return Err(ScatterError::InvalidInput("group logs live on a rank-2 torus".into()));
        }
        let mut map: BTreeMap<(u64, u64), F> = BTreeMap::new();
        for (k, c) in coeffs {
            if k == (0, 0) {
                return Err(ScatterError::InvalidInput("degree-0 coefficient".into()));
            }
            let s = match map.remove(&k) {
                Some(v) => v.add(&c),
                None => c,
            };
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
        let g = GroupLog {
            twist: twist.clone(),
            cone,
            base,
            coeffs: map,
        };
        g.check_admissible()?;
        Ok(g)
    }

    pub fn zero(twist: &Arc<TwistData<F>>, cone: Cone, base: [Rational; 2]) -> Self {
        GroupLog {
            twist: twist.clone(),
            cone,
            base,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn twist(&self) -> &Arc<TwistData<F>> {
        &self.twist
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn base(&self) -> &[Rational; 2] {
        &self.base
    }

    pub fn coeffs(&self) -> &BTreeMap<(u64, u64), F> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `log|c| - ⟨n₁α₁ + n₂α₂, base⟩`.
    pub fn excess(&self, n1: u64, n2: u64, c: &F) -> LogNorm {
        c.log_norm().shift(&-self.cone.pairing(n1, n2, &self.base))
    }

    pub fn check_admissible(&self) -> Result<(), ScatterError> {
        for (&(n1, n2), c) in &self.coeffs {
            let e = self.excess(n1, n2, c);
            if e > LogNorm::zero() {
                return Err(ScatterError::Inadmissible { n1, n2, excess: e });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    /// Drops coefficients of degree above `order`.
    pub fn truncated(&self, order: u64) -> Self {
        let mut g = self.clone();
        let order = crate::nascalar::rational::int(order as i64);
        g.coeffs.retain(|&(a, b), _| self.cone.degree(a, b) <= order);
        g
    }

    pub fn max_degree(&self) -> Rational {
        self.coeffs.keys().map(|&(a, b)| self.cone.degree(a, b)).max().unwrap_or_default()
    }

    /// The element of the quantum torus, on the normal-ordered basis.
    pub fn series(&self) -> QSeries<F> {
        let terms = self.coeffs.iter().map(|(&(n1, n2), c)| {
            let phase = self.twist.q_pow(ordered_phase(&self.twist, &self.cone, n1, n2));
            (self.cone.exponent(n1, n2), c.mul(&phase))
        });
        QSeries::from_terms(&self.twist, terms).expect("rank-2 exponents")
    }

    /// Reads ordered-monomial coefficients off a normal-ordered series.
    pub fn from_series(
        twist: &Arc<TwistData<F>>,
        cone: Cone,
        base: [Rational; 2],
        s: &QSeries<F>,
    ) -> Result<Self, ScatterError> {
        let mut coeffs = Vec::with_capacity(s.len());
        for (e, c) in s.terms() {
            let (n1, n2) = cone
                .decompose(e)
                .ok_or_else(|| ScatterError::InvalidInput(format!("monomial z^{e:?} is outside the cone")))?;
            let phase = twist.q_pow(-ordered_phase(twist, &cone, n1, n2));
            coeffs.push(((n1, n2), c.mul(&phase)));
        }
        GroupLog::new(twist, cone, base, coeffs)
    }

    /// Sum of logs; `G_λ` is abelian, so on one ray this is the group product.
    pub fn add(&self, o: &Self) -> Result<Self, ScatterError> {
        self.check_compatible(o)?;
        let mut g = self.clone();
        for (k, c) in &o.coeffs {
            let s = match g.coeffs.remove(k) {
                Some(v) => v.add(c),
                None => c.clone(),
            };
            if !s.is_zero() {
                g.coeffs.insert(*k, s);
            }
        }
        Ok(g)
    }

    pub(crate) fn check_compatible(&self, o: &Self) -> Result<(), ScatterError> {
        if !self.twist.same_as(&o.twist) {
            return Err(crate::qtorus::TorusError::TwistMismatch.into());
        }
        if self.cone != o.cone || self.base != o.base {
            return Err(ScatterError::InvalidInput("group logs use different anchors".into()));
        }
        Ok(())
    }

    /// Rays carrying a nonzero coefficient.
    pub fn slopes(&self) -> BTreeSet<Slope> {
        self.coeffs.keys().map(|&(a, b)| Slope::of(a, b)).collect()
    }

    pub fn restrict(&self, keep: impl Fn(u64, u64) -> bool) -> Self {
        let mut g = self.clone();
        g.coeffs.retain(|&(a, b), _| keep(a, b));
        g
    }

    pub fn with_base(&self, base: [Rational; 2]) -> Result<Self, ScatterError> {
        let mut g = self.clone();
        g.base = base;
        g.check_admissible()?;
        Ok(g)
    }
}

impl<F: NaField> PartialEq for GroupLog<F> {
    fn eq(&self, o: &Self) -> bool {
        if self.check_compatible(o).is_err() {
            return false;
        }
        let keys: BTreeSet<_> = self.coeffs.keys().chain(o.coeffs.keys()).collect();
        keys.into_iter().all(|k| match (self.coeffs.get(k), o.coeffs.get(k)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

/// Coefficients of `g` on the ray `λ`.
pub fn slope_component<F: NaField>(g: &GroupLog<F>, slope: &Slope) -> SlopeFactor<F> {
    SlopeFactor {
        slope: slope.clone(),
        log: g.restrict(|a, b| slope.contains(a, b)),
    }
}

impl<F: NaField> SlopeFactor<F> {
    pub fn new(slope: Slope, log: GroupLog<F>) -> Result<Self, ScatterError> {
        if let Some(&(a, b)) = log.coeffs.keys().find(|&&(a, b)| !slope.contains(a, b)) {
            return Err(ScatterError::NotSlopeHomogeneous {
                slope: slope.to_string(),
                n1: a,
                n2: b,
            });
        }
        Ok(SlopeFactor { slope, log })
    }

    pub fn slope(&self) -> &Slope {
        &self.slope
    }

    pub fn log(&self) -> &GroupLog<F> {
        &self.log
    }

    pub fn into_log(self) -> GroupLog<F> {
        self.log
    }

    /// Coefficient of `(R_{α₁}^{-a}R_{α₂}^{-b})` for the `k`-th multiple
    /// `(a, b) = k·primitive` of the ray.
    pub fn ray_coeff(&self, k: u64) -> Option<&F> {
        let (a, b) = self.slope.primitive();
        self.log.coeffs.get(&(k * a, k * b))
    }
}

impl<F: NaField> PartialEq for SlopeFactor<F> {
    fn eq(&self, o: &Self) -> bool {
        self.slope == o.slope && self.log == o.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::rational::int;
    use crate::nascalar::{LaurentScalar, DEFAULT_PRECISION};

    fn one() -> LaurentScalar {
        LaurentScalar::one(DEFAULT_PRECISION)
    }

    fn tw() -> Arc<TwistData<LaurentScalar>> {
        TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap()
    }

    #[test]
    fn phase_matches_series_products() {
        let tw = tw();
        for cone in [Cone::standard(), Cone::new([1, 0], [1, 2]).unwrap(), Cone::new([2, -1], [1, 1]).unwrap()] {
            let r1 = QSeries::unit_monomial(&tw, &cone.alpha1());
            let r2 = QSeries::unit_monomial(&tw, &cone.alpha2());
            let t = crate::qtorus::Truncation::graded(&[0, 0], 0);
            let r1i = crate::qtorus::qt_invert(&r1, &t).unwrap();
            let r2i = crate::qtorus::qt_invert(&r2, &t).unwrap();
            for (n1, n2) in [(0, 1), (1, 0), (2, 3), (3, 1), (0, 4)] {
                let lhs = r1i.pow(n1 as u32, None).mul(&r2i.pow(n2 as u32, None));
                let g = GroupLog::new(&tw, cone.clone(), [int(100), int(100)], [((n1, n2), one())]).unwrap();
                assert_eq!(g.series(), lhs, "{cone:?} {n1} {n2}");
                let back = GroupLog::from_series(&tw, cone.clone(), [int(100), int(100)], &lhs).unwrap();
                assert_eq!(back, g);
            }
        }
    }

    #[test]
    fn admissibility() {
        let tw = tw();
        let t_inv = LaurentScalar::t_power(-1, DEFAULT_PRECISION);
        let ok = GroupLog::new(&tw, Cone::standard(), [int(1), int(0)], [((1, 0), t_inv.clone())]);
        assert!(ok.is_ok());
        let bad = GroupLog::new(&tw, Cone::standard(), [int(0), int(1)], [((1, 0), t_inv)]);
        assert!(matches!(bad, Err(ScatterError::Inadmissible { n1: 1, n2: 0, .. })));
        assert!(GroupLog::new(&tw, Cone::standard(), [int(0), int(0)], [((0, 0), one())]).is_err());
    }

    #[test]
    fn slope_components_partition() {
        let tw = tw();
        let g = GroupLog::new(
            &tw,
            Cone::standard(),
            [int(5), int(5)],
            [((1, 0), one()), ((0, 1), one()), ((2, 2), one())],
        )
        .unwrap();
        let c0 = slope_component(&g, &Slope::zero());
        assert_eq!(c0.log().coeffs().keys().collect::<Vec<_>>(), vec![&(1, 0)]);
        let c1 = slope_component(&g, &Slope::of(1, 1));
        assert_eq!(c1.ray_coeff(2), Some(&one()));
        let ci = slope_component(&g, &Slope::Infinite);
        let sum = c0.log().add(c1.log()).unwrap().add(ci.log()).unwrap();
        assert_eq!(sum, g);
        assert!(SlopeFactor::new(Slope::zero(), g).is_err());
    }
}
