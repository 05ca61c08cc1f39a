use std::sync::Arc;

use crate::nascalar::rational::{int, ratio};
use crate::nascalar::NaField;
use crate::qtorus::{QSeries, Substitution, Truncation, TwistData};

use super::cone::Cone;
use super::grouplog::GroupLog;
use super::ScatterError;

/// An automorphism of the plane quantum torus given by the images of `ξ`
/// and `η`, exact modulo cone degree `> order`.
#[derive(Clone, Debug)]
pub struct WallAutomorphism<F: NaField> {
    twist: Arc<TwistData<F>>,
    cone: Cone,
    order: u64,
    xi: QSeries<F>,
    eta: QSeries<F>,
}

/// Which elementary transformation to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallVariant {
    /// `ξ ↦ ξ(1 + η^{-1})`
    EtaInverse,
    /// `ξ ↦ ξ(1 + η)`
    Eta,
}

const XI: [i64; 2] = [1, 0];
const ETA: [i64; 2] = [0, 1];

/// `[g, f]`, or the Poisson bracket `{g, f}` on a commutative torus.
pub(crate) fn bracket<F: NaField>(g: &QSeries<F>, f: &QSeries<F>, t: &Truncation) -> QSeries<F> {
    if g.twist().is_classical() {
        g.poisson_bracket(f, Some(t))
    } else {
        g.commutator(f, Some(t))
    }
}

/// `e^{ad g} f`, dropping monomials outside `t`.
pub(crate) fn exp_ad<F: NaField>(g: &QSeries<F>, f: &QSeries<F>, t: &Truncation) -> QSeries<F> {
    let mut out = f.truncate(t);
    let mut term = out.clone();
    let mut k = 1i64;
    while !term.is_zero() && !g.is_zero() {
        term = bracket(g, &term, t).scale_rational(&ratio(1, k));
        out = out.add(&term);
        k += 1;
    }
    out
}

/// `e^g f e^{-g}` modulo degree above `order` relative to the least
/// degree of `f` (the Hamiltonian flow of `g` when `q = 1`).
pub fn conjugate_by_exp<F: NaField>(g: &GroupLog<F>, f: &QSeries<F>, order: u64) -> QSeries<F> {
    let ell = g.cone().ell();
    let t = Truncation::new(ell.to_vec(), int(0));
    let Some(low) = f.min_weight(&t) else {
        return f.clone();
    };
    let t = t.with_max(low + int(order as i64));
    exp_ad(&g.series(), f, &t)
}

impl<F: NaField> WallAutomorphism<F> {
    pub fn identity(twist: &Arc<TwistData<F>>, cone: Cone, order: u64) -> Self {
        WallAutomorphism {
            twist: twist.clone(),
            cone,
            order,
            xi: QSeries::unit_monomial(twist, &XI),
            eta: QSeries::unit_monomial(twist, &ETA),
        }
    }

    /// Builds from explicit images, checking the commutation relation.
    pub fn from_images(
        twist: &Arc<TwistData<F>>,
        cone: Cone,
        order: u64,
        xi: QSeries<F>,
        eta: QSeries<F>,
    ) -> Result<Self, ScatterError> {
        let w = WallAutomorphism {
            twist: twist.clone(),
            cone,
            order,
            xi: QSeries::zero(twist),
            eta: QSeries::zero(twist),
        };
        let w = WallAutomorphism {
            xi: xi.truncate(&w.xi_trunc()),
            eta: eta.truncate(&w.eta_trunc()),
            ..w
        };
        w.check_relation()?;
        w.check_unipotent()?;
        Ok(w)
    }

    /// `f ↦ e^g f e^{-g}`.
    pub fn from_log(g: &GroupLog<F>, order: u64) -> Self {
        let s = g.series();
        let mut w = Self::identity(g.twist(), g.cone().clone(), order);
        w.xi = exp_ad(&s, &w.xi, &w.xi_trunc());
        w.eta = exp_ad(&s, &w.eta, &w.eta_trunc());
        w
    }

    pub fn twist(&self) -> &Arc<TwistData<F>> {
        &self.twist
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn xi_image(&self) -> &QSeries<F> {
        &self.xi
    }

    pub fn eta_image(&self) -> &QSeries<F> {
        &self.eta
    }

    pub fn xi_trunc(&self) -> Truncation {
        self.cone.truncation(&XI, &int(self.order as i64))
    }

    pub fn eta_trunc(&self) -> Truncation {
        self.cone.truncation(&ETA, &int(self.order as i64))
    }

    fn check_relation(&self) -> Result<(), ScatterError> {
        let t = self.cone.truncation(&[1, 1], &int(self.order as i64));
        let lhs = self.xi.mul_truncated(&self.eta, &t);
        let rhs = self.eta.mul_truncated(&self.xi, &t).scale(self.twist.q());
        if lhs != rhs {
            return Err(crate::qtorus::TorusError::RelationFailure(1, 0).into());
        }
        Ok(())
    }

    fn check_unipotent(&self) -> Result<(), ScatterError> {
        for (img, gen) in [(&self.xi, XI), (&self.eta, ETA)] {
            let base = self.cone.degree_of(&gen);
            let ok = img
                .terms()
                .iter()
                .all(|(e, c)| if e.as_slice() == gen { c.is_one() } else { self.cone.degree_of(e) > base })
                && img.coeff(&gen).is_some();
            if !ok {
                return Err(ScatterError::InvalidInput(format!(
                    "image of z^{gen:?} is not unipotent for the cone"
                )));
            }
        }
        Ok(())
    }

    fn check_same(&self, o: &Self) -> Result<(), ScatterError> {
        if !self.twist.same_as(&o.twist) {
            return Err(crate::qtorus::TorusError::TwistMismatch.into());
        }
        if self.cone != o.cone || self.order != o.order {
            return Err(ScatterError::OrderMismatch);
        }
        Ok(())
    }

    fn substitution(&self, bound_anchor: &[i64]) -> Result<Substitution<F>, ScatterError> {
        let t = self.cone.truncation(bound_anchor, &int(self.order as i64));
        Ok(Substitution::new(vec![self.xi.clone(), self.eta.clone()], t)?)
    }

    /// `self(f)` on monomials of degree at most `order` above `z^anchor`.
    pub fn apply(&self, f: &QSeries<F>, anchor: &[i64]) -> Result<QSeries<F>, ScatterError> {
        Ok(self.substitution(anchor)?.apply(f)?)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, ScatterError> {
        self.check_same(other)?;
        let xi = self.apply(&other.xi, &XI)?;
        let eta = self.apply(&other.eta, &ETA)?;
        Ok(WallAutomorphism {
            xi,
            eta,
            ..self.clone()
        })
    }

    /// `Σ_k (id - self)^k`, exact modulo degree above `order`.
    pub fn inverse(&self) -> Result<Self, ScatterError> {
        let mut images = Vec::with_capacity(2);
        for gen in [XI, ETA] {
            let mut sub = self.substitution(&gen)?;
            let z = QSeries::unit_monomial(&self.twist, &gen);
            let mut acc = z.clone();
            let mut term = z;
            for _ in 0..self.order {
                term = term.sub(&sub.apply(&term)?);
                if term.is_zero() {
                    break;
                }
                acc = acc.add(&term);
            }
            images.push(acc);
        }
        let eta = images.pop().expect("two images");
        let xi = images.pop().expect("two images");
        Ok(WallAutomorphism {
            xi,
            eta,
            ..self.clone()
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.twist, self.cone.clone(), self.order)
    }
}

impl<F: NaField> PartialEq for WallAutomorphism<F> {
    fn eq(&self, o: &Self) -> bool {
        self.check_same(o).is_ok() && self.xi == o.xi && self.eta == o.eta
    }
}

/// `ξ ↦ ξ(1 + η^{∓1})`, `η ↦ η`, over a cone in which `η^{∓1}` has degree 1.
pub fn elementary_wall<F: NaField>(
    twist: &Arc<TwistData<F>>,
    variant: WallVariant,
    order: u64,
) -> Result<WallAutomorphism<F>, ScatterError> {
    let (cone, y) = match variant {
        WallVariant::EtaInverse => (Cone::standard(), [0, -1]),
        WallVariant::Eta => (Cone::new([0, -1], [1, 0])?, [0, 1]),
    };
    let xi = QSeries::unit_monomial(twist, &XI);
    let one_plus = QSeries::one(twist).add(&QSeries::unit_monomial(twist, &y));
    WallAutomorphism::from_images(twist, cone, order, xi.mul(&one_plus), QSeries::unit_monomial(twist, &ETA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::{LaurentScalar, PadicScalar, DEFAULT_PRECISION};
    use crate::qtorus::substitute_hom;
    use crate::scattering::dilog::wall_log;

    fn tw() -> Arc<TwistData<LaurentScalar>> {
        TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap()
    }

    fn far() -> [crate::nascalar::Rational; 2] {
        [int(10), int(10)]
    }

    #[test]
    fn elementary_wall_images() {
        let tw = tw();
        let w = elementary_wall(&tw, WallVariant::EtaInverse, 6).unwrap();
        let xi = QSeries::unit_monomial(&tw, &XI);
        let eta = QSeries::unit_monomial(&tw, &ETA);
        let y = QSeries::unit_monomial(&tw, &[0, -1]);
        let one_y = QSeries::one(&tw).add(&y);
        assert_eq!(w.xi_image(), &xi.mul(&one_y));
        assert_eq!(w.apply(&eta, &ETA).unwrap(), eta);

        let ww = w.compose(&w).unwrap();
        assert_eq!(ww.xi_image(), &xi.mul(&one_y).mul(&one_y));
        let t = w.xi_trunc();
        let images = [w.xi_image().clone(), w.eta_image().clone()];
        assert_eq!(&substitute_hom(&images, w.xi_image(), &t).unwrap(), ww.xi_image());

        let v = elementary_wall(&tw, WallVariant::Eta, 6).unwrap();
        assert_eq!(v.xi_image(), &xi.mul(&QSeries::one(&tw).add(&eta)));
    }

    #[test]
    fn inverse_and_identity() {
        let tw = tw();
        for variant in [WallVariant::EtaInverse, WallVariant::Eta] {
            let w = elementary_wall(&tw, variant, 7).unwrap();
            let inv = w.inverse().unwrap();
            assert!(w.compose(&inv).unwrap().is_identity());
            assert!(inv.compose(&w).unwrap().is_identity());
            let id = WallAutomorphism::identity(&tw, w.cone().clone(), 7);
            assert_eq!(id.compose(&w).unwrap(), w);
        }
    }

    #[test]
    fn dilog_conjugation_is_the_elementary_wall() {
        let tw = tw();
        let n = 6;
        let a = wall_log(tw.q(), 1, n as usize).unwrap();
        let g = GroupLog::new(
            &tw,
            Cone::standard(),
            far(),
            a.coeffs().iter().enumerate().skip(1).map(|(m, c)| ((0, m as u64), c.clone())),
        )
        .unwrap();
        let w = WallAutomorphism::from_log(&g, n);
        assert_eq!(w, elementary_wall(&tw, WallVariant::EtaInverse, n).unwrap());
    }

    #[test]
    fn classical_hamiltonian_flow() {
        let tw = TwistData::plane(PadicScalar::from_int(1, 5).unwrap()).unwrap();
        let n = 5;
        let h = wall_log(tw.q(), 1, n as usize).unwrap();
        let g = GroupLog::new(
            &tw,
            Cone::standard(),
            far(),
            h.coeffs().iter().enumerate().skip(1).map(|(m, c)| ((0, m as u64), c.clone())),
        )
        .unwrap();
        let w = WallAutomorphism::from_log(&g, n);
        assert_eq!(w, elementary_wall(&tw, WallVariant::EtaInverse, n).unwrap());
    }

    #[test]
    fn first_order_conjugation() {
        let tw = tw();
        let c = LaurentScalar::t_power(3, DEFAULT_PRECISION);
        let g = GroupLog::new(&tw, Cone::standard(), far(), [((0, 1), c.clone())]).unwrap();
        let xi = QSeries::unit_monomial(&tw, &XI);
        let got = conjugate_by_exp(&g, &xi, 1);
        let qm1 = tw.q().sub(&tw.q().one_like());
        let expected = xi.add(&QSeries::monomial(&tw, vec![1, -1], c.mul(&qm1)));
        assert_eq!(got, expected);
        let eta = QSeries::unit_monomial(&tw, &ETA);
        assert_eq!(conjugate_by_exp(&g, &eta, 5), eta);
        let zero = GroupLog::zero(&tw, Cone::standard(), far());
        assert_eq!(conjugate_by_exp(&zero, &xi, 5), xi);
    }

    #[test]
    fn rejects_bad_images() {
        let tw = tw();
        let xi = QSeries::unit_monomial(&tw, &XI);
        let eta = QSeries::unit_monomial(&tw, &ETA);
        assert!(WallAutomorphism::from_images(&tw, Cone::standard(), 3, eta.clone(), xi.clone()).is_err());
        let xi_eta = xi.mul(&QSeries::one(&tw).add(&eta));
        assert!(WallAutomorphism::from_images(&tw, Cone::standard(), 3, xi_eta, eta).is_err());
    }
}
