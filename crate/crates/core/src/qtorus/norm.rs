use num_traits::Zero;

use crate::nascalar::{LogNorm, NaField, Rational};

use super::{QSeries, TorusError};

/// Log-radii `(log r_1, ..., log r_n)` of a polydisc or annulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRadius(Vec<Rational>);

impl PolyRadius {
    pub fn new(log_radii: Vec<Rational>) -> Self {
        PolyRadius(log_radii)
    }

    /// Rejects `-inf` entries (a zero radius).
    pub fn from_log_norms(v: &[LogNorm]) -> Result<Self, TorusError> {
        v.iter()
            .map(|x| {
                x.finite()
                    .cloned()
                    .ok_or_else(|| TorusError::InvalidRadius("log r_i = -inf".into()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PolyRadius)
    }

    pub fn unit(n: usize) -> Self {
        PolyRadius(vec![Rational::zero(); n])
    }

    pub fn log_radii(&self) -> &[Rational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

fn pairing(e: &[i64], x: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (&i, xi) in e.iter().zip(x) {
        if i != 0 {
            acc += xi * Rational::from_integer(i.into());
        }
    }
    acc
}

fn max_plus<F: NaField>(f: &QSeries<F>, x: &[Rational]) -> Result<LogNorm, TorusError> {
    let n = f.twist().rank();
    if x.len() != n {
        return Err(TorusError::RankMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(f
        .terms()
        .iter()
        .map(|(e, c)| c.log_norm().shift(&pairing(e, x)))
        .max()
        .unwrap_or(LogNorm::NegInf))
}

/// `max_I (log|a_I| + ⟨I, log r⟩)`.
pub fn gauss_norm<F: NaField>(f: &QSeries<F>, r: &PolyRadius) -> Result<LogNorm, TorusError> {
    max_plus(f, r.log_radii())
}

/// The monomial seminorm at a point `x ∈ ℚⁿ` of the tropical base.
pub fn point_seminorm<F: NaField>(f: &QSeries<F>, x: &[Rational]) -> Result<LogNorm, TorusError> {
    max_plus(f, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::rational::int;
    use crate::nascalar::{LaurentScalar, DEFAULT_PRECISION};
    use crate::qtorus::TwistData;

    fn sc(terms: &[(i64, i64)]) -> LaurentScalar {
        LaurentScalar::from_terms(terms.iter().map(|&(e, c)| (e, int(c))), DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn gauss_norm_examples() {
        let tw = TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap();
        let z1 = QSeries::unit_monomial(&tw, &[1, 0]);
        let r = PolyRadius::new(vec![int(3), int(-2)]);
        assert_eq!(gauss_norm(&z1, &r).unwrap(), LogNorm::from_int(3));

        let f = QSeries::from_terms(&tw, [(vec![1, 0], sc(&[(1, 1)])), (vec![0, 2], sc(&[(0, 1)]))]).unwrap();
        assert_eq!(gauss_norm(&f, &PolyRadius::unit(2)).unwrap(), LogNorm::zero());
        let qf = f.scale(tw.q());
        assert_eq!(gauss_norm(&qf, &r).unwrap(), gauss_norm(&f, &r).unwrap());
    }

    #[test]
    fn point_seminorm_examples() {
        let tw = TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap();
        let z1 = QSeries::unit_monomial(&tw, &[1, 0]);
        assert_eq!(point_seminorm(&z1, &[int(2), int(0)]).unwrap(), LogNorm::from_int(2));
        let f = QSeries::monomial(&tw, vec![-1, 1], sc(&[(2, 1)]));
        assert_eq!(point_seminorm(&f, &[int(3), int(5)]).unwrap(), LogNorm::zero());
        assert_eq!(point_seminorm(&QSeries::zero(&tw), &[int(1), int(1)]).unwrap(), LogNorm::NegInf);
        assert!(point_seminorm(&z1, &[int(1)]).is_err());
    }
}
