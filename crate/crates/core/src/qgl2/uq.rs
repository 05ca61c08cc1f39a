use crate::nascalar::rational::int;
use crate::nascalar::{LogNorm, NaField, PadicScalar, Rational};

/// Index `(m, s, p)` of `t^m/m! ∏ F^{(p_α)} E^{(s_α)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UqIndex {
    pub m: Vec<u32>,
    pub s: Vec<u32>,
    pub p: Vec<u32>,
}

impl UqIndex {
    pub fn new(m: Vec<u32>, s: Vec<u32>, p: Vec<u32>) -> Self {
        UqIndex { m, s, p }
    }

    pub fn degree(&self) -> u64 {
        self.m.iter().chain(&self.s).chain(&self.p).map(|&k| k as u64).sum()
    }
}

/// Finitely many coefficients `c_{m,s,p}` and a log-radius `log r`.
#[derive(Clone, Debug, PartialEq)]
pub struct UqCoeffData {
    pub terms: Vec<(UqIndex, PadicScalar)>,
    pub log_r: Rational,
}

/// `max log|c_{m,s,p}| - (|m| + |s| + |p|)·log r`.
pub fn uq_r_norm(xi: &UqCoeffData) -> LogNorm {
    LogNorm::max_of(
        xi.terms
            .iter()
            .map(|(i, c)| c.log_norm().shift(&-(&xi.log_r * int(i.degree() as i64)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pad(n: i64) -> PadicScalar {
        PadicScalar::from_int(n, 5).unwrap()
    }

    #[test]
    fn sup_formula() {
        let fe = UqIndex::new(vec![0], vec![1], vec![2]);
        let one = UqIndex::new(vec![0], vec![0], vec![0]);
        let xi = UqCoeffData {
            terms: vec![(fe.clone(), pad(3))],
            log_r: int(2),
        };
        assert_eq!(uq_r_norm(&xi), LogNorm::from_int(-6));
        let xi = UqCoeffData {
            terms: vec![(one.clone(), pad(1))],
            log_r: int(2),
        };
        assert_eq!(uq_r_norm(&xi), LogNorm::zero());
        let xi = UqCoeffData {
            terms: vec![(one, pad(25)), (fe, pad(1))],
            log_r: int(-1),
        };
        assert_eq!(uq_r_norm(&xi), LogNorm::from_int(3));
        let empty = UqCoeffData {
            terms: vec![],
            log_r: int(1),
        };
        assert!(uq_r_norm(&empty).is_neg_inf());
    }
}
