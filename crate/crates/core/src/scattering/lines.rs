use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;

use crate::nascalar::rational::int;
use crate::nascalar::{LogNorm, NaField, Rational};
use crate::qtorus::{QSeries, TwistData};

use super::cone::{wedge, Cone, Slope};
use super::factor::factorize;
use super::grouplog::{GroupLog, SlopeFactor};
use super::ScatterError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineKind {
    Initial,
    /// Born from the collision of the lines at these positions.
    Composite { parents: [usize; 2] },
}

/// A ray `base + s·covector`, `s ≥ 0`, carrying the log `Σ_k c_k z^{-k·covector}`.
///
/// `weight` is the filtration degree of `z^{-covector}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<F: NaField> {
    base: [Rational; 2],
    covector: [i64; 2],
    kind: LineKind,
    weight: Rational,
    factor: BTreeMap<u64, F>,
}

/// Closed box `min ≤ p ≤ max`, componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub min: [Rational; 2],
    pub max: [Rational; 2],
}

impl Region {
    pub fn contains(&self, p: &[Rational; 2]) -> bool {
        (0..2).all(|i| self.min[i] <= p[i] && p[i] <= self.max[i])
    }
}

/// Intersection point of two rays, if both reach it at positive time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub point: [Rational; 2],
    pub times: [Rational; 2],
}

impl<F: NaField> Line<F> {
    pub fn new<I>(
        base: [Rational; 2],
        covector: [i64; 2],
        kind: LineKind,
        weight: Rational,
        factor: I,
    ) -> Result<Self, ScatterError>
    where
        I: IntoIterator<Item = (u64, F)>,
    {
        if covector[0].gcd(&covector[1]) != 1 {
            return Err(ScatterError::InvalidInput(format!("covector {covector:?} is not primitive")));
        }
        if !weight.is_positive() {
            return Err(ScatterError::InvalidInput("line weight must be positive".into()));
        }
        let mut map: BTreeMap<u64, F> = BTreeMap::new();
        for (k, c) in factor {
            if k == 0 {
                return Err(ScatterError::InvalidInput("constant term in a line factor".into()));
            }
            let s = match map.remove(&k) {
                Some(v) => v.add(&c),
                None => c,
            };
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
        Ok(Line {
            base,
            covector,
            kind,
            weight,
            factor: map,
        })
    }

    pub fn initial<I>(base: [Rational; 2], covector: [i64; 2], factor: I) -> Result<Self, ScatterError>
    where
        I: IntoIterator<Item = (u64, F)>,
    {
        Self::new(base, covector, LineKind::Initial, int(1), factor)
    }

    pub fn base(&self) -> &[Rational; 2] {
        &self.base
    }

    pub fn covector(&self) -> [i64; 2] {
        self.covector
    }

    pub fn kind(&self) -> &LineKind {
        &self.kind
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// `k ↦ c_k`.
    pub fn factor(&self) -> &BTreeMap<u64, F> {
        &self.factor
    }

    pub fn is_trivial(&self) -> bool {
        self.factor.is_empty()
    }

    pub fn series(&self, twist: &Arc<TwistData<F>>) -> QSeries<F> {
        let terms = self
            .factor
            .iter()
            .map(|(&k, c)| (vec![-(k as i64) * self.covector[0], -(k as i64) * self.covector[1]], c.clone()));
        QSeries::from_terms(twist, terms).expect("rank-2 exponents")
    }

    pub fn point_at(&self, s: &Rational) -> [Rational; 2] {
        [
            &self.base[0] + s * int(self.covector[0]),
            &self.base[1] + s * int(self.covector[1]),
        ]
    }

    /// Keeps `c_k` with `k·weight ≤ order`.
    pub fn truncated(&self, order: &Rational) -> Self {
        let mut l = self.clone();
        l.factor.retain(|&k, _| &self.weight * int(k as i64) <= *order);
        l
    }
}

fn cross(a: &[Rational; 2], b: &[Rational; 2]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Where `l1` and `l2` meet, both strictly after leaving their bases.
pub fn crossing<F: NaField>(l1: &Line<F>, l2: &Line<F>) -> Option<Crossing> {
    let det = wedge(l1.covector, l2.covector);
    if det == 0 {
        return None;
    }
    let d1 = [int(l1.covector[0]), int(l1.covector[1])];
    let d2 = [int(l2.covector[0]), int(l2.covector[1])];
    let diff = [&l2.base[0] - &l1.base[0], &l2.base[1] - &l1.base[1]];
    let det = int(det);
    let s1 = cross(&diff, &d2) / &det;
    let s2 = cross(&diff, &d1) / &det;
    if !s1.is_positive() || !s2.is_positive() {
        return None;
    }
    Some(Crossing {
        point: l1.point_at(&s1),
        times: [s1, s2],
    })
}

/// Newborn lines at the crossing of `l1` and `l2`, one per slope strictly
/// between the two parents, modulo degree above `order`.
pub fn collide<F: NaField>(
    twist: &Arc<TwistData<F>>,
    l1: &Line<F>,
    l2: &Line<F>,
    order: u64,
) -> Result<Vec<Line<F>>, ScatterError> {
    collide_indexed(twist, (0, l1), (1, l2), order)
}

fn collide_indexed<F: NaField>(
    twist: &Arc<TwistData<F>>,
    (i, l1): (usize, &Line<F>),
    (j, l2): (usize, &Line<F>),
    order: u64,
) -> Result<Vec<Line<F>>, ScatterError> {
    let Some(c) = crossing(l1, l2) else {
        return Ok(Vec::new());
    };
    let (a, b) = if wedge(l1.covector, l2.covector) > 0 { (l1, l2) } else { (l2, l1) };
    let n = int(order as i64);
    let (a, b) = (a.truncated(&n), b.truncated(&n));
    if a.is_trivial() || b.is_trivial() {
        return Ok(Vec::new());
    }
    let cone = Cone::weighted(a.covector, b.covector, [a.weight.clone(), b.weight.clone()])?;
    let g0 = GroupLog::from_series(twist, cone.clone(), c.point.clone(), &a.series(twist))?;
    let ginf = GroupLog::from_series(twist, cone.clone(), c.point.clone(), &b.series(twist))?;
    let g0 = SlopeFactor::new(Slope::zero(), g0)?;
    let ginf = SlopeFactor::new(Slope::Infinite, ginf)?;
    let mut out = Vec::new();
    for f in factorize(&ginf, &g0, order)? {
        match f.slope() {
            Slope::Infinite => continue,
            s if *s == Slope::zero() => continue,
            _ => {}
        }
        let (n1, n2) = f.slope().primitive();
        let raw = [
            n1 as i64 * cone.alpha1()[0] + n2 as i64 * cone.alpha2()[0],
            n1 as i64 * cone.alpha1()[1] + n2 as i64 * cone.alpha2()[1],
        ];
        let g = raw[0].gcd(&raw[1]);
        let covector = [raw[0] / g, raw[1] / g];
        let weight = cone.degree(n1, n2) / int(g);
        let s = f.log().series();
        let mut coeffs = Vec::with_capacity(s.len());
        for (e, v) in s.terms() {
            let k = if covector[0] != 0 { -e[0] / covector[0] } else { -e[1] / covector[1] };
            coeffs.push((k as u64, v.clone()));
        }
        out.push(Line::new(
            c.point.clone(),
            covector,
            LineKind::Composite { parents: [i, j] },
            weight,
            coeffs,
        )?);
    }
    Ok(out)
}

/// Runs collisions to completion in lexicographic order of crossing point,
/// then of parent positions. Crossings outside `region` are ignored, and
/// so are the parent pairs of composite lines already present.
pub fn build_scattering_tree<F: NaField>(
    twist: &Arc<TwistData<F>>,
    initial: Vec<Line<F>>,
    order: u64,
    region: Option<&Region>,
) -> Result<Vec<Line<F>>, ScatterError> {
    let mut lines = initial;
    let mut done: BTreeSet<(usize, usize)> = lines
        .iter()
        .filter_map(|l| match l.kind {
            LineKind::Composite { parents: [a, b] } => Some((a.min(b), a.max(b))),
            LineKind::Initial => None,
        })
        .collect();
    loop {
        let mut pending: Vec<([Rational; 2], usize, usize)> = Vec::new();
        for j in 0..lines.len() {
            for i in 0..j {
                if done.contains(&(i, j)) || lines[i].is_trivial() || lines[j].is_trivial() {
                    continue;
                }
                if let Some(c) = crossing(&lines[i], &lines[j]) {
                    if region.is_none_or(|r| r.contains(&c.point)) {
                        pending.push((c.point, i, j));
                    }
                }
            }
        }
        pending.sort();
        let Some((p, i, j)) = pending.first().cloned() else {
            break;
        };
        let at_p: BTreeSet<usize> = pending.iter().filter(|(q, ..)| *q == p).flat_map(|&(_, a, b)| [a, b]).collect();
        if at_p.len() > 2 {
            return Err(ScatterError::Unsupported(format!(
                "{} lines cross at ({}, {})",
                at_p.len(),
                p[0],
                p[1]
            )));
        }
        done.insert((i, j));
        let born = collide_indexed(twist, (i, &lines[i]), (j, &lines[j]), order)?;
        lines.extend(born);
    }
    Ok(lines)
}

/// Substitutes `η^{-1} ↦ C η^{-1}` in the factor, for `|C| < 1`.
pub fn transport_wall<F: NaField>(factor: &SlopeFactor<F>, c: &F) -> Result<SlopeFactor<F>, ScatterError> {
    if c.log_norm() >= LogNorm::zero() {
        return Err(ScatterError::ContractionViolation);
    }
    let g = factor.log();
    let mut coeffs = Vec::with_capacity(g.coeffs().len());
    for (&(n1, n2), v) in g.coeffs() {
        let k = -g.cone().exponent(n1, n2)[1];
        coeffs.push(((n1, n2), v.mul(&c.pow(k)?)));
    }
    let out = GroupLog::new(g.twist(), g.cone().clone(), g.base().clone(), coeffs)?;
    SlopeFactor::new(factor.slope().clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nascalar::{LaurentScalar, DEFAULT_PRECISION};
    use crate::scattering::dilog::dilog_element_log;

    fn tw() -> Arc<TwistData<LaurentScalar>> {
        TwistData::plane(LaurentScalar::default_q(DEFAULT_PRECISION)).unwrap()
    }

    fn dilog_line(base: [i64; 2], cov: [i64; 2], n: usize) -> Line<LaurentScalar> {
        let tw = tw();
        let a = dilog_element_log(tw.q(), n).unwrap();
        let coeffs = (1..=n).map(|m| (m as u64, a.coeff(m).clone()));
        Line::initial([int(base[0]), int(base[1])], cov, coeffs).unwrap()
    }

    #[test]
    fn crossing_geometry() {
        let a = dilog_line([1, 2], [1, 0], 2);
        let b = dilog_line([2, 1], [0, 1], 2);
        let c = crossing(&a, &b).unwrap();
        assert_eq!(c.point, [int(2), int(2)]);
        assert_eq!(c.times, [int(1), int(1)]);
        let behind = dilog_line([3, 2], [1, 0], 2);
        assert!(crossing(&behind, &b).is_none());
        let parallel = dilog_line([0, 0], [1, 0], 2);
        assert!(crossing(&a, &parallel).is_none());
    }

    #[test]
    fn collision_births_the_diagonal() {
        let tw = tw();
        let a = dilog_line([1, 2], [1, 0], 6);
        let b = dilog_line([2, 1], [0, 1], 6);
        let born = collide(&tw, &b, &a, 6).unwrap();
        assert_eq!(born.len(), 1);
        let l = &born[0];
        assert_eq!(l.covector(), [1, 1]);
        assert_eq!(l.base(), &[int(2), int(2)]);
        assert_eq!(l.weight(), &int(2));
        assert_eq!(l.factor().keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(collide(&tw, &a, &dilog_line([0, 0], [1, 0], 6), 6).unwrap(), vec![]);
    }

    #[test]
    fn trees() {
        let tw = tw();
        let single = vec![dilog_line([1, 2], [1, 0], 4)];
        assert_eq!(build_scattering_tree(&tw, single.clone(), 4, None).unwrap(), single);
        let pair = vec![dilog_line([1, 2], [1, 0], 2), dilog_line([2, 1], [0, 1], 2)];
        let out = build_scattering_tree(&tw, pair.clone(), 2, None).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[2].kind(), &LineKind::Composite { parents: [0, 1] });
        let far = Region {
            min: [int(5), int(5)],
            max: [int(6), int(6)],
        };
        assert_eq!(build_scattering_tree(&tw, pair, 2, Some(&far)).unwrap().len(), 2);
    }

    #[test]
    fn transport() {
        let tw = tw();
        let q = tw.q().clone();
        let t = LaurentScalar::t_power(1, DEFAULT_PRECISION);
        let one = q.one_like();
        let g = GroupLog::new(&tw, Cone::standard(), [int(1), int(1)], [((0, 1), one.clone())]).unwrap();
        let f = SlopeFactor::new(Slope::Infinite, g).unwrap();
        let moved = transport_wall(&f, &t).unwrap();
        assert_eq!(moved.ray_coeff(1).unwrap().log_norm(), LogNorm::from_int(-1));
        let twice = transport_wall(&moved, &t).unwrap();
        assert_eq!(twice, transport_wall(&f, &t.mul(&t)).unwrap());
        assert_eq!(transport_wall(&f, &one), Err(ScatterError::ContractionViolation));
    }
}
