use std::collections::HashMap;

use num_traits::Zero;

use crate::nascalar::{NaField, Rational};

use super::series::{qt_invert, QSeries, Truncation};
use super::TorusError;

/// Images of the generators under a torus homomorphism, with cached
/// truncated powers.
pub struct Substitution<F: NaField> {
    images: Vec<QSeries<F>>,
    trunc: Truncation,
    min_weight: Vec<Rational>,
    powers: HashMap<(usize, i64), (Rational, QSeries<F>)>,
}

/// Checks `φ(z_i) φ(z_j) = q^{c_ij} φ(z_j) φ(z_i)` for all `i > j` within `t`.
pub fn check_relations<F: NaField>(images: &[QSeries<F>], t: &Truncation) -> Result<(), TorusError> {
    let Some(first) = images.first() else {
        return Ok(());
    };
    let tw = first.twist();
    if images.len() != tw.rank() {
        return Err(TorusError::RankMismatch {
            expected: tw.rank(),
            got: images.len(),
        });
    }
    for (i, a) in images.iter().enumerate() {
        for (j, b) in images.iter().enumerate().take(i) {
            let lhs = a.try_mul_truncated(b, t)?;
            let rhs = b.try_mul_truncated(a, t)?.scale(&tw.q_pow(tw.c(i, j)));
            if lhs != rhs {
                return Err(TorusError::RelationFailure(i, j));
            }
        }
    }
    Ok(())
}

impl<F: NaField> Substitution<F> {
    /// Validates the images, known modulo weight above `trunc.max`, against
    /// the commutation relations in the range where their products are exact.
    pub fn new(images: Vec<QSeries<F>>, trunc: Truncation) -> Result<Self, TorusError> {
        let min_weight = images
            .iter()
            .map(|g| {
                g.min_weight(&trunc)
                    .ok_or_else(|| TorusError::NotInvertible("generator maps to zero".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let slack = min_weight.iter().min().cloned().unwrap_or_else(Rational::zero);
        check_relations(&images, &trunc.with_max(&trunc.max + slack.min(Rational::zero())))?;
        Ok(Substitution {
            images,
            trunc,
            min_weight,
            powers: HashMap::new(),
        })
    }

    /// Least weight of `φ(z_i)^k`.
    fn factor_weight(&self, i: usize, k: i64) -> Rational {
        &self.min_weight[i] * Rational::from_integer(k.into())
    }

    fn inverse(&mut self, i: usize, bound: &Rational) -> Result<QSeries<F>, TorusError> {
        if let Some((b, inv)) = self.powers.get(&(i, -1)) {
            if b >= bound {
                return Ok(inv.clone());
            }
        }
        let inv = qt_invert(&self.images[i], &self.trunc.with_max(bound.clone()))?;
        self.powers.insert((i, -1), (bound.clone(), inv.clone()));
        Ok(inv)
    }

    /// `φ(z_i)^k`, exact on all monomials of weight at most `bound`.
    fn power(&mut self, i: usize, k: i64, bound: &Rational) -> Result<QSeries<F>, TorusError> {
        if let Some((b, p)) = self.powers.get(&(i, k)) {
            if b >= bound {
                return Ok(p.clone());
            }
        }
        let m = k.unsigned_abs() as i64;
        // Each factor has least weight `step`; the other m-1 factors bring
        // the bound for a single factor to `bound - (m-1) step`.
        let step = if k > 0 {
            self.min_weight[i].clone()
        } else {
            -self.min_weight[i].clone()
        };
        let base = if k > 0 {
            self.images[i].clone()
        } else {
            let b = bound - &step * Rational::from_integer((m - 1).into());
            self.inverse(i, &b)?
        };
        let mut acc = base.clone();
        for j in 1..m {
            let rest = &step * Rational::from_integer((m - 1 - j).into());
            acc = acc.mul_truncated(&base, &self.trunc.with_max(bound - rest));
        }
        self.powers.insert((i, k), (bound.clone(), acc.clone()));
        Ok(acc)
    }

    /// Image of `f`, exact on monomials allowed by the truncation.
    pub fn apply(&mut self, f: &QSeries<F>) -> Result<QSeries<F>, TorusError> {
        let tw = self.images.first().map(|g| g.twist().clone());
        let Some(tw) = tw else {
            return Ok(f.clone());
        };
        if f.twist().rank() != self.images.len() {
            return Err(TorusError::RankMismatch {
                expected: self.images.len(),
                got: f.twist().rank(),
            });
        }
        let max = self.trunc.max.clone();
        let mut out = QSeries::zero(&tw);
        for (e, c) in f.terms() {
            let factors: Vec<(usize, i64)> =
                e.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i, k)).collect();
            let weights: Vec<Rational> = factors.iter().map(|&(i, k)| self.factor_weight(i, k)).collect();
            let total: Rational = weights.iter().fold(Rational::zero(), |a, b| a + b);
            if total > max {
                continue;
            }
            let mut acc = QSeries::constant(&tw, c.clone());
            let mut done = Rational::zero();
            for (idx, &(i, k)) in factors.iter().enumerate() {
                let others = &total - &weights[idx];
                let p = self.power(i, k, &(&max - &others))?;
                done += &weights[idx];
                let remaining = &total - &done;
                acc = acc.mul_truncated(&p, &self.trunc.with_max(&max - remaining));
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

/// Substitutes `z_i ↦ images[i]` into `f` within `t`.
pub fn substitute_hom<F: NaField>(
    images: &[QSeries<F>],
    f: &QSeries<F>,
    t: &Truncation,
) -> Result<QSeries<F>, TorusError> {
    Substitution::new(images.to_vec(), t.clone())?.apply(f)
}
