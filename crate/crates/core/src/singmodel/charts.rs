use std::sync::Arc;

use num_traits::Signed;

use crate::nascalar::rational::{int, ratio};
use crate::nascalar::{NaField, Rational};
use crate::qtorus::{substitute_hom, QSeries, Truncation, TwistData};

use super::algebra::{AqsExpr, Gen};
use super::SingError;

/// The cover `U₁ = {x < ε|y|}`, `U₂ = {x > 0, y < εx}`, `U₃ = {x > 0, y > 0}`
/// of the punctured plane, and `U₂' = {x > 0, y < εx/(1+ε)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartAtlas {
    eps: Rational,
}

/// One of the three charts; the projection `π₂` is defined on `U₂'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    U1,
    U2,
    U3,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::U1, Chart::U2, Chart::U3];

    pub fn from_index(i: usize) -> Result<Self, SingError> {
        match i {
            1 => Ok(Chart::U1),
            2 => Ok(Chart::U2),
            3 => Ok(Chart::U3),
            _ => Err(SingError::InvalidChart(i)),
        }
    }
}

impl Default for ChartAtlas {
    fn default() -> Self {
        ChartAtlas { eps: ratio(1, 2) }
    }
}

impl ChartAtlas {
    pub fn new(eps: Rational) -> Result<Self, SingError> {
        if !eps.is_positive() || eps >= int(1) {
            return Err(SingError::InvalidInput(format!("ε = {eps} is not in (0, 1)")));
        }
        Ok(ChartAtlas { eps })
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn contains(&self, chart: Chart, p: &[Rational; 2]) -> bool {
        let [x, y] = p;
        match chart {
            Chart::U1 => *x < &self.eps * y.abs(),
            Chart::U2 => x.is_positive() && *y < &self.eps * x,
            Chart::U3 => x.is_positive() && y.is_positive(),
        }
    }

    pub fn contains_u2_prime(&self, p: &[Rational; 2]) -> bool {
        let [x, y] = p;
        x.is_positive() && *y < &self.eps / (int(1) + &self.eps) * x
    }

    /// Domain of `π_i` in log coordinates: `U₁`, `U₂'`, `U₃`.
    pub fn in_domain(&self, chart: Chart, p: &[Rational; 2]) -> bool {
        match chart {
            Chart::U2 => self.contains_u2_prime(p),
            c => self.contains(c, p),
        }
    }

    pub fn charts_at(&self, p: &[Rational; 2]) -> Vec<Chart> {
        Chart::ALL.into_iter().filter(|&c| self.contains(c, p)).collect()
    }
}

/// `π_i` on `(log|ξ_i|, log|η_i|)`.
pub fn chart_project(chart: Chart, logs: &[Rational; 2]) -> [Rational; 2] {
    let [x, y] = logs;
    match chart {
        Chart::U2 if !y.is_negative() => [x - y, y.clone()],
        _ => [x.clone(), y.clone()],
    }
}

/// `ξ_i, η_i` with `ξη = qηξ`.
pub fn chart_torus<F: NaField>(q: F) -> Result<Arc<TwistData<F>>, SingError> {
    Ok(TwistData::plane(q)?)
}

const XI: [i64; 2] = [1, 0];
const ETA: [i64; 2] = [0, 1];

fn mono<F: NaField>(tw: &Arc<TwistData<F>>, e: [i64; 2]) -> QSeries<F> {
    QSeries::unit_monomial(tw, &e)
}

/// Image of a generator under `g_i`; `β^{-1}` has none on `U₁`.
pub fn chart_generator<F: NaField>(tw: &Arc<TwistData<F>>, chart: Chart, g: Gen) -> Result<QSeries<F>, SingError> {
    let one_eta = QSeries::one(tw).add(&mono(tw, ETA));
    let xi_eta = mono(tw, XI).mul(&mono(tw, ETA));
    let xi_eta_inv = mono(tw, [0, -1]).mul(&mono(tw, [-1, 0]));
    Ok(match (chart, g) {
        (_, Gen::Gamma) => mono(tw, [0, -1]),
        (_, Gen::GammaInv) => mono(tw, ETA),
        (Chart::U1, Gen::Alpha) => mono(tw, [-1, 0]),
        (Chart::U1, Gen::Beta) => mono(tw, XI).mul(&one_eta),
        (Chart::U1, Gen::BetaInv) => {
            return Err(SingError::NotInvertible("β = ξ(1+η) has no Laurent-polynomial inverse on U₁".into()))
        }
        (Chart::U2, Gen::Alpha) => one_eta.mul(&mono(tw, [-1, 0])),
        (Chart::U2, Gen::Beta) => mono(tw, XI),
        (Chart::U2, Gen::BetaInv) => mono(tw, [-1, 0]),
        (Chart::U3, Gen::Alpha) => one_eta.mul(&xi_eta_inv),
        (Chart::U3, Gen::Beta) => xi_eta,
        (Chart::U3, Gen::BetaInv) => xi_eta_inv,
    })
}

/// `g_i(x)`.
pub fn gi_chart_hom<F: NaField>(tw: &Arc<TwistData<F>>, chart: Chart, x: &AqsExpr<F>) -> Result<QSeries<F>, SingError> {
    let mut out = QSeries::zero(tw);
    for (c, w) in x.terms() {
        let mut s = QSeries::one(tw);
        for &g in w {
            s = s.mul(&chart_generator(tw, chart, g)?);
        }
        out = out.add(&s.scale(c));
    }
    Ok(out)
}

/// One comparison of [`gluing_compat_check`].
#[derive(Clone, Debug)]
pub struct GluingCase<F: NaField> {
    pub overlap: &'static str,
    pub generator: Gen,
    pub lhs: QSeries<F>,
    pub rhs: QSeries<F>,
}

impl<F: NaField> GluingCase<F> {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct GluingReport<F: NaField> {
    pub cases: Vec<GluingCase<F>>,
}

impl<F: NaField> GluingReport<F> {
    pub fn pass(&self) -> bool {
        self.cases.iter().all(GluingCase::agrees)
    }
}

/// Compares `g₃` with `g₂` under `(ξ₂, η₂) = (ξ₃η₃, η₃)`, and `g₁` with
/// `g₂`, `g₃` under `(ξ(1+η), η)`, `(ξ(1+η^{-1}), η)`, for `α, β, γ`,
/// modulo `η`-degree (resp. `η^{-1}`-degree) above `order`.
pub fn gluing_compat_check<F: NaField>(q: &F, order: i64) -> Result<GluingReport<F>, SingError> {
    let tw = chart_torus(q.clone())?;
    let eta_up = Truncation::graded(&[0, 1], order);
    let eta_down = Truncation::graded(&[0, -1], order);
    let far = Truncation::graded(&[0, 0], 0);
    let xi = mono(&tw, XI);
    let eta = mono(&tw, ETA);
    let one = QSeries::one(&tw);
    let glue23 = [xi.mul(&eta), eta.clone()];
    let phi12 = [xi.mul(&one.add(&eta)), eta.clone()];
    let phi13 = [xi.mul(&one.add(&mono(&tw, [0, -1]))), eta.clone()];
    let mut cases = Vec::new();
    for g in [Gen::Alpha, Gen::Beta, Gen::Gamma] {
        let word = AqsExpr::word(q, &[g]);
        let g1 = gi_chart_hom(&tw, Chart::U1, &word)?;
        let g2 = gi_chart_hom(&tw, Chart::U2, &word)?;
        let g3 = gi_chart_hom(&tw, Chart::U3, &word)?;
        let cmp = [
            ("U2∩U3", substitute_hom(&glue23, &g2, &far)?, g3.clone(), None),
            ("U1∩U2", substitute_hom(&phi12, &g2, &eta_up)?, g1.clone(), Some(&eta_up)),
            ("U1∩U3", substitute_hom(&phi13, &g3, &eta_down)?, g1.clone(), Some(&eta_down)),
        ];
        for (overlap, lhs, rhs, t) in cmp {
            let rhs = match t {
                Some(t) => rhs.truncate(t),
                None => rhs,
            };
            cases.push(GluingCase {
                overlap,
                generator: g,
                lhs,
                rhs,
            });
        }
    }
    Ok(GluingReport { cases })
}
