use std::sync::Arc;

use crate::nascalar::{LogNorm, NaField, Rational};
use crate::qtorus::{gauss_norm, PolyRadius, QSeries, TwistData};

use super::SingError;

/// Generators of `A_q(S)` and the invertible ones of its torus model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Alpha,
    Beta,
    Gamma,
    BetaInv,
    GammaInv,
}

impl Gen {
    pub const ALL: [Gen; 5] = [Gen::Alpha, Gen::Beta, Gen::Gamma, Gen::BetaInv, Gen::GammaInv];

    pub fn symbol(self) -> &'static str {
        match self {
            Gen::Alpha => "α",
            Gen::Beta => "β",
            Gen::Gamma => "γ",
            Gen::BetaInv => "β⁻¹",
            Gen::GammaInv => "γ⁻¹",
        }
    }
}

/// A linear combination of words in the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AqsExpr<F: NaField> {
    terms: Vec<(F, Vec<Gen>)>,
}

impl<F: NaField> AqsExpr<F> {
    pub fn zero() -> Self {
        AqsExpr { terms: Vec::new() }
    }

    pub fn word(one: &F, w: &[Gen]) -> Self {
        AqsExpr {
            terms: vec![(one.one_like(), w.to_vec())],
        }
    }

    pub fn constant(c: F) -> Self {
        AqsExpr {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn terms(&self) -> &[(F, Vec<Gen>)] {
        &self.terms
    }

    pub fn plus(mut self, c: F, w: &[Gen]) -> Self {
        self.terms.push((c, w.to_vec()));
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        AqsExpr { terms }
    }

    pub fn scale(&self, s: &F) -> Self {
        AqsExpr {
            terms: self.terms.iter().map(|(c, w)| (c.mul(s), w.clone())).collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, u) in &self.terms {
            for (b, v) in &o.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                terms.push((a.mul(b), w));
            }
        }
        AqsExpr { terms }
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

/// The four defining relations as expressions that must vanish, in order
/// `αγ - qγα`, `qβγ - γβ`, `βα - qαβ - (1 - q)`, `(αβ - 1)γ - 1`.
pub fn aqs_relations<F: NaField>(q: &F) -> [(&'static str, AqsExpr<F>); 4] {
    use Gen::*;
    let one = q.one_like();
    [
        ("αγ = qγα", AqsExpr::word(q, &[Alpha, Gamma]).plus(q.neg(), &[Gamma, Alpha])),
        ("qβγ = γβ", AqsExpr::constant(q.clone()).mul(&AqsExpr::word(q, &[Beta, Gamma])).plus(one.neg(), &[Gamma, Beta])),
        (
            "βα - qαβ = 1 - q",
            AqsExpr::word(q, &[Beta, Alpha]).plus(q.neg(), &[Alpha, Beta]).plus(q.sub(&one), &[]),
        ),
        (
            "(αβ - 1)γ = 1",
            AqsExpr::word(q, &[Alpha, Beta, Gamma]).plus(one.neg(), &[Gamma]).plus(one.neg(), &[]),
        ),
    ]
}

/// `β, γ` torus with `γβ = qβγ`; exponent `(n, m)` is `β^n γ^m`.
pub fn aqs_torus<F: NaField>(q: F) -> Result<Arc<TwistData<F>>, SingError> {
    Ok(TwistData::new(2, &[(1, 0, 1)], q)?)
}

/// An element of the image of `A_q(S)` in the `β, γ` quantum torus.
#[derive(Clone, Debug, PartialEq)]
pub struct AqsElement<F: NaField> {
    series: QSeries<F>,
}

fn generator_image<F: NaField>(tw: &Arc<TwistData<F>>, g: Gen) -> QSeries<F> {
    match g {
        Gen::Alpha => {
            // (1 + γ^{-1}) β^{-1} = β^{-1} + q β^{-1} γ^{-1}
            QSeries::unit_monomial(tw, &[-1, 0]).add(&QSeries::monomial(tw, vec![-1, -1], tw.q().clone()))
        }
        Gen::Beta => QSeries::unit_monomial(tw, &[1, 0]),
        Gen::Gamma => QSeries::unit_monomial(tw, &[0, 1]),
        Gen::BetaInv => QSeries::unit_monomial(tw, &[-1, 0]),
        Gen::GammaInv => QSeries::unit_monomial(tw, &[0, -1]),
    }
}

/// Normal-ordered image of a word under `α ↦ (1 + γ^{-1})β^{-1}`.
pub fn aqs_embed_word<F: NaField>(tw: &Arc<TwistData<F>>, word: &[Gen]) -> AqsElement<F> {
    let mut s = QSeries::one(tw);
    for &g in word {
        s = s.mul(&generator_image(tw, g));
    }
    AqsElement { series: s }
}

pub fn aqs_embed<F: NaField>(tw: &Arc<TwistData<F>>, x: &AqsExpr<F>) -> AqsElement<F> {
    let mut s = QSeries::zero(tw);
    for (c, w) in x.terms() {
        s = s.add(&aqs_embed_word(tw, w).series.scale(c));
    }
    AqsElement { series: s }
}

impl<F: NaField> AqsElement<F> {
    pub fn series(&self) -> &QSeries<F> {
        &self.series
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        AqsElement {
            series: self.series.add(&o.series),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AqsElement {
            series: self.series.sub(&o.series),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        AqsElement {
            series: self.series.mul(&o.series),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        AqsElement {
            series: self.series.scale(c),
        }
    }

    /// Gauss seminorm with `(log|β|, log|γ|) = (u, v)`.
    pub fn gauss_log_norm(&self, u: &Rational, v: &Rational) -> LogNorm {
        gauss_norm(&self.series, &PolyRadius::new(vec![u.clone(), v.clone()])).expect("rank 2")
    }
}

/// Residual of each defining relation under the embedding.
#[derive(Clone, Debug)]
pub struct RelationReport<F: NaField> {
    pub residuals: Vec<(&'static str, QSeries<F>)>,
}

impl<F: NaField> RelationReport<F> {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

pub fn aqs_relations_check<F: NaField>(q: &F) -> Result<RelationReport<F>, SingError> {
    let tw = aqs_torus(q.clone())?;
    let residuals = aqs_relations(q)
        .into_iter()
        .map(|(name, r)| (name, aqs_embed(&tw, &r).series))
        .collect();
    Ok(RelationReport { residuals })
}

/// The algebra `B` on `β^{±1}, γ^{±1}, δ`: `γβ = qβγ`, `δ` central.
#[derive(Clone, Debug)]
pub struct BAlgebra<F: NaField> {
    twist: Arc<TwistData<F>>,
    delta_inverted: bool,
}

/// `Σ c_{nml} β^n γ^m δ^l`.
#[derive(Clone, Debug, PartialEq)]
pub struct BElement<F: NaField> {
    series: QSeries<F>,
}

impl<F: NaField> BAlgebra<F> {
    pub fn new(q: F, delta_inverted: bool) -> Result<Self, SingError> {
        Ok(BAlgebra {
            twist: TwistData::new(3, &[(1, 0, 1)], q)?,
            delta_inverted,
        })
    }

    pub fn twist(&self) -> &Arc<TwistData<F>> {
        &self.twist
    }

    pub fn delta_inverted(&self) -> bool {
        self.delta_inverted
    }

    pub fn element<I>(&self, terms: I) -> Result<BElement<F>, SingError>
    where
        I: IntoIterator<Item = ((i64, i64, i64), F)>,
    {
        let mut v = Vec::new();
        for ((n, m, l), c) in terms {
            if l < 0 && !self.delta_inverted {
                return Err(SingError::InvalidInput(format!("δ^{l} needs the δ-inverted algebra")));
            }
            v.push((vec![n, m, l], c));
        }
        Ok(BElement {
            series: QSeries::from_terms(&self.twist, v)?,
        })
    }

    pub fn mul(&self, x: &BElement<F>, y: &BElement<F>) -> BElement<F> {
        BElement {
            series: x.series.mul(&y.series),
        }
    }

    /// Image of a word under `α ↦ (1 + δγ^{-1})β^{-1}`.
    pub fn embed_word(&self, word: &[Gen]) -> BElement<F> {
        let tw = &self.twist;
        let mut s = QSeries::one(tw);
        for &g in word {
            let img = match g {
                Gen::Alpha => QSeries::unit_monomial(tw, &[-1, 0, 0])
                    .add(&QSeries::monomial(tw, vec![-1, -1, 1], tw.q().clone())),
                Gen::Beta => QSeries::unit_monomial(tw, &[1, 0, 0]),
                Gen::Gamma => QSeries::unit_monomial(tw, &[0, 1, 0]),
                Gen::BetaInv => QSeries::unit_monomial(tw, &[-1, 0, 0]),
                Gen::GammaInv => QSeries::unit_monomial(tw, &[0, -1, 0]),
            };
            s = s.mul(&img);
        }
        BElement { series: s }
    }

    /// Reduction modulo `δ - 1`.
    pub fn at_delta_one(&self, x: &BElement<F>) -> Result<QSeries<F>, SingError> {
        let tw = aqs_torus(self.twist.q().clone())?;
        let terms = x.series.terms().iter().map(|(e, c)| (vec![e[0], e[1]], c.clone()));
        Ok(QSeries::from_terms(&tw, terms)?)
    }
}

impl<F: NaField> BElement<F> {
    pub fn series(&self) -> &QSeries<F> {
        &self.series
    }
}

/// `max |c_{nml}| r₁^n r₂^m r₃^l` in log form.
pub fn b_gauss_norm<F: NaField>(x: &BElement<F>, r1: &Rational, r2: &Rational, r3: &Rational) -> LogNorm {
    gauss_norm(&x.series, &PolyRadius::new(vec![r1.clone(), r2.clone(), r3.clone()])).expect("rank 3")
}
