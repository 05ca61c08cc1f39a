use std::collections::BTreeMap;
use std::sync::Arc;

use crate::nascalar::rational::format_rational;
use crate::nascalar::{LogNorm, NaField, PadicScalar, QuadExtScalar, SqrtContext, DEFAULT_HENSEL_PRECISION};

use super::pbw::{check_q, gl2_relations, GL2Element, WordSum, T};
use super::Gl2Error;

/// Square test in ℚ_p, `p` odd.
pub fn is_square_qp(x: &PadicScalar) -> Result<bool, Gl2Error> {
    x.is_square().map_err(|_| Gl2Error::Unsupported("square test in Q_2".into()))
}

/// The three admissibility conditions on a leaf `S_{c,t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafReport {
    pub c_bounded: bool,
    pub t_unit: bool,
    pub square: bool,
}

impl LeafReport {
    pub fn admissible(&self) -> bool {
        self.c_bounded && self.t_unit && self.square
    }

    pub fn reason(&self) -> Option<&'static str> {
        if !self.c_bounded {
            Some("c = 0 or |c| > 1")
        } else if !self.t_unit {
            Some("t is not a unit")
        } else if !self.square {
            Some("-c/q is not a square")
        } else {
            None
        }
    }
}

/// `0 < |c| ≤ 1`, `t ∈ ℤ_p^×`, `-cq^{-1}` a square.
pub fn leaf_constraints_check(q: &PadicScalar, c: &PadicScalar, t: &PadicScalar) -> Result<LeafReport, Gl2Error> {
    check_q(q)?;
    if c.prime() != q.prime() || t.prime() != q.prime() {
        return Err(Gl2Error::QMismatch);
    }
    let c_bounded = c.valuation().is_some_and(|v| v >= 0);
    let t_unit = t.is_unit();
    let square = c_bounded && is_square_qp(&c.mul(&q.inv()?).neg())?;
    Ok(LeafReport {
        c_bounded,
        t_unit,
        square,
    })
}

/// How `s(m) = a₁₁(m)a₂₂(m-1) = c(1 - q^{-2m})` is split between the factors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Split {
    /// `a₂₂(m) = 1`.
    #[default]
    UnitUpper,
    /// `a₁₁(m) = 1` for `m ≥ 1`.
    UnitLower,
}

/// The four forms of `s(m)`: the closed form `c(1 - q^{-2m})`, the
/// telescoped recursion from `s(1) = (q^{-1} - q)h₀`, `q(q^{-2m} - 1)h₀`,
/// and `c + q^{-2m+1}h₀`, with `h₀ = -cq^{-1}`.
pub fn s_forms(q: &PadicScalar, c: &PadicScalar, m: u32) -> Result<[PadicScalar; 4], Gl2Error> {
    if m == 0 {
        return Err(Gl2Error::InvalidInput("s(m) needs m ≥ 1".into()));
    }
    let one = q.one_like();
    let qi = q.inv()?;
    let h0 = c.mul(&qi).neg();
    let m = m as i64;
    let closed = c.mul(&one.sub(&q.pow(-2 * m)?));
    let mut rec = qi.sub(q).mul(&h0);
    for k in 1..m {
        rec = rec.add(&qi.sub(q).mul(&q.pow(-2 * k)?).mul(&h0));
    }
    let via_h0 = q.mul(&q.pow(-2 * m)?.sub(&one)).mul(&h0);
    let via_det = c.add(&q.pow(-2 * m + 1)?.mul(&h0));
    Ok([closed, rec, via_h0, via_det])
}

/// The representation `V_{c,t}` on `e₀, …, e_M`: `t₁₁e_m = a₁₁(m)e_{m-1}`,
/// `t₂₁e_m = a₂₁(m)e_m`, `t₁₂e_m = a₁₂(m)e_m`, `t₂₂e_m = a₂₂(m)e_{m+1}`.
#[derive(Clone, Debug)]
pub struct GL2Rep {
    q: PadicScalar,
    c: PadicScalar,
    t: PadicScalar,
    split: Split,
    window: usize,
    ctx: Arc<SqrtContext>,
    a11: Vec<QuadExtScalar>,
    a12: Vec<QuadExtScalar>,
    a21: Vec<QuadExtScalar>,
    a22: Vec<QuadExtScalar>,
}

/// `a₂₁(0) = √(-cq^{-1}) / t`, `a₁₂(0) = t²a₂₁(0)`.
pub fn build_rep(q: &PadicScalar, c: &PadicScalar, t: &PadicScalar, window: usize, split: Split) -> Result<GL2Rep, Gl2Error> {
    let leaf = leaf_constraints_check(q, c, t)?;
    if let Some(reason) = leaf.reason() {
        return Err(Gl2Error::Inadmissible {
            c: format_rational(c.value()),
            t: format_rational(t.value()),
            reason,
        });
    }
    let h0 = c.mul(&q.inv()?).neg();
    let ctx = SqrtContext::new(&h0, DEFAULT_HENSEL_PRECISION)?;
    let lift = |x: &PadicScalar| QuadExtScalar::rational(x.value().clone(), &ctx);
    let a21_0 = QuadExtScalar::sqrt_d(&ctx).scale(&t.value().recip());
    if a21_0.is_zero() {
        return Err(Gl2Error::ZeroA21);
    }
    let a12_0 = a21_0.scale(&(t.value() * t.value()));
    let one = q.one_like();
    let mut a11 = Vec::with_capacity(window + 1);
    let mut a12 = Vec::with_capacity(window + 1);
    let mut a21 = Vec::with_capacity(window + 1);
    let mut a22 = Vec::with_capacity(window + 1);
    for m in 0..=window as i64 {
        let qm = lift(&q.pow(-m)?);
        a21.push(a21_0.mul(&qm));
        a12.push(a12_0.mul(&qm));
        let s_m = c.mul(&one.sub(&q.pow(-2 * m)?));
        let s_next = c.mul(&one.sub(&q.pow(-2 * (m + 1))?));
        match split {
            Split::UnitUpper => {
                a11.push(lift(&s_m));
                a22.push(lift(&one));
            }
            Split::UnitLower => {
                a11.push(lift(if m == 0 { &s_m } else { &one }));
                a22.push(lift(&s_next));
            }
        }
    }
    Ok(GL2Rep {
        q: q.clone(),
        c: c.clone(),
        t: t.clone(),
        split,
        window,
        ctx,
        a11,
        a12,
        a21,
        a22,
    })
}

/// A finite matrix on `e₀, …, e_M`; columns above `reliable` may have lost
/// components beyond `e_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gl2Operator {
    pub window: usize,
    pub reliable: usize,
    pub columns: Vec<BTreeMap<usize, QuadExtScalar>>,
}

/// Log-norm over the reliable columns, and whether it was already attained
/// on the lower half of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Norm {
    pub value: LogNorm,
    pub stable: bool,
}

type Vector = BTreeMap<usize, QuadExtScalar>;

fn push(v: &mut Vector, i: usize, c: QuadExtScalar) {
    let s = match v.remove(&i) {
        Some(x) => x.add(&c),
        None => c,
    };
    if !s.is_zero() {
        v.insert(i, s);
    }
}

impl GL2Rep {
    pub fn q(&self) -> &PadicScalar {
        &self.q
    }

    pub fn c(&self) -> &PadicScalar {
        &self.c
    }

    pub fn t(&self) -> &PadicScalar {
        &self.t
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn context(&self) -> &Arc<SqrtContext> {
        &self.ctx
    }

    pub fn a11(&self, m: usize) -> &QuadExtScalar {
        &self.a11[m]
    }

    pub fn a12(&self, m: usize) -> &QuadExtScalar {
        &self.a12[m]
    }

    pub fn a21(&self, m: usize) -> &QuadExtScalar {
        &self.a21[m]
    }

    pub fn a22(&self, m: usize) -> &QuadExtScalar {
        &self.a22[m]
    }

    pub fn h0(&self) -> QuadExtScalar {
        self.a21[0].mul(&self.a12[0])
    }

    fn apply_gen(&self, g: T, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&m, x) in v {
            match g {
                T::T11 if m > 0 => push(&mut out, m - 1, x.mul(&self.a11[m])),
                T::T11 => {}
                T::T12 => push(&mut out, m, x.mul(&self.a12[m])),
                T::T21 => push(&mut out, m, x.mul(&self.a21[m])),
                T::T22 if m < self.window => push(&mut out, m + 1, x.mul(&self.a22[m])),
                T::T22 => {}
            }
        }
        out
    }

    /// Matrix of a word sum; words act rightmost letter first.
    pub fn apply_words(&self, words: &WordSum) -> Result<Gl2Operator, Gl2Error> {
        let raise = words
            .iter()
            .map(|(_, w)| w.iter().filter(|&&g| g == T::T22).count())
            .max()
            .unwrap_or(0);
        if raise > self.window {
            return Err(Gl2Error::Window {
                needed: raise,
                got: self.window,
            });
        }
        let columns = (0..=self.window)
            .map(|m| {
                let mut col = Vector::new();
                for (c, w) in words {
                    let mut v = Vector::from([(m, QuadExtScalar::rational(c.value().clone(), &self.ctx))]);
                    for &g in w.iter().rev() {
                        v = self.apply_gen(g, &v);
                    }
                    for (i, x) in v {
                        push(&mut col, i, x);
                    }
                }
                col
            })
            .collect();
        Ok(Gl2Operator {
            window: self.window,
            reliable: self.window - raise,
            columns,
        })
    }
}

pub fn rep_apply(rep: &GL2Rep, x: &GL2Element) -> Result<Gl2Operator, Gl2Error> {
    if x.q() != rep.q() {
        return Err(Gl2Error::QMismatch);
    }
    rep.apply_words(&x.words())
}

impl Gl2Operator {
    pub fn entry(&self, row: usize, col: usize) -> Option<&QuadExtScalar> {
        self.columns.get(col)?.get(&row)
    }

    pub fn is_zero_on_interior(&self) -> bool {
        self.columns[..=self.reliable].iter().all(BTreeMap::is_empty)
    }

    fn sup_over(&self, k: usize) -> Result<LogNorm, Gl2Error> {
        let mut best = LogNorm::NegInf;
        for col in &self.columns[..=k] {
            for x in col.values() {
                best = LogNorm::max_of([best, x.log_norm()?]);
            }
        }
        Ok(best)
    }

    /// Sup of `log|entry|` over the reliable columns, the basis being orthonormal.
    pub fn log_norm(&self) -> Result<Gl2Norm, Gl2Error> {
        let value = self.sup_over(self.reliable)?;
        let stable = self.sup_over(self.reliable / 2)? == value;
        Ok(Gl2Norm { value, stable })
    }
}

/// Residual of each relation and of `det_q - c` on the window interior.
#[derive(Clone, Debug)]
pub struct RepRelationReport {
    pub residuals: Vec<(&'static str, Gl2Operator)>,
}

impl RepRelationReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero_on_interior())
    }
}

fn det_minus(q: &PadicScalar, c: &PadicScalar) -> Result<WordSum, Gl2Error> {
    let one = q.one_like();
    Ok(vec![
        (one.clone(), vec![T::T11, T::T22]),
        (q.inv()?.neg(), vec![T::T12, T::T21]),
        (c.neg(), vec![]),
    ])
}

pub fn rep_relations_check(rep: &GL2Rep) -> Result<RepRelationReport, Gl2Error> {
    let mut residuals = Vec::with_capacity(7);
    for (name, r) in gl2_relations(rep.q())? {
        residuals.push((name, rep.apply_words(&r)?));
    }
    residuals.push(("det_q = c", rep.apply_words(&det_minus(rep.q(), rep.c())?)?));
    Ok(RepRelationReport { residuals })
}

/// `W_{c,t}`: `t₁₁ = t`, `t₂₂ = ct^{-1}`, `t₁₂ = t₂₁ = 0` on a line.
pub fn one_dim_relations_check(q: &PadicScalar, c: &PadicScalar, t: &PadicScalar) -> Result<bool, Gl2Error> {
    check_q(q)?;
    let action = |g: T| -> Result<PadicScalar, Gl2Error> {
        Ok(match g {
            T::T11 => t.clone(),
            T::T22 => c.mul(&t.inv()?),
            T::T12 | T::T21 => q.zero_like(),
        })
    };
    let eval = |words: &WordSum| -> Result<PadicScalar, Gl2Error> {
        let mut s = q.zero_like();
        for (k, w) in words {
            let mut x = k.clone();
            for &g in w {
                x = x.mul(&action(g)?);
            }
            s = s.add(&x);
        }
        Ok(s)
    };
    for (_, r) in gl2_relations(q)? {
        if !eval(&r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(eval(&det_minus(q, c)?)?.is_zero())
}

/// One leaf of the sup-norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleNorm {
    pub c: PadicScalar,
    pub t: PadicScalar,
    pub norm: Gl2Norm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2NormReport {
    pub log_norm: LogNorm,
    pub per_sample: Vec<SampleNorm>,
    pub stable: bool,
}

/// Max over the samples of the operator log-norm of `π_{c,t}(f)`.
pub fn gl2_sup_norm(
    f: &GL2Element,
    samples: &[(PadicScalar, PadicScalar)],
    window: usize,
    split: Split,
) -> Result<Gl2NormReport, Gl2Error> {
    let mut per_sample = Vec::with_capacity(samples.len());
    for (c, t) in samples {
        let rep = build_rep(f.q(), c, t, window, split)?;
        per_sample.push(SampleNorm {
            c: c.clone(),
            t: t.clone(),
            norm: rep_apply(&rep, f)?.log_norm()?,
        });
    }
    Ok(Gl2NormReport {
        log_norm: LogNorm::max_of(per_sample.iter().map(|s| s.norm.value.clone())),
        stable: per_sample.iter().all(|s| s.norm.stable),
        per_sample,
    })
}

/// Three values of `c` (two unit classes and one of valuation 2) times
/// `t ∈ {1, 2, -1}`, all admissible.
pub fn default_samples(q: &PadicScalar) -> Result<Vec<(PadicScalar, PadicScalar)>, Gl2Error> {
    check_q(q)?;
    let p = q.prime();
    let t1 = PadicScalar::from_int(1, p)?;
    let admissible = |c: &PadicScalar| -> Result<bool, Gl2Error> { Ok(leaf_constraints_check(q, c, &t1)?.admissible()) };
    let mut units = Vec::new();
    for r in 1..p as i64 {
        let c = PadicScalar::from_int(r, p)?;
        if admissible(&c)? {
            units.push(c);
        }
    }
    let pp = PadicScalar::from_int((p * p) as i64, p)?;
    let mut cs: Vec<PadicScalar> = units.iter().take(2).cloned().collect();
    cs.push(units[0].mul(&pp));
    let ts = [1, 2, -1].map(|t| PadicScalar::from_int(t, p));
    let mut out = Vec::with_capacity(9);
    for c in &cs {
        for t in &ts {
            out.push((c.clone(), t.clone()?));
        }
    }
    Ok(out)
}
