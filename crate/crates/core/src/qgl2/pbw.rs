use std::collections::BTreeMap;
use std::fmt;

use crate::nascalar::{NaField, PadicScalar};

use super::Gl2Error;

/// The generators `t₁₁ < t₁₂ < t₂₁ < t₂₂` in PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum T {
    T11,
    T12,
    T21,
    T22,
}

impl T {
    pub const ALL: [T; 4] = [T::T11, T::T12, T::T21, T::T22];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            T::T11 => "t11",
            T::T12 => "t12",
            T::T21 => "t21",
            T::T22 => "t22",
        }
    }
}

/// Which out-of-order adjacent pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Exponents `(a, b, c, d)` of `t₁₁^a t₁₂^b t₂₁^c t₂₂^d`.
pub type Pbw = [u32; 4];

/// An element of the quantum coordinate algebra of `GL₂` in PBW normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct GL2Element {
    q: PadicScalar,
    terms: BTreeMap<Pbw, PadicScalar>,
}

/// A linear combination of raw words; the input syntax for relations.
pub type WordSum = Vec<(PadicScalar, Vec<T>)>;

pub fn check_q(q: &PadicScalar) -> Result<(), Gl2Error> {
    if q.prime() == 2 {
        return Err(Gl2Error::Unsupported("p = 2".into()));
    }
    let one = q.one_like();
    match q.sub(&one).valuation() {
        None => Err(Gl2Error::InvalidQ("q = 1".into())),
        Some(v) if v < 1 => Err(Gl2Error::InvalidQ(format!("|1 - q| = p^{} is not < 1", -v))),
        _ => Ok(()),
    }
}

/// `yx` for `x < y` in the PBW order, as a combination of sorted words.
fn swap(q: &PadicScalar, x: T, y: T) -> Vec<(PadicScalar, Vec<T>)> {
    use T::*;
    let one = q.one_like();
    match (x, y) {
        (T11, T12) | (T11, T21) | (T12, T22) | (T21, T22) => vec![(q.clone(), vec![x, y])],
        (T12, T21) => vec![(one, vec![T12, T21])],
        (T11, T22) => {
            let k = q.inv().expect("q ≠ 0").sub(q);
            vec![(one, vec![T11, T22]), (k.neg(), vec![T12, T21])]
        }
        _ => unreachable!("pair is not out of order"),
    }
}

fn accumulate(map: &mut BTreeMap<Vec<T>, PadicScalar>, w: Vec<T>, c: PadicScalar) {
    let s = match map.remove(&w) {
        Some(x) => x.add(&c),
        None => c,
    };
    if !s.is_zero() {
        map.insert(w, s);
    }
}

fn descent(w: &[T], s: Strategy) -> Option<usize> {
    let mut it = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]);
    match s {
        Strategy::Leftmost => it.next(),
        Strategy::Rightmost => it.next_back(),
    }
}

fn pbw_of(w: &[T]) -> Pbw {
    let mut e = [0; 4];
    for g in w {
        e[g.index()] += 1;
    }
    e
}

fn word_of(e: &Pbw) -> Vec<T> {
    T::ALL.iter().flat_map(|&g| std::iter::repeat_n(g, e[g.index()] as usize)).collect()
}

/// Reduces a word sum to normal form by rewriting single out-of-order pairs.
pub fn normal_form_with(q: &PadicScalar, words: &WordSum, strategy: Strategy) -> Result<GL2Element, Gl2Error> {
    check_q(q)?;
    let mut pending: BTreeMap<Vec<T>, PadicScalar> = BTreeMap::new();
    for (c, w) in words {
        if c.prime() != q.prime() {
            return Err(Gl2Error::QMismatch);
        }
        accumulate(&mut pending, w.clone(), c.clone());
    }
    let mut terms = BTreeMap::new();
    while let Some((w, c)) = pending.pop_last() {
        match descent(&w, strategy) {
            None => {
                let e = pbw_of(&w);
                let s = match terms.remove(&e) {
                    Some(x) => c.add(&x),
                    None => c,
                };
                if !s.is_zero() {
                    terms.insert(e, s);
                }
            }
            Some(i) => {
                for (k, mid) in swap(q, w[i + 1], w[i]) {
                    let mut v = w[..i].to_vec();
                    v.extend(mid);
                    v.extend_from_slice(&w[i + 2..]);
                    accumulate(&mut pending, v, c.mul(&k));
                }
            }
        }
    }
    Ok(GL2Element { q: q.clone(), terms })
}

pub fn gl2_normal_form(q: &PadicScalar, word: &[T]) -> Result<GL2Element, Gl2Error> {
    normal_form_with(q, &vec![(q.one_like(), word.to_vec())], Strategy::Leftmost)
}

pub fn gl2_mul(x: &GL2Element, y: &GL2Element) -> Result<GL2Element, Gl2Error> {
    if x.q != y.q {
        return Err(Gl2Error::QMismatch);
    }
    let mut words = Vec::with_capacity(x.terms.len() * y.terms.len());
    for (ex, cx) in &x.terms {
        for (ey, cy) in &y.terms {
            let mut w = word_of(ex);
            w.extend(word_of(ey));
            words.push((cx.mul(cy), w));
        }
    }
    normal_form_with(&x.q, &words, Strategy::Leftmost)
}

/// `det_q = t₁₁t₂₂ - q^{-1} t₁₂t₂₁`.
pub fn det_q(q: &PadicScalar) -> Result<GL2Element, Gl2Error> {
    check_q(q)?;
    GL2Element::from_terms(q, [([1, 0, 0, 1], q.one_like()), ([0, 1, 1, 0], q.inv()?.neg())])
}

/// The six defining relations as word sums that vanish in the algebra.
pub fn gl2_relations(q: &PadicScalar) -> Result<[(&'static str, WordSum); 6], Gl2Error> {
    use T::*;
    let one = q.one_like();
    let qi = q.inv()?;
    let rel = |x: T, y: T| vec![(one.clone(), vec![x, y]), (qi.neg(), vec![y, x])];
    Ok([
        ("t11 t12 = q^-1 t12 t11", rel(T11, T12)),
        ("t11 t21 = q^-1 t21 t11", rel(T11, T21)),
        ("t12 t22 = q^-1 t22 t12", rel(T12, T22)),
        ("t21 t22 = q^-1 t22 t21", rel(T21, T22)),
        ("t12 t21 = t21 t12", vec![(one.clone(), vec![T12, T21]), (one.neg(), vec![T21, T12])]),
        (
            "t11 t22 - t22 t11 = (q^-1 - q) t12 t21",
            vec![
                (one.clone(), vec![T11, T22]),
                (one.neg(), vec![T22, T11]),
                (qi.sub(q).neg(), vec![T12, T21]),
            ],
        ),
    ])
}

impl GL2Element {
    pub fn from_terms<I>(q: &PadicScalar, terms: I) -> Result<Self, Gl2Error>
    where
        I: IntoIterator<Item = (Pbw, PadicScalar)>,
    {
        check_q(q)?;
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.prime() != q.prime() {
                return Err(Gl2Error::QMismatch);
            }
            let s = match map.remove(&e) {
                Some(x) => c.add(&x),
                None => c,
            };
            if !s.is_zero() {
                map.insert(e, s);
            }
        }
        Ok(GL2Element { q: q.clone(), terms: map })
    }

    pub fn one(q: &PadicScalar) -> Result<Self, Gl2Error> {
        Self::from_terms(q, [([0; 4], q.one_like())])
    }

    pub fn generator(q: &PadicScalar, g: T) -> Result<Self, Gl2Error> {
        let mut e = [0; 4];
        e[g.index()] = 1;
        Self::from_terms(q, [(e, q.one_like())])
    }

    pub fn q(&self) -> &PadicScalar {
        &self.q
    }

    pub fn terms(&self) -> &BTreeMap<Pbw, PadicScalar> {
        &self.terms
    }

    pub fn coeff(&self, e: &Pbw) -> PadicScalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.q.zero_like())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self, Gl2Error> {
        if self.q != o.q {
            return Err(Gl2Error::QMismatch);
        }
        Self::from_terms(&self.q, self.terms.iter().chain(&o.terms).map(|(e, c)| (*e, c.clone())))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Gl2Error> {
        self.add(&o.scale(&self.q.one_like().neg()))
    }

    pub fn scale(&self, s: &PadicScalar) -> Self {
        GL2Element {
            q: self.q.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Largest `t₂₂`-exponent: how far up the basis a term can reach.
    pub fn max_raise(&self) -> u32 {
        self.terms.keys().map(|e| e[3]).max().unwrap_or(0)
    }

    pub fn words(&self) -> WordSum {
        self.terms.iter().map(|(e, c)| (c.clone(), word_of(e))).collect()
    }
}

impl fmt::Display for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", crate::nascalar::rational::format_rational(c.value()))?;
            for g in T::ALL {
                match e[g.index()] {
                    0 => {}
                    1 => write!(f, "·{}", g.name())?,
                    k => write!(f, "·{}^{k}", g.name())?,
                }
            }
        }
        Ok(())
    }
}
