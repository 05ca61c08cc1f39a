use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::nascalar::rational::{format_rational, int, parse_rational, ratio};
use crate::nascalar::{LogNorm, NaField, Rational};

use super::algebra::{aqs_embed, aqs_torus, AqsExpr, Gen};
use super::shift::{operator_log_norm, shift_representation, ShiftParams};
use super::SingError;

/// Rows of the image table of `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "S-")]
    Minus,
    #[serde(rename = "S0")]
    Zero,
    #[serde(rename = "S+")]
    Plus,
}

fn pos_part(x: &LogNorm) -> Rational {
    match x.finite() {
        Some(r) if r.is_positive() => r.clone(),
        _ => Rational::zero(),
    }
}

/// `(max(0, log|α|), max(0, log|β|), -log|αβ - 1|)`.
pub fn f_map(log_alpha: &LogNorm, log_ab1: &LogNorm, log_beta: &LogNorm) -> Result<[Rational; 3], SingError> {
    let c = log_ab1
        .finite()
        .ok_or_else(|| SingError::InvalidInput("|αβ - 1| = 0 at a seminorm where γ is invertible".into()))?;
    Ok([pos_part(log_alpha), pos_part(log_beta), -c])
}

pub fn classify(p: &[Rational; 3]) -> Option<Stratum> {
    let [a, b, c] = p;
    if a.is_negative() || b.is_negative() {
        return None;
    }
    let ab_zero = a.is_zero() || b.is_zero();
    if c.is_negative() {
        (ab_zero || (a + b + c).is_zero()).then_some(Stratum::Minus)
    } else if c.is_zero() {
        ab_zero.then_some(Stratum::Zero)
    } else {
        ab_zero.then_some(Stratum::Plus)
    }
}

pub fn j_embed(x: &Rational, y: &Rational) -> [Rational; 3] {
    let zero = Rational::zero();
    if !x.is_positive() {
        [-x, (x + y).max(zero), -y]
    } else {
        [zero.clone(), x + y.clone().max(zero), -y]
    }
}

pub fn j_preimage(p: &[Rational; 3]) -> Option<[Rational; 2]> {
    let [a, b, c] = p;
    let y = -c;
    let x = if a.is_positive() {
        -a
    } else if a.is_zero() {
        b - y.clone().max(Rational::zero())
    } else {
        return None;
    };
    if a.is_zero() && x.is_negative() {
        return None;
    }
    (j_embed(&x, &y) == *p).then_some([x, y])
}

fn generators<F: NaField>(q: &F) -> [AqsExpr<F>; 3] {
    let one = q.one_like();
    [
        AqsExpr::word(q, &[Gen::Alpha]),
        AqsExpr::word(q, &[Gen::Alpha, Gen::Beta]).plus(one.neg(), &[]),
        AqsExpr::word(q, &[Gen::Beta]),
    ]
}

/// `f` at the Gauss seminorm `(log|β|, log|γ|) = (u, v)` of the embedding.
pub fn gauss_point<F: NaField>(q: &F, u: &Rational, v: &Rational) -> Result<[Rational; 3], SingError> {
    let tw = aqs_torus(q.clone())?;
    let [a, ab1, b] = generators(q).map(|x| aqs_embed(&tw, &x).gauss_log_norm(u, v));
    f_map(&a, &ab1, &b)
}

/// `f` at the operator seminorm on `V_r`; the flag is the joint stability.
pub fn shift_point<F: NaField>(
    params: &ShiftParams<F>,
    rho: &Rational,
    window: i64,
) -> Result<([Rational; 3], bool), SingError> {
    let mut norms = Vec::with_capacity(3);
    let mut stable = true;
    for x in generators(&params.q) {
        let n = operator_log_norm(&shift_representation(&x, rho, params, window)?);
        stable &= n.stable;
        norms.push(n.value);
    }
    Ok((f_map(&norms[0], &norms[1], &norms[2])?, stable))
}

/// One axis of the grid: `steps` equally spaced points from `min` to `max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: String,
    pub max: String,
    pub steps: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub rhos: Vec<String>,
    #[serde(default = "default_window")]
    pub window: i64,
}

fn default_window() -> i64 {
    32
}

/// `{"u": axis, "v": axis, "random"?: n, "shift"?: {"rhos": [..], "window"?: M}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub u: AxisSpec,
    pub v: AxisSpec,
    #[serde(default)]
    pub random: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub u: String,
    pub v: String,
    pub f: [String; 3],
    pub stratum: Option<Stratum>,
    pub in_image: bool,
    pub preimage: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub rho: String,
    pub f: [String; 3],
    pub stable: bool,
    pub stratum: Option<Stratum>,
    pub in_image: bool,
    pub preimage: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub rows: Vec<SpectrumRow>,
    #[serde(default)]
    pub shift_rows: Vec<ShiftRow>,
    pub failures: usize,
}

impl AxisSpec {
    pub fn points(&self) -> Result<Vec<Rational>, SingError> {
        let lo = parse_rational(&self.min)?;
        let hi = parse_rational(&self.max)?;
        if hi < lo || self.steps == 0 {
            return Err(SingError::InvalidInput(format!("empty axis [{}, {}] × {}", self.min, self.max, self.steps)));
        }
        if self.steps == 1 {
            return Ok(vec![lo]);
        }
        let h = (&hi - &lo) / int(self.steps as i64 - 1);
        Ok((0..self.steps).map(|k| &lo + &h * int(k as i64)).collect())
    }

    fn bounds(&self) -> Result<(Rational, Rational), SingError> {
        Ok((parse_rational(&self.min)?, parse_rational(&self.max)?))
    }
}

fn random_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let den = rng.gen_range(1..=12i64);
    let t = ratio(rng.gen_range(0..=den), den);
    lo + (hi - lo) * t
}

fn strs<const N: usize>(p: &[Rational; N]) -> [String; N] {
    p.clone().map(|x| format_rational(&x))
}

fn verdict(p: &[Rational; 3]) -> (Option<Stratum>, bool, Option<[String; 2]>) {
    let pre = j_preimage(p);
    (classify(p), pre.is_some(), pre.as_ref().map(strs))
}

/// Samples the grid (and `random` extra points drawn from `seed`) through
/// [`gauss_point`], and each `ρ` through [`shift_point`].
pub fn spectrum_grid<F: NaField>(spec: &GridSpec, q: &F, seed: u64) -> Result<SpectrumReport, SingError> {
    let mut pts = Vec::new();
    for u in spec.u.points()? {
        for v in spec.v.points()? {
            pts.push((u.clone(), v));
        }
    }
    let (ulo, uhi) = spec.u.bounds()?;
    let (vlo, vhi) = spec.v.bounds()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..spec.random {
        pts.push((random_in(&mut rng, &ulo, &uhi), random_in(&mut rng, &vlo, &vhi)));
    }
    let mut failures = 0;
    let mut rows = Vec::with_capacity(pts.len());
    for (u, v) in pts {
        let f = gauss_point(q, &u, &v)?;
        let (stratum, in_image, preimage) = verdict(&f);
        failures += usize::from(stratum.is_none() || !in_image);
        rows.push(SpectrumRow {
            u: format_rational(&u),
            v: format_rational(&v),
            f: strs(&f),
            stratum,
            in_image,
            preimage,
        });
    }
    let mut shift_rows = Vec::new();
    if let Some(s) = &spec.shift {
        let params = ShiftParams::new(q.clone());
        for r in &s.rhos {
            let rho = parse_rational(r)?;
            let (f, stable) = shift_point(&params, &rho, s.window)?;
            let (stratum, in_image, preimage) = verdict(&f);
            failures += usize::from(stratum.is_none() || !in_image);
            shift_rows.push(ShiftRow {
                rho: format_rational(&rho),
                f: strs(&f),
                stable,
                stratum,
                in_image,
                preimage,
            });
        }
    }
    Ok(SpectrumReport {
        rows,
        shift_rows,
        failures,
    })
}
