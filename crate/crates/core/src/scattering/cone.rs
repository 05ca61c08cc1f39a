use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::nascalar::rational::{format_rational, int};
use crate::nascalar::Rational;
use crate::qtorus::{Exponent, Truncation};

use super::ScatterError;

/// Anchor covectors `α₁, α₂` with `α₁ ∧ α₂ > 0`, and positive weights
/// giving `R_{α₁}^{-n₁} R_{α₂}^{-n₂}` filtration degree `n₁w₁ + n₂w₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    alpha1: [i64; 2],
    alpha2: [i64; 2],
    weights: [Rational; 2],
}

/// Ray `n₂/n₁` in `[0, +∞]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    Finite(Rational),
    Infinite,
}

impl Slope {
    pub fn of(n1: u64, n2: u64) -> Self {
        if n1 == 0 {
            Slope::Infinite
        } else {
            Slope::Finite(Rational::new((n2 as i64).into(), (n1 as i64).into()))
        }
    }

    pub fn zero() -> Self {
        Slope::Finite(Rational::zero())
    }

    /// Primitive `(n₁, n₂)` on the ray.
    pub fn primitive(&self) -> (u64, u64) {
        match self {
            Slope::Infinite => (0, 1),
            Slope::Finite(r) => {
                let n2: u64 = r.numer().try_into().expect("slope is non-negative");
                let n1: u64 = r.denom().try_into().expect("slope is non-negative");
                (n1, n2)
            }
        }
    }

    pub fn contains(&self, n1: u64, n2: u64) -> bool {
        (n1, n2) != (0, 0) && Slope::of(n1, n2) == *self
    }

    pub fn parse(s: &str) -> Result<Self, ScatterError> {
        if s == "inf" {
            return Ok(Slope::Infinite);
        }
        let r = crate::nascalar::rational::parse_rational(s)?;
        if r.is_negative() {
            return Err(ScatterError::InvalidInput(format!("negative slope {s}")));
        }
        Ok(Slope::Finite(r))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Infinite => f.write_str("inf"),
            Slope::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

pub(crate) fn wedge(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

impl Cone {
    pub fn new(alpha1: [i64; 2], alpha2: [i64; 2]) -> Result<Self, ScatterError> {
        Self::weighted(alpha1, alpha2, [int(1), int(1)])
    }

    pub fn weighted(alpha1: [i64; 2], alpha2: [i64; 2], weights: [Rational; 2]) -> Result<Self, ScatterError> {
        if wedge(alpha1, alpha2) <= 0 {
            return Err(ScatterError::InvalidCone(format!(
                "{alpha1:?} ∧ {alpha2:?} = {} is not positive",
                wedge(alpha1, alpha2)
            )));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(ScatterError::InvalidCone("weights must be positive".into()));
        }
        Ok(Cone {
            alpha1,
            alpha2,
            weights,
        })
    }

    /// `α₁ = dx`, `α₂ = dy`.
    pub fn standard() -> Self {
        Cone {
            alpha1: [1, 0],
            alpha2: [0, 1],
            weights: [int(1), int(1)],
        }
    }

    pub fn alpha1(&self) -> [i64; 2] {
        self.alpha1
    }

    pub fn alpha2(&self) -> [i64; 2] {
        self.alpha2
    }

    pub fn weights(&self) -> &[Rational; 2] {
        &self.weights
    }

    pub fn wedge(&self) -> i64 {
        wedge(self.alpha1, self.alpha2)
    }

    /// The linear functional `ℓ` with `ℓ(-α_i) = w_i`.
    pub fn ell(&self) -> [Rational; 2] {
        let [a, b] = self.alpha1;
        let [c, d] = self.alpha2;
        let [w1, w2] = &self.weights;
        let det = int(self.wedge());
        [
            (-w1 * int(d) + w2 * int(b)) / &det,
            (-int(a) * w2 + w1 * int(c)) / &det,
        ]
    }

    pub fn degree_of(&self, e: &[i64]) -> Rational {
        let [lx, ly] = self.ell();
        lx * int(e[0]) + ly * int(e[1])
    }

    pub fn degree(&self, n1: u64, n2: u64) -> Rational {
        &self.weights[0] * int(n1 as i64) + &self.weights[1] * int(n2 as i64)
    }

    /// Distinct degrees `0 < d <= order` attained by the cone lattice, ascending.
    pub fn degree_levels(&self, order: &Rational) -> Vec<Rational> {
        let mut out = std::collections::BTreeSet::new();
        let mut n1 = 0u64;
        while self.degree(n1, 0) <= *order {
            let mut n2 = 0u64;
            while self.degree(n1, n2) <= *order {
                if (n1, n2) != (0, 0) {
                    out.insert(self.degree(n1, n2));
                }
                n2 += 1;
            }
            n1 += 1;
        }
        out.into_iter().collect()
    }

    /// `-(n₁α₁ + n₂α₂)`.
    pub fn exponent(&self, n1: u64, n2: u64) -> Exponent {
        let (n1, n2) = (n1 as i64, n2 as i64);
        vec![
            -(n1 * self.alpha1[0] + n2 * self.alpha2[0]),
            -(n1 * self.alpha1[1] + n2 * self.alpha2[1]),
        ]
    }

    /// Inverse of [`Cone::exponent`], if `-e` lies in the closed cone lattice.
    pub fn decompose(&self, e: &[i64]) -> Option<(u64, u64)> {
        let m = [-e[0], -e[1]];
        let det = self.wedge();
        let n1 = wedge(m, self.alpha2);
        let n2 = wedge(self.alpha1, m);
        if !n1.is_multiple_of(&det) || !n2.is_multiple_of(&det) {
            return None;
        }
        let (n1, n2) = (n1 / det, n2 / det);
        (n1 >= 0 && n2 >= 0).then_some((n1 as u64, n2 as u64))
    }

    /// Keeps monomials of degree at most `order` above `z^anchor`.
    pub fn truncation(&self, anchor: &[i64], order: &Rational) -> Truncation {
        let ell = self.ell();
        let max = self.degree_of(anchor) + order;
        Truncation::new(ell.to_vec(), max)
    }

    /// `⟨n₁α₁ + n₂α₂, x⟩`.
    pub fn pairing(&self, n1: u64, n2: u64, x: &[Rational; 2]) -> Rational {
        let e = self.exponent(n1, n2);
        -(int(e[0]) * &x[0] + int(e[1]) * &x[1])
    }
}
