use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::nascalar::{LogNorm, NaField};

use super::TorusError;

/// Commutation data `z_i z_j = q^{c_ij} z_j z_i` (i > j) for an `n`-variable
/// quantum torus, with a memo of the powers of `q`.
#[derive(Debug)]
pub struct TwistData<F> {
    n: usize,
    /// Full lower-triangular table; `c[i][j]` is meaningful for `i > j`.
    c: Vec<Vec<i64>>,
    q: F,
    powers: Mutex<HashMap<i64, F>>,
}

impl<F: NaField> TwistData<F> {
    /// `entries` lists `(i, j, c_ij)` with `i > j`, zero-based; missing pairs commute.
    pub fn new(n: usize, entries: &[(usize, usize, i64)], q: F) -> Result<Arc<Self>, TorusError> {
        if q.log_norm() != LogNorm::zero() {
            return Err(TorusError::InvalidTwist(format!("|q| must be 1, got log|q| = {}", q.log_norm())));
        }
        let mut c = vec![vec![0; n]; n];
        for &(i, j, v) in entries {
            if i >= n || j >= i {
                return Err(TorusError::InvalidTwist(format!("entry ({i},{j}) needs n > i > j")));
            }
            c[i][j] = v;
        }
        Ok(Arc::new(TwistData {
            n,
            c,
            q,
            powers: Mutex::new(HashMap::new()),
        }))
    }

    /// Two variables `ξ = z_1`, `η = z_2` with `ξη = qηξ`.
    pub fn plane(q: F) -> Result<Arc<Self>, TorusError> {
        Self::new(2, &[(1, 0, -1)], q)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        if i > j {
            self.c[i][j]
        } else {
            0
        }
    }

    /// Nonzero `(i, j, c_ij)` entries, `i > j`.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..i {
                if self.c[i][j] != 0 {
                    out.push((i, j, self.c[i][j]));
                }
            }
        }
        out
    }

    /// Reordering exponent: `z^I z^J = q^{κ(I,J)} z^{I+J}`.
    pub fn kappa(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut k = 0;
        for (i, (&ai, row)) in a.iter().zip(&self.c).enumerate().skip(1) {
            if ai == 0 {
                continue;
            }
            k += row[..i].iter().zip(b).map(|(c, bj)| c * ai * bj).sum::<i64>();
        }
        k
    }

    /// Skew form `φ(I,J) = κ(I,J) - κ(J,I)`; `z^I z^J = q^φ z^J z^I`.
    pub fn skew(&self, a: &[i64], b: &[i64]) -> i64 {
        self.kappa(a, b) - self.kappa(b, a)
    }

    /// `q^k`, memoized.
    pub fn q_pow(&self, k: i64) -> F {
        if k == 0 {
            return self.q.one_like();
        }
        if let Some(v) = self.powers.lock().unwrap().get(&k) {
            return v.clone();
        }
        let v = self.q.pow(k).expect("|q| = 1, so q is invertible");
        self.powers.lock().unwrap().insert(k, v.clone());
        v
    }

    /// Whether `q = 1`, i.e. the algebra is commutative.
    pub fn is_classical(&self) -> bool {
        self.q.is_one()
    }

    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.n == other.n && self.c == other.c && self.q == other.q)
    }
}
