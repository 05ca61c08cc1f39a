//! Quantum tori `z_i z_j = q^{c_ij} z_j z_i` over a valued field.
//!
//! Elements are finite sums on the normal-ordered basis. Anything that
//! would be an infinite series (inverses, substitutions) is computed up to
//! an explicit [`Truncation`].

mod json;
mod norm;
mod series;
mod subst;
mod torsor;
mod twist;

use thiserror::Error;

use crate::nascalar::ScalarError;

pub use json::{AnySeries, NormRequest, NormResponse, SeriesJson, TwistJson};
pub use norm::{gauss_norm, point_seminorm, PolyRadius};
pub use series::{qt_invert, Exponent, QSeries, Support, Truncation};
pub use subst::{check_relations, substitute_hom, Substitution};
pub use torsor::{torsor_act, torsor_act_base, torsor_pullback_base, Orientation, TorsorElement};
pub use twist::TwistData;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TorusError {
    #[error("series have different twists")]
    TwistMismatch,
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("expected {expected} variables, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("exponent {0:?} is outside the polydisc")]
    OutsidePolydisc(Vec<i64>),
    #[error("images violate the commutation relation for (z_{i}, z_{j})", i = .0 + 1, j = .1 + 1)]
    RelationFailure(usize, usize),
    #[error("invalid torsor element: {0}")]
    InvalidTorsor(String),
    #[error("invalid radius: {0}")]
    InvalidRadius(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
