//! The quantum coordinate algebra of `GL₂` over ℚ_p with `|1 - q| < 1`:
//! PBW normal forms for `t₁₁ < t₁₂ < t₂₁ < t₂₂`, the quantum determinant,
//! the representations `V_{c,t}` on `e₀, e₁, …`, and the sup-norm over
//! admissible leaves.

use thiserror::Error;

use crate::nascalar::ScalarError;

mod json;
mod pbw;
mod rep;
mod uq;

pub use json::{Gl2NormInput, Gl2NormOutput, SampleJson, SampleNormJson, SplitJson};
pub use pbw::{
    check_q, det_q, gl2_mul, gl2_normal_form, gl2_relations, normal_form_with, GL2Element, Pbw, Strategy, WordSum, T,
};
pub use rep::{
    build_rep, default_samples, gl2_sup_norm, is_square_qp, leaf_constraints_check, one_dim_relations_check, rep_apply,
    rep_relations_check, s_forms, GL2Rep, Gl2Norm, Gl2NormReport, Gl2Operator, LeafReport, RepRelationReport,
    SampleNorm, Split,
};
pub use uq::{uq_r_norm, UqCoeffData, UqIndex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Gl2Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("inadmissible sample (c, t) = ({c}, {t}): {reason}")]
    Inadmissible { c: String, t: String, reason: &'static str },
    #[error("a21(0) = 0")]
    ZeroA21,
    #[error("window M = {got} is too small; need at least {needed}")]
    Window { needed: usize, got: usize },
    #[error("elements over different q")]
    QMismatch,
    #[error("invalid q: {0}")]
    InvalidQ(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
