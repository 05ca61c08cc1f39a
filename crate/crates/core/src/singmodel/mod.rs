//! The algebra `A_q(S)` (α, β, γ with `αγ = qγα`, `qβγ = γβ`,
//! `βα - qαβ = 1 - q`, `(αβ - 1)γ = 1`) through its embedding into the
//! `β, γ` quantum torus, the auxiliary algebra `B`, the three-chart atlas of
//! the punctured plane, the shift representation on `V_r`, and the maps
//! `f` and `j` describing the image of the spectrum.

use thiserror::Error;

use crate::nascalar::ScalarError;
use crate::qtorus::TorusError;

mod algebra;
mod charts;
mod shift;
mod spectrum;

pub use algebra::{
    aqs_embed, aqs_embed_word, aqs_relations, aqs_relations_check, aqs_torus, b_gauss_norm, AqsElement, AqsExpr,
    BAlgebra, BElement, Gen, RelationReport,
};
pub use charts::{
    chart_generator, chart_project, chart_torus, gi_chart_hom, gluing_compat_check, Chart, ChartAtlas, GluingCase,
    GluingReport,
};
pub use shift::{operator_log_norm, shift_representation, OperatorNorm, ShiftOperator, ShiftParams};
pub use spectrum::{
    classify, f_map, gauss_point, j_embed, j_preimage, shift_point, spectrum_grid, AxisSpec, GridSpec, ShiftRow,
    ShiftSpec, SpectrumReport, SpectrumRow, Stratum,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("window M = {got} is too small; need at least {needed}")]
    Window { needed: i64, got: i64 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("no chart U{0}")]
    InvalidChart(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
