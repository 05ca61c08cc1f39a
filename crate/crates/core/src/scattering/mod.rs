//! Wall automorphisms of the quantum plane and their slope factorization.

mod cone;
mod dilog;
mod factor;
mod grouplog;
mod json;
mod lines;
mod wall;

pub use cone::{Cone, Slope};
pub use dilog::{dilog_element_log, qdilog, qpochhammer_inf, wall_log, QDilogSeries};
pub use factor::{
    dilog_factor, factorize, factorize_product, factorize_with, five_term_check, ordered_product, pentagon_report,
    FiveTermReport, Schedule,
};
pub use grouplog::{slope_component, GroupLog, SlopeFactor};
pub use json::{DiagramJson, FactorJson, KindJson, LineJson, Preset, RegionJson};
pub use lines::{build_scattering_tree, collide, crossing, transport_wall, Crossing, Line, LineKind, Region};
pub use wall::{conjugate_by_exp, elementary_wall, WallAutomorphism, WallVariant};

use thiserror::Error;

use crate::nascalar::{LogNorm, ScalarError};
use crate::qtorus::TorusError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("coefficient at (n1, n2) = ({n1}, {n2}) exceeds the admissible bound by {excess}")]
    Inadmissible { n1: u64, n2: u64, excess: LogNorm },
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("q^{0} = 1: root of unity")]
    RootOfUnity(usize),
    #[error("truncation orders differ")]
    OrderMismatch,
    #[error("no convergence: {0}")]
    Nonconvergence(String),
    #[error("transport scalar is not contracting")]
    ContractionViolation,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coefficient at ({n1}, {n2}) is off the ray of slope {slope}")]
    NotSlopeHomogeneous { slope: String, n1: u64, n2: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
