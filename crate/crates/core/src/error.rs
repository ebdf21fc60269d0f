use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Coxeter spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown generator label {0:?}")]
    UnknownGenerator(String),

    #[error("element {element} is not in the double coset with minimal representative {p_min}")]
    NotInCoset { element: String, p_min: String },

    #[error("subset precondition violated: {0}")]
    SubsetPrecondition(String),

    #[error("element is not in the ({i}, {j}) hom-space; nonzero remainder {remainder}")]
    NotInSchur { i: String, j: String, remainder: String },

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("translation search exhausted depth cap {cap} for coset {p_min}")]
    SearchExhausted { cap: usize, p_min: String },

    #[error("unsupported for this group: {0}")]
    Unsupported(String),

    #[error("degree cap {cap} exceeds the limit {limit}")]
    DegreeCap { cap: u32, limit: u32 },

    #[error("dimension guard exceeded: {dim} > {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn inexact(num: &LaurentPoly, den: &LaurentPoly) -> Self {
        Error::InexactDivision(format!("({num}) / ({den})"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
