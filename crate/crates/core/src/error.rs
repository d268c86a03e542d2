use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma monomial has repeated index {0}; reduce it with the Clifford relation first")]
    UnreducedMonomial(u8),
    #[error("frame index {0} out of range 0..9")]
    FrameIndex(usize),
    #[error("chirality of the zero spinor is undefined")]
    ZeroSpinor,
    #[error("spinor parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("form degree {degree} invalid for dimension {dim}")]
    Degree { degree: usize, dim: usize },
    #[error("Majorana expansion of {row} gave {got} independent spinors, expected {expected}")]
    ExpansionCount { row: String, got: usize, expected: usize },
    #[error("{0}")]
    Stabilizer(String),
    #[error("metric is singular at the evaluation point")]
    SingularMetric,
    #[error("point {0:?} lies inside the guarded region")]
    Guard(Vec<f64>),
    #[error("background provides no vielbein")]
    MissingVielbein,
    #[error("almost complex structure fails I^2 = -1 (residual {0:e})")]
    NotComplex(f64),
    #[error("4-form is not self-dual (residual {0:e})")]
    NotSelfDual(f64),
    #[error("condition `{0}` needs data that was not supplied")]
    MissingField(String),
    #[error("invalid background spec: {0}")]
    Spec(String),
    #[error("structure constants are not self-dual (residual {0:e})")]
    NotSelfDualAlgebra(f64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
