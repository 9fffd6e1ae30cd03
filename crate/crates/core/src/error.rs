use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IasError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular jacobian at {point}")]
    SingularJacobian { point: String },

    #[error("metric is not symmetric at {point} (residual {residual})")]
    AsymmetricMetric { point: String, residual: String },

    #[error("the 1-form u -> w(Dx u, y) is not closed: {detail}")]
    NonClosedForm { detail: String },

    #[error("input is not Lagrangian: {detail}")]
    NonLagrangianInput { detail: String },

    #[error("rank drop at {point}: expected rank {expected}, got {got}")]
    RankDrop {
        point: String,
        expected: usize,
        got: usize,
    },

    #[error("unexpected rank {got} (expected {expected}) at {point}")]
    RankUnexpected {
        point: String,
        expected: usize,
        got: usize,
    },

    #[error("generating function is not of the quadratic shape in y{index}: {detail}")]
    NotQuadraticShape { index: usize, detail: String },

    #[error("critical point is not isolated (quotient still growing at truncation degree {degree})")]
    NonIsolated { degree: u32 },

    #[error("dimension constraint violated for {label}: {detail}")]
    DimensionConstraint { label: String, detail: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("field is a black box and has no exact evaluation")]
    NotExact,

    #[error("point {point} lies outside the domain")]
    OutsideDomain { point: String },

    #[error("anti-holomorphic part does not vanish: {detail}")]
    NonVanishingAntiholomorphicPart { detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, IasError>;
