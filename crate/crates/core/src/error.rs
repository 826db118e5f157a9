use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parity mismatch: j2={j2}, m2={m2}, q2={q2} (j-m and j-q must be integers)")]
    ParityMismatch { j2: i32, m2: i32, q2: i32 },

    #[error("range violation: j2={j2}, m2={m2}, q2={q2} (need j >= |m| and j >= |q|)")]
    RangeViolation { j2: i32, m2: i32, q2: i32 },

    #[error("invalid classic parameters: n={n}, alpha={alpha}, beta={beta}")]
    InvalidParams { n: i64, alpha: i32, beta: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("unknown kind: {0}")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, Error>;
