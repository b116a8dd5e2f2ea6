use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial of degree {degree} exceeds truncation degree {truncation}")]
    DegreeOverflow { degree: usize, truncation: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("term {index}: coefficient polynomial has degree {degree} > order {order}, so the operator does not preserve degree")]
    DegreeCondition { index: usize, order: usize, degree: usize },

    #[error("term {index}: order must be at least 1")]
    ZeroOrder { index: usize },

    #[error("zero denominator in {context}")]
    ZeroDenominator { context: String },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("series did not converge within {max_terms} terms")]
    SeriesNotConverged { max_terms: usize },

    #[error("scaling requires {required} squarings, limit is {max}")]
    ScalingLimit { required: u32, max: u32 },

    #[error("initial functional is not stationary: max residual {residual:e} > {tol:e}")]
    NotStationary { residual: f64, tol: f64 },

    #[error("series tail bound {bound:e} exceeds tolerance {tol:e} after {kmax} terms")]
    TailBound { kmax: usize, bound: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
