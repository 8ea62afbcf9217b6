use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-invertible: zero series")]
    ZeroSeries,
    #[error("composition requires positive valuation (inner series has valuation {0})")]
    CompositionValuation(i64),
    #[error("not a delta series: valuation {valuation}, expected exactly 1")]
    NotDeltaSeries { valuation: i64 },
    #[error("exp requires valuation >= 1, got {0}")]
    ExpValuation(i64),
    #[error("log requires a series of the form 1 + O(t)")]
    LogConstantTerm,
    #[error("negative powers of D undefined on polynomials")]
    NegativePowerOnPolynomial,
    #[error("truncation too small for exact action: operator order {order}, need > {needed}")]
    TruncationTooSmall { order: i64, needed: i64 },
    #[error("coefficient of t^{exponent} is beyond the known order {order}")]
    UnknownCoefficient { exponent: i64, order: i64 },
    #[error("augmentation outside window (floor {floor})")]
    AugmentationOutsideWindow { floor: i64 },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{name}` requires parameter `{param}`")]
    MissingParameter { name: String, param: String },
    #[error("evaluation point must be positive")]
    NonPositivePoint,
    #[error("empty window: nothing is known about this series")]
    EmptyWindow,
    #[error("sequence has only {available} terms, term {requested} requested")]
    TermUnavailable { requested: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
