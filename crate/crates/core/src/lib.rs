//! Exact umbral calculus: truncated series, shift-invariant operators,
//! sequences of binomial type and their logarithmic extension.

pub mod error;
pub mod harmonic;
pub mod identities;
pub mod logseq;
pub mod numbers;
pub mod numeric;
pub mod operator;
pub mod polynomial;
pub mod sequence;
pub mod series;

pub type Rat = num_rational::BigRational;

pub use error::{Error, Result};
pub use harmonic::HarmonicLogSeries;
pub use logseq::LogBinomialSequence;
pub use operator::{DeltaOperator, ShiftInvariantOperator};
pub use polynomial::Polynomial;
pub use sequence::{BinomialSequence, ConnectionMatrix};
pub use series::TruncatedSeries;
