use thiserror::Error;

/// Unified error type for the toolkit.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// that the CLI embeds in error reports.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// An argument is outside its mathematical domain (non-finite value,
    /// probability outside [0, 1], non-positive scale, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// A variance estimate required to be positive came out zero.
    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    /// Series in a validation dataset do not all have the same replicate count.
    #[error("unbalanced design: {0}")]
    Unbalanced(String),

    /// The design cannot identify the requested variance components.
    #[error("unidentifiable design: {0}")]
    Unidentifiable(String),

    /// A run rule failed validation or its text form failed to parse.
    #[error("invalid rule: {0}")]
    InvalidRule(String),

    /// The rule's half-width and the acceptance limits disagree.
    #[error(
        "limit mismatch: rule half-width {rule_lambda} differs from acceptance half-width {limits_lambda}"
    )]
    LambdaMismatch {
        rule_lambda: f64,
        limits_lambda: f64,
    },

    /// A probability grid was not sorted ascending.
    #[error("grid not sorted ascending at index {index}")]
    UnsortedGrid { index: usize },

    /// A dataset file failed structural validation.
    #[error("dataset: {0}")]
    Dataset(String),

    /// An exact enumeration was requested beyond its supported size.
    #[error("too large: {0}")]
    TooLarge(String),
}

impl Error {
    /// Stable identifier for report documents and FFI status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::DegenerateVariance(_) => "degenerate-variance",
            Error::Unbalanced(_) => "unbalanced-design",
            Error::Unidentifiable(_) => "unidentifiable-design",
            Error::InvalidRule(_) => "invalid-rule",
            Error::LambdaMismatch { .. } => "limit-mismatch",
            Error::UnsortedGrid { .. } => "unsorted-grid",
            Error::Dataset(_) => "dataset",
            Error::TooLarge(_) => "too-large",
        }
    }
}
