use thiserror::Error;

/// Errors raised by the generic order operations and by algebra constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("element {0} does not belong to this algebra")]
    DomainMismatch(String),
    #[error("{element} is not below the bound {bound}")]
    Unbounded { element: String, bound: String },
    #[error("{0} is not idempotent")]
    NotIdempotent(String),
    #[error("{0} is not a primitive idempotent")]
    NotPrimitive(String),
    #[error("at least one generator is required")]
    EmptyGenerators,
    #[error("size guard `{guard}` exceeded: n = {n}, maximum is {max}")]
    SizeGuard { guard: &'static str, n: usize, max: usize },
}

/// A syntax or validity error in element notation. Columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

/// Raised when a structural invariant that the theory guarantees fails to hold.
///
/// Seeing one of these means the algebra instance (or the decomposition code)
/// is wrong, not the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invariant `{invariant}` violated: {detail}")]
pub struct InvariantViolation {
    pub invariant: &'static str,
    pub detail: String,
}

impl InvariantViolation {
    pub(crate) fn new(invariant: &'static str, detail: impl Into<String>) -> Self {
        InvariantViolation {
            invariant,
            detail: detail.into(),
        }
    }
}
