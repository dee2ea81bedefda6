use thiserror::Error;

/// Errors raised by structural misuse of the library.
///
/// Failed mathematical checks (a map that is not graded, an algebra that is
/// not free, a broken cocycle) are *not* errors: they are reported as values
/// carrying a witness. Errors are reserved for inputs that violate an
/// operation's preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable tables do not match")]
    TableMismatch,

    #[error("unknown variable index {0}")]
    UnknownVariable(usize),

    #[error("unknown variable `{0}`")]
    UnknownVariableName(String),

    #[error("invalid variable table: {0}")]
    InvalidTable(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("graded algebra is not connected: weight-0 component has dimension {0}")]
    NotConnected(usize),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("algebra has nilpotency order {order}, which exceeds {bound}")]
    OrderExceeds { order: usize, bound: u32 },

    #[error("algebra has a nonzero component of weight {weight} above the order {bound}")]
    ComponentAboveOrder { weight: String, bound: u32 },

    #[error("algebra is not free; relation {witness} vanishes")]
    NotFree { witness: String },

    #[error("map is not graded: {0}")]
    NotGraded(String),

    #[error("missing transition from chart `{from}` to chart `{to}`")]
    MissingTransition { from: String, to: String },

    #[error("unknown chart `{0}`")]
    UnknownChart(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
