//! Crate-wide error type.

use thiserror::Error;

/// Reason a multiplication table failed group validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotAGroupReason {
    NotSquare,
    EntryOutOfRange { row: usize, col: usize, value: usize },
    RowNotPermutation(usize),
    ColumnNotPermutation(usize),
    NoIdentity,
    BadIdentityHint(usize),
    /// Witness triple (a, b, c) with (ab)c != a(bc).
    NonAssociative(usize, usize, usize),
    NoInverse(usize),
}

impl std::fmt::Display for NotAGroupReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotAGroupReason::NotSquare => write!(f, "table is not square"),
            NotAGroupReason::EntryOutOfRange { row, col, value } => {
                write!(f, "entry [{row}][{col}] = {value} out of range")
            }
            NotAGroupReason::RowNotPermutation(r) => write!(f, "row {r} is not a permutation"),
            NotAGroupReason::ColumnNotPermutation(c) => {
                write!(f, "column {c} is not a permutation")
            }
            NotAGroupReason::NoIdentity => write!(f, "no two-sided identity"),
            NotAGroupReason::BadIdentityHint(i) => write!(f, "hinted identity {i} is not one"),
            NotAGroupReason::NonAssociative(a, b, c) => {
                write!(f, "non-associative witness ({a}, {b}, {c})")
            }
            NotAGroupReason::NoInverse(x) => write!(f, "element {x} has no inverse"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(NotAGroupReason),

    #[error("closure budget exceeded (budget {budget}, reached {reached})")]
    ClosureBudgetExceeded { budget: usize, reached: usize },

    #[error("assignment is not a homomorphism: witness pair ({0}, {1})")]
    NotAHomomorphism(usize, usize),

    #[error("budget exceeded: projected size {projected} over budget {budget}")]
    BudgetExceeded { projected: usize, budget: usize },

    #[error("window-inexact result for hyperplanes {0:?} in strict mode")]
    WindowInexact(Vec<usize>),

    #[error("subgraph is not gated: {0}")]
    NotGated(String),

    #[error("hyperplanes dual to edges {0} and {1} are not transverse")]
    NotTransverse(usize, usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("ambiguous sector label on hyperplane {hyperplane}: {detail}")]
    AmbiguousLabel { hyperplane: usize, detail: String },

    #[error("groupoid word not composable at position {0}")]
    NotComposable(usize),

    #[error("specialness conditions failed: {0}")]
    ConditionsFailed(String),

    #[error("not a covering: {0}")]
    NotACovering(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
