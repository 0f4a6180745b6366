use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not square and symmetric: {0}")]
    NotSymmetric(String),
    #[error("form is indefinite (rank differs from |signature|)")]
    IndefiniteForm,
    #[error("form is degenerate (determinant 0)")]
    SingularForm,
    #[error("lattice must have rank at least 1")]
    EmptyLattice,
    #[error("vector does not lie in the dual lattice")]
    NotInDualLattice,
    #[error("lattice is not unimodular (discriminant {0})")]
    NotUnimodular(String),
    #[error("overlattice is not integral")]
    NotIntegral,
    #[error("group of order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: String, cap: u64 },
    #[error("no characteristic covector projects into the subgroup")]
    EmptyConstraintSet,
    #[error("d-invariant table is incomplete: {0}")]
    IncompleteTable(String),
    #[error("invalid d-invariant table: {0}")]
    InvalidTable(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("search exceeds oracle caps: {0}")]
    SearchTooLarge(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("oracle disagrees with optimized path: {0}")]
    OracleMismatch(String),
}

impl Error {
    /// Stable machine-readable code used by the command line frontend.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SINGULAR_MATRIX",
            Error::NotPositiveDefinite => "NOT_POSITIVE_DEFINITE",
            Error::NotSymmetric(_) => "NOT_SYMMETRIC",
            Error::IndefiniteForm => "INDEFINITE_FORM",
            Error::SingularForm => "SINGULAR_FORM",
            Error::EmptyLattice => "EMPTY_LATTICE",
            Error::NotInDualLattice => "NOT_IN_DUAL_LATTICE",
            Error::NotUnimodular(_) => "NOT_UNIMODULAR",
            Error::NotIntegral => "NOT_INTEGRAL",
            Error::GroupTooLarge { .. } => "GROUP_TOO_LARGE",
            Error::EmptyConstraintSet => "EMPTY_CONSTRAINT_SET",
            Error::IncompleteTable(_) => "INCOMPLETE_TABLE",
            Error::InvalidTable(_) => "INVALID_TABLE",
            Error::GroupMismatch(_) => "GROUP_MISMATCH",
            Error::SearchTooLarge(_) => "SEARCH_TOO_LARGE",
            Error::Parse(_) => "PARSE",
            Error::Io(_) => "IO",
            Error::OracleMismatch(_) => "ORACLE_MISMATCH",
        }
    }
}
