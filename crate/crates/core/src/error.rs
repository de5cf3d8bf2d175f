use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("missing angle for label `{label}` in column {column}")]
    MissingAngle { column: usize, label: String },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("relabel collision: `{label}` already present in column {column}")]
    RelabelCollision { column: usize, label: String },

    #[error("invalid merge plan: {0}")]
    InvalidMerge(String),

    #[error("merge plan has no merged group")]
    NoMergedGroup,

    #[error("product set is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("template infeasible: the merged-party kernel is zero-dimensional")]
    TemplateInfeasible,

    #[error("zero operator: the product set spans the whole space")]
    ZeroOperator,

    #[error("product set is not a certified UPB")]
    NotCertifiedUpb,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
