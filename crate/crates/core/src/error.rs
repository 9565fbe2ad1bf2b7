use thiserror::Error;

/// Errors raised by dataset ingestion, scoring and search.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input has no data rows")]
    NoRows,
    #[error("input needs at least 2 columns, found {0}")]
    TooFewColumns(usize),
    #[error("missing cell at row {row}, column {column:?}")]
    MissingCell { row: usize, column: String },
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("unknown target column {0:?}")]
    UnknownTarget(String),
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid attribute set: {0}")]
    InvalidAttributes(String),
    #[error("counts sum to {sum}, expected {n}")]
    CountsMismatch { sum: u64, n: u64 },
    #[error("degenerate target: the target column is constant, fraction of information is undefined")]
    DegenerateTarget,
    #[error("adjustment undefined: target entropy does not exceed expected mutual information")]
    AdjustmentUndefined,
    #[error("permutation oracle supports n <= {max}, got n = {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("exhaustive search supports d <= {max} attributes, got d = {d}")]
    ExhaustiveTooLarge { d: usize, max: usize },
    #[error("no pmf in regime ({lo}, {hi}] after {draws} draws")]
    RegimeSamplingFailed { lo: f64, hi: f64, draws: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
