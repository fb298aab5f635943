use thiserror::Error;

/// Errors produced by alignment construction, refinement and log I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("trace index {index} out of range for a log of {len} traces")]
    TraceOutOfRange { index: usize, len: usize },

    #[error("row {row} out of range for an alignment of {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },

    #[error("row subset must be a non-empty proper subset of the {rows} alignment rows")]
    InvalidSubset { rows: usize },

    #[error("profiles share trace {trace}; row sets must be disjoint")]
    OverlappingRows { trace: usize },

    #[error("operation needs at least {needed} rows, alignment has {rows}")]
    TooFewRows { needed: usize, rows: usize },

    #[error("log contains no traces")]
    EmptyLog,

    #[error("column {column} member row {row} out of range for {rows} rows")]
    MemberOutOfRange {
        column: usize,
        row: usize,
        rows: usize,
    },

    #[error("column {column} mixes activities {first:?} and {second:?}")]
    MixedColumn {
        column: usize,
        first: String,
        second: String,
    },

    #[error("exhaustive merge of {columns} columns exceeds the limit of {limit}")]
    InstanceTooLarge { columns: usize, limit: usize },

    #[error("line {line}: activity token {token:?} collides with the gap token")]
    GapTokenCollision { line: usize, token: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing column {0:?} in header")]
    MissingColumn(String),

    #[error("input contains no traces")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
