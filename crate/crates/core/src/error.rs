use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: payload contains the terminator byte 0x{terminator:02x}")]
    TerminatorInPayload { line: usize, terminator: u8 },
    #[error("collection is empty")]
    EmptyCollection,
    #[error("line {line}: data before header")]
    DataBeforeHeader { line: usize },
    #[error("record {record} (line {line}) has an empty sequence")]
    EmptyRecord { record: usize, line: usize },
    #[error("empty payload at index {index}")]
    EmptyPayload { index: usize },

    #[error("row {row} out of range 1..={total}")]
    RowOutOfRange { row: usize, total: usize },
    #[error("invalid run position: run {run}, offset {offset}")]
    InvalidPosition { run: u32, offset: usize },
    #[error("inconsistent move table: {0}")]
    Structure(String),
    #[error("split threshold must be at least 2, got {0}")]
    SplitThreshold(usize),

    #[error("invalid transition graph: {0}")]
    InvalidGraph(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("layout covers {layout} runs but {expected} were expected")]
    LayoutSize { layout: usize, expected: usize },
    #[error(
        "{runs} runs exceed the exact solver limit of {limit}; \
         binary integer linear programming is unlikely to scale, use a heuristic strategy \
         (first-visit or greedy)"
    )]
    TooManyRuns { runs: usize, limit: usize },
    #[error("the BILP needs at least 2 runs, got {0}")]
    TooFewRuns(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
