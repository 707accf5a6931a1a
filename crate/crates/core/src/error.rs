use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coordinate {coord} out of range for dimension {n}")]
    CoordinateOutOfRange { coord: u32, n: u32 },

    #[error("vertex {vertex} out of range for dimension {n}")]
    VertexOutOfRange { vertex: u64, n: u32 },

    #[error("observation {observed:#b} is not an {width}-bit word")]
    MalformedObservation { observed: u64, width: u32 },

    #[error("[{a},{b}]_{n} is infeasible")]
    Infeasible { n: u32, a: u32, b: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("input does not verify: {0}")]
    Unverified(String),

    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: u32, degree: u32 },

    #[error("{0} is not a codeword")]
    NotCodeword(u64),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}
