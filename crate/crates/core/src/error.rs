use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "the complete complex on {n} vertices has no {d}-cells (needs at least {need} vertices)"
    )]
    EmptyComplex { n: usize, d: usize, need: usize },

    #[error("dimension {0} is not supported (expected 0..=3)")]
    UnsupportedDimension(usize),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("cannot draw {k} distinct vertices out of {available}")]
    TupleTooLong { k: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("{what} needs at least {min} vertices, got {n}")]
    TooFewVertices {
        what: &'static str,
        n: usize,
        min: usize,
    },

    #[error("{what} is limited to n <= {max}, got {n}")]
    TooManyVertices {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("{what} would need {size} entries, above the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("coset enumeration over {generators} generators exceeds the 2^20 limit")]
    CosetTooLarge { generators: usize },

    #[error("input is not a cocycle: the differential is -1 on {violations} cells")]
    NotACocycle { violations: u64 },

    #[error("directed differential is not square-symmetric at {tuple:?}")]
    Asymmetric { tuple: [u32; 4] },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
