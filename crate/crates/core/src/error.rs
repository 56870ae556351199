use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("need at least two points")]
    TooFewPoints,

    #[error("distance {0} outside [0, sqrt(2)/2]")]
    DistanceOutOfRange(f64),

    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),

    #[error("walk is not closed")]
    OpenWalk,

    #[error("graph is not a cellular toroidal map")]
    NotToroidal,

    #[error("homology computation failed: {0}")]
    Homology(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("inconsistent enumeration parameters: {0}")]
    InconsistentSpec(String),

    #[error("shift-set bound violated: d_max = {0} exceeds sqrt(5)/5")]
    ShiftBound(f64),

    #[error("cycles are not homologically independent (determinant {0})")]
    DependentCycles(i64),

    #[error("degenerate linear part: rank {rank}, expected {expected}")]
    DegenerateLinearPart { rank: usize, expected: usize },

    #[error("lattice shift {0:?} of edge {1} outside {{-1, 0, 1}}")]
    ShiftOutOfRange([i64; 2], usize),

    #[error("numerically singular matrix (eta = {0})")]
    NumericallySingular(f64),

    #[error("ambiguous near-contacts: {0:?}")]
    AmbiguousContacts(Vec<(usize, usize)>),

    #[error("no atlas entry for N = {0}")]
    NoAtlasEntry(usize),

    #[error("invalid variant {variant} for N = {n}")]
    InvalidVariant { n: usize, variant: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
