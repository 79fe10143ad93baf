use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClutterError {
    #[error("edge {small:?} is contained in edge {large:?}")]
    Containment { small: Vec<u32>, large: Vec<u32> },
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("edge {0:?} appears more than once")]
    DuplicateEdge(Vec<u32>),
    #[error("edges must be nonempty")]
    EmptyEdge,
    #[error("a clutter needs at least one edge")]
    NoEdges,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap of {cap} elements")]
    FieldTooLarge { p: u64, m: u32, cap: u64 },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("encoding {value} is not an element of GF({q})")]
    ForeignElement { value: u32, q: u32 },
    #[error("{what}: {required} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, required: u128, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Clutter(#[from] ClutterError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("{check} disagrees: {detail}")]
    Discrepancy { check: String, detail: String },
    #[error("{bound} bound violated: {zeros} zeros > {limit}")]
    BoundViolation { bound: &'static str, zeros: u64, limit: u64 },
}

impl Error {
    /// True for errors that indicate a mathematical inconsistency rather
    /// than bad input or an exhausted budget.
    pub fn is_discrepancy(&self) -> bool {
        matches!(self, Error::Discrepancy { .. } | Error::BoundViolation { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
