use thiserror::Error;

/// Failures raised by the factorization and polygon pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not nonnegative: entry ({row}, {col}) is negative")]
    NotNonnegative { row: usize, col: usize },
    #[error("psi vector is not admissible: V({row}, {col}) = {value} is not positive")]
    NotAdmissible {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("theory violation: {0}")]
    TheoryViolation(String),
    #[error("zero pattern is not a cyclic heptagon pattern: {0}")]
    Pattern(String),
    #[error("rank error: expected {expected}, found rank {found}")]
    Rank { expected: String, found: usize },
    #[error("inconsistent scaling: {0}")]
    Consistency(String),
    #[error("degenerate section: {0}")]
    DegenerateSection(String),
    #[error("vertex {vertex} of a seven-vertex section has {tight} tight constraints")]
    Tangency { vertex: usize, tight: usize },
    #[error("point lies outside the section polygon")]
    OutsidePolygon,
    #[error("polygon needs at least three vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertices(usize, usize),
    #[error("vertices {0}, {1}, {2} are collinear")]
    CollinearVertices(usize, usize, usize),
    #[error("points are not in convex position: {0}")]
    NotConvex(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable name used in structured CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "DimensionError",
            Error::NotNonnegative { .. } => "NotNonnegative",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::TheoryViolation(_) => "TheoryViolation",
            Error::Pattern(_) => "PatternError",
            Error::Rank { .. } => "RankError",
            Error::Consistency(_) => "ConsistencyError",
            Error::DegenerateSection(_) => "DegenerateSection",
            Error::Tangency { .. } => "TangencyError",
            Error::OutsidePolygon => "OutsidePolygon",
            Error::TooFewVertices(_) => "TooFewVertices",
            Error::DuplicateVertices(..) => "DuplicateVertices",
            Error::CollinearVertices(..) => "CollinearVertices",
            Error::NotConvex(_) => "NotConvex",
            Error::Internal(_) => "InternalError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
