use thiserror::Error;

/// Errors produced by the rasterization, crossing and decomposition routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("refinement depth {requested} exceeds the maximum of {max}")]
    DepthExceeded { requested: u32, max: u32 },
    #[error("unsupported cell subdivision base {0} (expected 2 or 3)")]
    UnsupportedBase(u32),
    #[error("set `{name}` is defined on a base-{expected} grid, got base {got}")]
    BaseMismatch {
        name: String,
        expected: u32,
        got: u32,
    },
    #[error("cannot coarsen a compactum at level 0")]
    AlreadyCoarsest,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("cell sets are at different levels")]
    LevelMismatch,
    #[error("window does not contain the compactum: {0}")]
    WindowViolation(String),
    #[error("region is not grid aligned: {0}")]
    MisalignedRegion(String),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("r too large: a brick meets both sides of the separation")]
    BrickMeetsBothSides,
    #[error("second component is not in the unbounded complementary component of the first")]
    NotInUnboundedComponent,
    #[error("decompositions are over different cell sets")]
    PartitionMismatch,
    #[error("cell {0:?} does not belong to the compactum")]
    CellOutsideCompactum((i64, i64)),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
