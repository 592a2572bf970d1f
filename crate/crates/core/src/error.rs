use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate {0} outside [0, 1]")]
    OutOfRange(String),

    #[error("invalid grid diagram: {0}")]
    InvalidGrid(String),

    #[error("unknown catalog knot `{0}`")]
    UnknownKnot(String),

    #[error("stage {stage} has only {available} Cantor endpoints, need {needed}")]
    StageTooSmall {
        stage: u32,
        available: usize,
        needed: usize,
    },

    #[error("cube is not a surviving cell: {0}")]
    NotSurvivingCube(String),

    #[error("degenerate segment {0} (zero length)")]
    DegenerateSegment(usize),

    #[error("polyline needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("non-generic projection: {0}")]
    NonGeneric(String),

    #[error("diagram is not a knot: {0}")]
    NotAKnot(String),

    #[error("splice failed: {0}")]
    Splice(String),

    #[error("target {0} is not in the Cantor set of the edge")]
    TargetNotInCantor(String),

    #[error("inversion pole: point coincides with the pearl center")]
    InversionPole,

    #[error("image of the pearl is not a ball (inverting center lies in or on it)")]
    HalfSpaceImage,

    #[error("word {0:?} is not reduced")]
    NonReducedWord(Vec<usize>),

    #[error("necklace: {0}")]
    Necklace(String),

    #[error("schema: {0}")]
    Schema(String),
}
