use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("form is zero within tolerance")]
    ZeroForm,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("point lies on the conic")]
    PointOnConic,
    #[error("the two conics are proportional")]
    ProportionalConics,
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("every member of the pencil is degenerate")]
    AllDegenerate,
    #[error("pencil member at ({0}) is degenerate")]
    DegenerateMemberAt(String),
    #[error("form has the wrong signature")]
    WrongSignature,
    #[error("cone is circular")]
    CircularCone,
    #[error("parameter {0} is outside the admissible window")]
    LambdaOutOfRange(f64),
    #[error("form is definite")]
    DefiniteForm,
    #[error("configuration has no common self-polar triangle")]
    NoSelfPolarTriangle,
    #[error("conic has no real points")]
    EmptyConic,
    #[error("focus is ideal")]
    IdealFocus,
    #[error("directrix meets the polar of the focus in an isotropic point")]
    DegenerateCenter,
    #[error("line is the polar of a focus")]
    UndefinedForPolar,
    #[error("conic and absolute are not simultaneously diagonalizable")]
    NonDiagonalizablePair,
    #[error("point has no real confocal coordinates")]
    NoRealCoordinates,
    #[error("point is a tangency point of the family")]
    TangentPoint,
    #[error("corners of the quadrilateral are not real")]
    NoQuadrilateral,
    #[error("sampler exhausted after {0} attempts")]
    SamplerExhausted(usize),
    #[error("wrong geometry: {0}")]
    WrongContext(String),
    #[error("parse error at {line}:{column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("invalid record: {0}")]
    ValidationError(String),
    #[error("scene has nothing to draw")]
    EmptyScene,
}

pub type Result<T> = std::result::Result<T, Error>;
