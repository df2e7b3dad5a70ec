use thiserror::Error;

/// Errors surfaced by the library. Exit-code mapping for the CLI:
/// syntax/validation -> 1, capacity -> 2, property violation -> 3.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("point is not on the variety")]
    PointNotOnVariety,
    #[error("unsupported hypersurface: {0}")]
    UnsupportedHypersurface(String),
    #[error("unsupported morphism: {0}")]
    UnsupportedMorphism(String),
    #[error("unsupported prime: {0}")]
    UnsupportedPrime(String),
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),
    #[error("centre not admissible: {0}")]
    NotAdmissible(String),
    #[error("internal divisibility failure: transform not divisible by exceptional power")]
    DivisibilityFailure,
    #[error("degenerate centre: a blow-up centre needs codimension >= 2")]
    DegenerateCenter,
    #[error("index error: {0}")]
    IndexError(String),
    #[error("marked ideals live on different ambient data: {0}")]
    MismatchedAmbient(String),
    #[error("mark underflow: k must be < d")]
    MarkUnderflow,
    #[error("no triangular maximal-contact element found")]
    NoTriangularContact,
    #[error("probe point does not lie in the cosupport")]
    ProbePointNotInCosupport,
    #[error("invalid field embedding: prime relations are not preserved")]
    InvalidEmbedding,
    #[error("marked ideal is not of maximal order")]
    NotMaximalOrder,
    #[error("resolution step cap ({0}) reached")]
    StepCap(usize),
    #[error("Hilbert-Samuel function is not constant on the centre")]
    CenterHNotConstant,
    #[error("cannot decompose input into components: {0}")]
    Undecomposable(String),
    #[error("internal round-trip failure in descent model construction")]
    RoundTripFailure,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
