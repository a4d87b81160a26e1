use thiserror::Error;

/// Errors raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible contexts: {0}")]
    IncompatibleContext(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient not representable in {ring}: {msg}")]
    NotRepresentable { ring: String, msg: String },
    #[error("{op} is not supported over {ring}")]
    UnsupportedBase { ring: String, op: &'static str },
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ring map is not well defined: relation {0} does not map to zero")]
    IllDefinedMap(String),
    #[error("{0} is a zero divisor")]
    ZeroDivisor(String),
    #[error("ambiguous solve ({0}); the domain assertion is false")]
    AmbiguousSolve(String),
    #[error("module generators do not span: {0}")]
    SpanningWitness(String),
    #[error("generator {0} does not map into B")]
    EscapesSubring(String),
    #[error("incomplete generators: {0} is not in the generated subring")]
    IncompleteGenerators(String),
    #[error("unsuitable saturation element: {0}")]
    UnsuitableSaturation(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("prime spot `{0}` has no saturation element")]
    MissingSaturation(String),
    #[error("improper ideal: {0} contains 1")]
    ImproperIdeal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
