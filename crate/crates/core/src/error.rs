use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inexact division; remainder has leading term {0}")]
    InexactDivision(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("degree too low: {0}")]
    DegreeTooLow(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root isolation failed at {0} bits")]
    PrecisionExhausted(u32),
    #[error("polynomial is reducible: {0}")]
    NotIrreducible(String),
    #[error("wrong Galois class: {0}")]
    WrongGaloisClass(String),
    #[error("both quadratic discriminants vanish, impossible for an irreducible quartic")]
    ImpossibleForIrreducible,
    #[error("identity `{identity}` violated: {detail}")]
    InternalIdentityViolation { identity: String, detail: String },
    #[error("Bezout system is singular")]
    BezoutFailure,
    #[error("arguments are not coprime: {0}")]
    NotCoprime(String),
    #[error("numerical identity violated: {0}")]
    IdentityViolation(String),
    #[error("neither pairing gives a rational quartic factor")]
    SplitFailure,
    #[error("root ordering inconsistent: {0}")]
    OrderingInconsistent(String),
    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailure(String),
    #[error("norm form identity fails: {0}")]
    NormFormViolation(String),
    #[error("bad prime: {0}")]
    BadPrime(String),
    #[error("hypotheses fail: {}", .0.join(", "))]
    HypothesisViolation(Vec<String>),
    #[error("splitting predicted but not found: {0}")]
    TheoryViolation(String),
    #[error("modulus shares a factor with the discriminant: {0}")]
    BadModulus(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("basis vectors are dependent")]
    SingularBasis,
    #[error("direction vector has T(d) = 0")]
    DegenerateDirection,
    #[error("vectors are collinear")]
    Collinear,
    #[error("lattice of rank zero")]
    EmptyLattice,
    #[error("undecided within budget: {0}")]
    Undecided(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
