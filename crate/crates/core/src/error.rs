use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor must be positive")]
    ZeroConductor,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field of size {size} exceeds the cap of {cap} elements")]
    FieldTooLarge { size: u64, cap: u64 },

    #[error("need at least {needed} distinct sample points, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("interpolating polynomial has non-integer coefficients")]
    NonIntegerInterpolant,

    #[error("samples are not fit by a polynomial of degree {0}")]
    SamplesNotFit(usize),

    #[error("unsupported Weyl type {0}")]
    UnsupportedType(String),

    #[error("rank {rank} is invalid for type {kind}: {reason}")]
    InvalidRank {
        kind: String,
        rank: usize,
        reason: String,
    },

    #[error("unknown class label {0}")]
    UnknownClass(String),

    #[error("group closure exceeds the cap of {0} elements")]
    GroupTooLarge(usize),

    #[error("generator is singular")]
    SingularGenerator,

    #[error("matrix of dimension {dim} over a field of size {q} cannot be packed into 128 bits")]
    EncodingOverflow { dim: usize, q: u64 },

    #[error("{0} classes exceed the character-table cap of {1}")]
    TooManyClasses(usize, usize),

    #[error("no prime l = 1 mod {0} found below the search bound")]
    NoSuitablePrime(u64),

    #[error("eigenspace splitting did not terminate in one-dimensional spaces")]
    DegenerateEigenspace,

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported value of n = {0}")]
    UnsupportedN(usize),

    #[error("element is not unipotent")]
    NotUnipotent,

    #[error("element is not a regular element of the split Cartan subalgebra")]
    NotRegularSplit,

    #[error("characteristic {0} not very good for this check")]
    CharacteristicNotVeryGood(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search window exhausted at {0}")]
    WindowExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
