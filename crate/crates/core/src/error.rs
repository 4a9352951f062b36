use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("arity must be at least 1")]
    InvalidArity,
    #[error("alphabet of base {base} and arity {arity} is too large")]
    AlphabetTooLarge { base: u32, arity: usize },
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u32, u32),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("digit tuple has {got} entries, expected {expected}")]
    TupleLength { expected: usize, got: usize },
    #[error("state {0} out of range")]
    StateOutOfRange(usize),
    #[error("state {state} has two transitions on letter {letter}")]
    NonDeterministic { state: usize, letter: u32 },
    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),
    #[error("state limit of {limit} exceeded")]
    StateCap { limit: usize },
    #[error("value {0} lies outside [0,1]")]
    OutsideUnitInterval(String),
    #[error("empty interval: lower end {lower} exceeds upper end {upper}")]
    EmptyInterval { lower: String, upper: String },
    #[error("empty digit set")]
    EmptyDigitSet,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("operation needs a nonempty set")]
    EmptySet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tower sequence beyond level {max} is not representable (asked for {requested})")]
    TooManyLevels { requested: usize, max: usize },
    #[error("depth {depth} exceeds the descriptor bound {bound}")]
    BeyondBound { depth: u64, bound: u64 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("enumerated prefix too short: {0}")]
    InsufficientPrefix(String),
    #[error("verdict refused: total disconnectedness not certified up to depth {max_depth}")]
    VerdictRefused { max_depth: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
