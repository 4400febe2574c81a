use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular model: discriminant is zero")]
    SingularModel,
    #[error("scaling factor u must be nonzero")]
    ZeroScaling,
    #[error("degenerate 2-isogeny family: {0}")]
    DegenerateFamily(String),
    #[error("x = {0} is not a root of the 3-division polynomial")]
    NotAKernel(String),
    #[error("twist parameter must be a nonzero squarefree integer, got {0}")]
    ZeroTwist(String),
    #[error("reduction at {0} is not multiplicative")]
    NotMultiplicative(u64),
    #[error("Hilbert symbol argument is zero")]
    ZeroArgument,
    #[error("inconsistent local field datum: {0}")]
    InconsistentDatum(String),
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("independent paths disagree at {place}: {detail}")]
    PathDisagreement { place: String, detail: String },
    #[error("missing local data: {0}")]
    MissingLocalData(String),
    #[error("no case of the local table applies: {0}")]
    OutOfCases(String),
    #[error("identity violated at places {0:?}")]
    IdentityViolation(Vec<String>),
    #[error("local solvability undecided at {place} with precision {precision}")]
    PrecisionExhausted { place: String, precision: u32 },
    #[error("series mismatch at degree {degree}: expected {expected}, computed {computed}")]
    MismatchAtDegree {
        degree: usize,
        expected: String,
        computed: String,
    },
    #[error("non-integral series coefficient at degree {0}")]
    NonIntegralCoefficient(usize),
    #[error("corpus is empty after filtering")]
    EmptyCorpus,
    #[error("cannot factor {0} with the built-in factorizer")]
    FactorizationTooHard(String),
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("Selmer set is not a group: {0}")]
    NotAGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
